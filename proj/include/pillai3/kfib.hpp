#pragma once

#include <gmpxx.h>

#include <vector>

#include "pillai3/realball.hpp"

namespace pillai3 {

// Fixed k with a certified enclosure of the dominant root alpha(k) of
// Psi_k(x) = x^k - x^{k-1} - ... - 1 and of f_k(alpha), where
// f_k(z) = (z-1)/(2 + (k+1)(z-2)). Immutable after construction.
struct KFibContext {
    int k = 0;
    RealBall alpha;
    RealBall fk_alpha;
    RealBall log_alpha;
};

// Exact term of the k-generalized Fibonacci sequence, defined for n >= 2-k
// (k-1 leading zeros, then F_1 = F_2 = 1; each term the sum of the k
// preceding ones).
mpz_class fib_at(int k, long n);

// Terms F_{n_lo}, ..., F_{n_hi} via one rolling window.
std::vector<mpz_class> fib_block(int k, long n_lo, long n_hi);

KFibContext make_context(int k, mpfr_prec_t precision = default_precision());

// |F_n^(k) - f_k(alpha) alpha^{n-1}| as a ball; the dominant-root
// approximation keeps this below 1/2 for all n >= 2-k.
RealBall binet_error(const KFibContext& ctx, long n);

// Certifies alpha^{n-2} <= F_n^(k) <= alpha^{n-1}.
Tri power_bounds_check(const KFibContext& ctx, long n);

// Exact check that g(n) = 2^{n-2} - F_n^(k) is 0 on [2, k+1], 1 at k+2 and
// strictly increasing on [k+2, n_hi].
bool power2_gap_monotone(int k, long n_hi);

// zeta = F_n^(k) / 2^{n-2} - 1, exact as a ball. Requires k >= 10 and
// 1 <= n < 2^{k/2}.
RealBall zeta_of(int k, long n, mpfr_prec_t prec = default_precision());

}  // namespace pillai3
