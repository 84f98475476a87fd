#pragma once

#include <gmpxx.h>

#include <vector>

#include "pillai3/realball.hpp"

namespace pillai3 {

// Data for Matveev's lower bound on a nonzero linear form in t logarithms
// over a degree-D real field: log|Lambda| > -C with
// C = 1.4 * 30^{t+3} * t^{4.5} * D^2 (1+log D)(1+log B) A_1...A_t.
struct MatveevInstance {
    unsigned t = 2;
    unsigned D = 1;
    RealBall B;               // >= max|b_i|, must be >= 1
    std::vector<RealBall> A;  // each >= 0.16
};

// Returns C as a ball (the magnitude; callers read log|Lambda| > -C).
RealBall matveev_lower_bound(const MatveevInstance& inst);

// Guzman-Luca: if T > (4 m^2)^m and T > x/(log x)^m then x < 2^m T (log T)^m.
// Returns the right-hand side; throws HypothesisFailed when T <= (4m^2)^m.
RealBall guzman_luca_bound(unsigned m, const RealBall& T);

// M_k = floor(4e42 * k^11 * (log k)^7), the absolute bound on n.
mpz_class lemma_bd_bound(const mpz_class& k);

// Smallest k0 such that 4e42 k^11 (log k)^7 < 2^{k/2} certifies on
// [k0, k0+128] and fails at k0-1.
int cutoff_k();

struct AbsoluteBounds {
    mpz_class k_max;
    mpz_class n_max;  // = m_max, via lemma_bd_bound(k_max)
};

// Certified fixed point of k -> 5.42e31 (1 + log(4e42 k^11 (log k)^7))^3,
// iterated upward from k = 601.
AbsoluteBounds absolute_bounds();

// The numeric coefficients of the bound chain, each recomputed from
// Matveev's formula the way the published chain composes them.
struct ChainCoefficients {
    RealBall t2_base;        // t=2, D=1, A={log3, log2}: ~5.86e8
    RealBall t3_k_raw;       // t=3, D=k route, (1+log k) kept: ~3.27e11
    RealBall t3_k_min;       // with (1+log k) <= 2 log k: ~6.54e11
    RealBall t3_k_max;       // via A1 = 6.80e11 k^4 log^2 k (1+log n): ~7.41e22
    RealBall t3_k_gamma3;    // via A1 = 8.3e22 k^8 log^3 k (1+log n)^2: ~9.05e33
    RealBall t3_d1_second;   // t=3, D=1, A3 coeff 5.90e8: ~6.43e19
    RealBall t3_d1_third;    // t=3, D=1, A3 coeff 1.30e20: ~1.42e31
    RealBall k_final_coeff;  // (2/log2) * 1.86e31 plus slack: ~5.37e31
};

ChainCoefficients chain_coefficients(mpfr_prec_t prec = default_precision());

}  // namespace pillai3
