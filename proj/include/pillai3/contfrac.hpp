#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <utility>
#include <vector>

#include "pillai3/realball.hpp"

namespace pillai3 {

// Certified continued-fraction expansion of a ball. Every stored quotient is
// provably a partial quotient of every value inside the input interval, so
// `certified_len == quotients.size()` by construction.
struct CFExpansion {
    RealBall value;
    std::vector<mpz_class> quotients;                          // a_0, a_1, ...
    std::vector<std::pair<mpz_class, mpz_class>> convergents;  // (p_l, q_l)
    size_t certified_len = 0;

    const mpz_class& p(size_t l) const { return convergents.at(l).first; }
    const mpz_class& q(size_t l) const { return convergents.at(l).second; }
};

// Expand until some q_l > min_q. Throws PrecisionExhausted when the interval
// is too wide to certify the next quotient first, RationalTerminated when the
// value is exactly rational and its expansion ends before reaching min_q.
CFExpansion cf_expand(const RealBall& x, const mpz_class& min_q);

// Expand until index `max_index` is certified (quotients a_0..a_max_index).
CFExpansion cf_expand_to_index(const RealBall& x, size_t max_index);

// Exact-rational entry points (full Euclidean expansion available).
CFExpansion cf_expand(const mpq_class& x, const mpz_class& min_q);
CFExpansion cf_expand_to_index(const mpq_class& x, size_t max_index);

// Expand as far as the radius certifies, never throwing on the radius wall.
CFExpansion cf_expand_max(const RealBall& x);

// max of a_{l+1} over l in [0, l_hi], and the smallest l attaining it.
std::pair<mpz_class, size_t> max_partial_quotient(const CFExpansion& exp, size_t l_hi);

struct LegendreResult {
    enum class Kind { convergent, not_convergent } kind;
    size_t index = 0;        // l with x/y = p_l/q_l, when kind == convergent
    RealBall gap_lower;      // 1/((a_{l+1}+2) y^2), when kind == convergent
};

// Decides whether x/y (gcd(x,y)=1, y>0) is a convergent of tau by scanning
// the certified expansion up to denominator y. When it is, also returns the
// lower bound 1/((a_{l+1}+2) y^2) on |tau - x/y|.
LegendreResult legendre_locate(const RealBall& tau, const mpz_class& x, const mpz_class& y);

}  // namespace pillai3
