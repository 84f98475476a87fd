#include "pillai3/contfrac.hpp"

#include <functional>

namespace pillai3 {

namespace {

// Interval CF walk on exact rational endpoints. A quotient is emitted only
// when both endpoints share the same floor; the set of reals whose expansion
// starts with a given prefix is an interval, so the shared prefix is then
// certified for every value inside.
void expand_core(CFExpansion& out, mpq_class lo, mpq_class hi, bool exact,
                 const std::function<bool(const CFExpansion&)>& done) {
    mpz_class p_prev = 1, q_prev = 0;
    mpz_class p_cur, q_cur;

    while (true) {
        mpz_class a_lo, a_hi;
        mpz_fdiv_q(a_lo.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
        mpz_fdiv_q(a_hi.get_mpz_t(), hi.get_num_mpz_t(), hi.get_den_mpz_t());
        if (a_lo != a_hi)
            throw PrecisionExhausted("cf_expand: quotient not certified at this radius");

        if (out.quotients.empty()) {
            p_cur = a_lo;
            q_cur = 1;
        } else {
            mpz_class p_new = a_lo * p_cur + p_prev;
            mpz_class q_new = a_lo * q_cur + q_prev;
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_new;
            q_cur = q_new;
        }
        out.quotients.push_back(a_lo);
        out.convergents.emplace_back(p_cur, q_cur);
        out.certified_len = out.quotients.size();
        if (done(out)) return;

        mpq_class frac_lo = lo - a_lo;
        mpq_class frac_hi = hi - a_lo;
        if (exact) {
            if (frac_lo == 0) throw RationalTerminated();
            mpq_class next = 1 / frac_lo;
            lo = next;
            hi = next;
        } else {
            if (frac_lo == 0 || frac_hi == 0)
                throw PrecisionExhausted("cf_expand: interval touches an integer boundary");
            mpq_class nlo = 1 / frac_hi;  // inversion reverses the order
            mpq_class nhi = 1 / frac_lo;
            lo = nlo;
            hi = nhi;
        }
    }
}

CFExpansion expand_ball(const RealBall& x, const std::function<bool(const CFExpansion&)>& done) {
    CFExpansion out;
    out.value = x;
    mpq_class lo = x.lower_rational();
    mpq_class hi = x.upper_rational();
    expand_core(out, lo, hi, x.is_exact() || lo == hi, done);
    return out;
}

CFExpansion expand_rational(const mpq_class& x,
                            const std::function<bool(const CFExpansion&)>& done) {
    CFExpansion out;
    out.value = RealBall::from_rational(x);
    expand_core(out, x, x, true, done);
    return out;
}

}  // namespace

CFExpansion cf_expand(const RealBall& x, const mpz_class& min_q) {
    return expand_ball(x, [&](const CFExpansion& e) { return e.q(e.certified_len - 1) > min_q; });
}

CFExpansion cf_expand_to_index(const RealBall& x, size_t max_index) {
    return expand_ball(x, [&](const CFExpansion& e) { return e.certified_len > max_index; });
}

CFExpansion cf_expand(const mpq_class& x, const mpz_class& min_q) {
    return expand_rational(x,
                           [&](const CFExpansion& e) { return e.q(e.certified_len - 1) > min_q; });
}

CFExpansion cf_expand_to_index(const mpq_class& x, size_t max_index) {
    return expand_rational(x, [&](const CFExpansion& e) { return e.certified_len > max_index; });
}

CFExpansion cf_expand_max(const RealBall& x) {
    CFExpansion out;
    out.value = x;
    mpq_class lo = x.lower_rational();
    mpq_class hi = x.upper_rational();
    try {
        expand_core(out, lo, hi, x.is_exact() || lo == hi,
                    [](const CFExpansion&) { return false; });
    } catch (const PrecisionExhausted&) {
    } catch (const RationalTerminated&) {
    }
    return out;
}

std::pair<mpz_class, size_t> max_partial_quotient(const CFExpansion& exp, size_t l_hi) {
    if (l_hi + 1 >= exp.certified_len) throw IndexBeyondCertified();
    mpz_class best = exp.quotients[1];
    size_t arg = 0;
    for (size_t l = 0; l <= l_hi; ++l) {
        if (exp.quotients[l + 1] > best) {
            best = exp.quotients[l + 1];
            arg = l;
        }
    }
    return {best, arg};
}

LegendreResult legendre_locate(const RealBall& tau, const mpz_class& x, const mpz_class& y) {
    if (y <= 0) throw DomainError("legendre_locate: y must be positive");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
    if (g != 1) throw DomainError("legendre_locate: x/y not in lowest terms");

    CFExpansion exp = cf_expand(tau, y);  // q strictly increases, so this covers q_l <= y
    LegendreResult res;
    for (size_t l = 0; l < exp.certified_len; ++l) {
        if (exp.q(l) > y) break;
        if (exp.p(l) == x && exp.q(l) == y) {
            if (l + 1 >= exp.certified_len) exp = cf_expand_to_index(tau, l + 1);
            res.kind = LegendreResult::Kind::convergent;
            res.index = l;
            mpz_class denom = (exp.quotients[l + 1] + 2) * y * y;
            res.gap_lower = RealBall::from_rational(1, denom, tau.precision());
            return res;
        }
    }
    res.kind = LegendreResult::Kind::not_convergent;
    return res;
}

}  // namespace pillai3
