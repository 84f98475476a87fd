#include "pillai3/kfib.hpp"

#include <deque>
#include <functional>

namespace pillai3 {

namespace {

void check_k(int k) {
    if (k < 2) throw DomainError("k must be >= 2");
}

// Window-based iteration using the three-term recursion
// F_n = 2 F_{n-1} - F_{n-k-1} (valid for n >= 3, with F_j = 0 for j <= 0).
void fib_run(int k, long n_hi, const std::function<void(long, const mpz_class&)>& emit) {
    std::deque<mpz_class> window;  // values for the last k+1 indices
    for (long n = 2 - k; n <= n_hi; ++n) {
        mpz_class value;
        if (n <= 0)
            value = 0;
        else if (n <= 2)
            value = 1;
        else
            value = 2 * window.back() - window.front();  // front() == F_{n-k-1}
        window.push_back(value);
        if (static_cast<long>(window.size()) > k + 1) window.pop_front();
        emit(n, window.back());
    }
}

}  // namespace

mpz_class fib_at(int k, long n) {
    check_k(k);
    if (n < 2 - k) throw DomainError("fib_at: n below 2-k");
    mpz_class out = 0;
    fib_run(k, n, [&](long i, const mpz_class& v) {
        if (i == n) out = v;
    });
    return out;
}

std::vector<mpz_class> fib_block(int k, long n_lo, long n_hi) {
    check_k(k);
    if (n_lo < 2 - k) throw DomainError("fib_block: n_lo below 2-k");
    if (n_lo > n_hi) throw DomainError("fib_block: empty range");
    std::vector<mpz_class> out;
    out.reserve(n_hi - n_lo + 1);
    fib_run(k, n_hi, [&](long i, const mpz_class& v) {
        if (i >= n_lo) out.push_back(v);
    });
    return out;
}

namespace {

// Psi_k(x) * (x - 1) = x^k (x - 2) + 1. The cleared form avoids the k-term
// sum; the factor (x - 1) stays positive on [1.5, 2], so signs agree with
// Psi_k there.
RealBall psi_cleared(const RealBall& x, int k) {
    RealBall two = RealBall::from_long(2, x.precision());
    return add(mul(pow_int(x, k), sub(x, two)), RealBall::from_long(1, x.precision()));
}

Tri certified_sign(const RealBall& v) {
    if (v.is_positive() == Tri::yes) return Tri::yes;
    if (v.is_negative() == Tri::yes) return Tri::no;
    return Tri::unknown;
}

}  // namespace

KFibContext make_context(int k, mpfr_prec_t precision) {
    check_k(k);
    mpfr_prec_t prec = std::max<mpfr_prec_t>(precision, k + 64);
    mpfr_prec_t store = prec + 32;

    // exact dyadic bracket: [2 - 2^{1-k}, 2]
    mpfr_t lo, hi, c, width, target;
    mpfr_init2(lo, store);
    mpfr_init2(hi, store);
    mpfr_init2(c, store);
    mpfr_init2(width, 64);
    mpfr_init2(target, 64);
    mpfr_set_ui_2exp(c, 1, 1 - k, MPFR_RNDN);
    mpfr_ui_sub(lo, 2, c, MPFR_RNDN);  // exact, store >= k+2 bits
    mpfr_set_ui(hi, 2, MPFR_RNDN);

    mpfr_prec_t eval_prec = prec;
    auto sign_at = [&](const mpfr_t pt) {
        for (mpfr_prec_t p = eval_prec; p <= precision_cap(); p *= 2) {
            RealBall xb = RealBall::from_endpoints(pt, pt, p);
            Tri s = certified_sign(psi_cleared(xb, k));
            if (s != Tri::unknown) {
                eval_prec = p;
                return s;
            }
        }
        throw PrecisionExhausted("make_context: sign of Psi_k undecidable at cap");
    };

    if (sign_at(lo) != Tri::no || sign_at(hi) != Tri::yes) {
        mpfr_clears(lo, hi, c, width, target, (mpfr_ptr) nullptr);
        throw Error("make_context: no sign change on the bracketing interval");
    }

    mpfr_set_ui_2exp(target, 1, static_cast<mpfr_exp_t>(-(prec - 4)), MPFR_RNDN);
    while (true) {
        mpfr_sub(width, hi, lo, MPFR_RNDU);
        if (mpfr_cmp(width, target) <= 0) break;
        mpfr_add(c, lo, hi, MPFR_RNDN);
        mpfr_mul_2si(c, c, -1, MPFR_RNDN);  // exact
        if (sign_at(c) == Tri::yes)
            mpfr_set(hi, c, MPFR_RNDN);
        else
            mpfr_set(lo, c, MPFR_RNDN);
    }

    KFibContext ctx;
    ctx.k = k;
    ctx.alpha = RealBall::from_endpoints(lo, hi, prec);

    // f_k(alpha) = (alpha - 1)/(2 + (k+1)(alpha - 2))
    RealBall one = RealBall::from_long(1, prec);
    RealBall two = RealBall::from_long(2, prec);
    RealBall kk1 = RealBall::from_long(k + 1, prec);
    ctx.fk_alpha = div(sub(ctx.alpha, one), add(two, mul(kk1, sub(ctx.alpha, two))));
    ctx.log_alpha = log(ctx.alpha);

    mpfr_set_ui_2exp(c, 1, 1 - k, MPFR_RNDN);
    mpfr_ui_sub(lo, 2, c, MPFR_RNDN);
    RealBall lower = RealBall::from_endpoints(lo, lo, prec);
    bool ok = ctx.alpha.gt(lower) == Tri::yes && ctx.alpha.lt(2) == Tri::yes &&
              psi_cleared(ctx.alpha, k).contains_zero() &&
              ctx.fk_alpha.gt(RealBall::from_rational(1, 2, prec)) == Tri::yes &&
              ctx.fk_alpha.lt(RealBall::from_rational(3, 4, prec)) == Tri::yes;
    mpfr_clears(lo, hi, c, width, target, (mpfr_ptr) nullptr);
    if (!ok) throw Error("make_context: invariants failed to certify");
    return ctx;
}

RealBall binet_error(const KFibContext& ctx, long n) {
    if (n < 2 - ctx.k) throw DomainError("binet_error: n below 2-k");
    mpfr_prec_t prec = ctx.alpha.precision();
    RealBall fexact = RealBall::from_integer(fib_at(ctx.k, n), prec);
    RealBall approx = mul(ctx.fk_alpha, pow_int(ctx.alpha, n - 1));
    return abs_val(sub(fexact, approx));
}

Tri power_bounds_check(const KFibContext& ctx, long n) {
    if (n < 1) throw DomainError("power_bounds_check: n must be >= 1");
    mpfr_prec_t prec = ctx.alpha.precision();
    RealBall f = RealBall::from_integer(fib_at(ctx.k, n), prec);
    Tri lo = pow_int(ctx.alpha, n - 2).le(f);
    Tri hi = f.le(pow_int(ctx.alpha, n - 1));
    if (lo == Tri::yes && hi == Tri::yes) return Tri::yes;
    if (lo == Tri::no || hi == Tri::no) return Tri::no;
    return Tri::unknown;
}

bool power2_gap_monotone(int k, long n_hi) {
    check_k(k);
    if (n_hi < k + 2) throw DomainError("power2_gap_monotone: n_hi below k+2");
    mpz_class pow2 = 1;  // 2^{n-2}, starting at n = 2
    mpz_class prev_gap = 0;
    bool ok = true;
    fib_run(k, n_hi, [&](long i, const mpz_class& v) {
        if (i < 2) return;
        mpz_class gap = pow2 - v;
        if (i <= k + 1) {
            if (gap != 0) ok = false;
        } else if (i == k + 2) {
            if (gap != 1) ok = false;
        } else {
            if (gap <= prev_gap) ok = false;
        }
        prev_gap = gap;
        pow2 *= 2;
    });
    return ok;
}

RealBall zeta_of(int k, long n, mpfr_prec_t prec) {
    if (k < 10) throw DomainError("zeta_of: k must be >= 10");
    if (n < 1) throw DomainError("zeta_of: n must be >= 1");
    mpz_class limit;  // floor(2^{k/2}) = floor(sqrt(2^k))
    mpz_class pk = mpz_class(1) << k;
    mpz_sqrt(limit.get_mpz_t(), pk.get_mpz_t());
    if (mpz_class(n) >= limit) throw DomainError("zeta_of: n must be < 2^{k/2}");
    // zeta = F_n * 2^{2-n} - 1; the power-of-two scaling is exact
    RealBall f = RealBall::from_integer(fib_at(k, n), prec);
    mpfr_t lo, hi;
    mpfr_init2(lo, prec);
    mpfr_init2(hi, prec);
    f.endpoints(lo, hi);
    mpfr_mul_2si(lo, lo, static_cast<long>(2 - n), MPFR_RNDD);
    mpfr_mul_2si(hi, hi, static_cast<long>(2 - n), MPFR_RNDU);
    RealBall scaled = RealBall::from_endpoints(lo, hi, prec);
    mpfr_clears(lo, hi, (mpfr_ptr) nullptr);
    return sub(scaled, RealBall::from_long(1, prec));
}

}  // namespace pillai3
