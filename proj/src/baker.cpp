#include "pillai3/baker.hpp"

namespace pillai3 {

namespace {

// run f at doubling precision until it stops throwing PrecisionExhausted
template <typename F>
auto with_escalation(mpfr_prec_t start, F&& f) {
    for (mpfr_prec_t p = start; p <= precision_cap(); p *= 2) {
        try {
            return f(p);
        } catch (const PrecisionExhausted&) {
        }
    }
    throw PrecisionExhausted();
}

RealBall pow10_ball(unsigned e, mpfr_prec_t prec) {
    mpz_class v;
    mpz_ui_pow_ui(v.get_mpz_t(), 10, e);
    return RealBall::from_integer(v, prec);
}

// mant/100 * 10^e, e.g. sci(680, 11, p) = 6.80e11
RealBall sci(long mant, unsigned e, mpfr_prec_t prec) {
    return mul(RealBall::from_rational(mant, 100, prec), pow10_ball(e, prec));
}

RealBall four_e42(mpfr_prec_t prec) {
    return mul(RealBall::from_long(4, prec), pow10_ball(42, prec));
}

// 4e42 * k^11 * (log k)^7 as a ball
RealBall lemma_bd_value(const mpz_class& k, mpfr_prec_t prec) {
    RealBall kb = RealBall::from_integer(k, prec);
    return mul(mul(four_e42(prec), pow_int(kb, 11)), pow_int(log(kb), 7));
}

}  // namespace

RealBall matveev_lower_bound(const MatveevInstance& inst) {
    if (inst.t < 2) throw DomainError("matveev: t must be >= 2");
    if (inst.A.size() != inst.t) throw DomainError("matveev: need exactly t heights");
    mpfr_prec_t prec = inst.B.precision();
    for (const auto& a : inst.A) prec = std::max(prec, a.precision());

    // guards reject certified violations; exact boundary values pass through
    RealBall min_height = RealBall::from_rational(16, 100, prec);
    for (const auto& a : inst.A)
        if (a.lt(min_height) == Tri::yes) throw DomainError("matveev: A_i below 0.16");
    if (inst.B.lt(RealBall::from_long(1, prec)) == Tri::yes)
        throw DomainError("matveev: B below 1");

    RealBall one = RealBall::from_long(1, prec);
    RealBall t = RealBall::from_long(inst.t, prec);
    RealBall d = RealBall::from_long(inst.D, prec);
    // 1.4 * 30^{t+3} * t^{4.5}
    RealBall c = mul(RealBall::from_rational(7, 5, prec),
                     pow_int(RealBall::from_long(30, prec), inst.t + 3));
    c = mul(c, mul(pow_int(t, 4), nth_root(t, 2)));
    c = mul(c, mul(pow_int(d, 2), add(one, log(d))));
    c = mul(c, add(one, log(inst.B)));
    for (const auto& a : inst.A) c = mul(c, a);
    return c;
}

RealBall guzman_luca_bound(unsigned m, const RealBall& T) {
    if (m < 1) throw DomainError("guzman_luca: m must be >= 1");
    mpfr_prec_t prec = T.precision();
    mpz_class hyp;  // (4 m^2)^m
    mpz_class base = 4 * mpz_class(m) * mpz_class(m);
    mpz_pow_ui(hyp.get_mpz_t(), base.get_mpz_t(), m);
    if (T.gt(RealBall::from_integer(hyp, prec)) != Tri::yes)
        throw HypothesisFailed("guzman_luca: T <= (4m^2)^m");
    RealBall two_m = pow_int(RealBall::from_long(2, prec), m);
    return mul(mul(two_m, T), pow_int(log(T), m));
}

mpz_class lemma_bd_bound(const mpz_class& k) {
    if (k < 4) throw DomainError("lemma_bd_bound: k must be >= 4");
    return with_escalation(default_precision(), [&](mpfr_prec_t p) {
        auto fl = lemma_bd_value(k, p).floor_exact();
        if (!fl) throw PrecisionExhausted("lemma_bd_bound: floor straddles");
        return *fl;
    });
}

int cutoff_k() {
    auto holds = [&](int k) {
        return with_escalation(default_precision(), [&](mpfr_prec_t p) {
            RealBall lhs = lemma_bd_value(k, p);
            RealBall rhs = nth_root(RealBall::from_integer(mpz_class(1) << k, p), 2);
            Tri t = lhs.lt(rhs);
            if (t == Tri::unknown) throw PrecisionExhausted();
            return t == Tri::yes;
        });
    };
    int k0 = -1;
    for (int k = 4; k <= 2048; ++k) {
        if (holds(k)) {
            k0 = k;
            break;
        }
    }
    if (k0 < 0) throw Error("cutoff_k: no cutoff below 2048");
    if (k0 > 4 && holds(k0 - 1)) throw Error("cutoff_k: predecessor unexpectedly holds");
    for (int k = k0; k <= k0 + 128; ++k)
        if (!holds(k)) throw Error("cutoff_k: window check failed at k=" + std::to_string(k));
    return k0;
}

AbsoluteBounds absolute_bounds() {
    mpfr_prec_t prec = default_precision();
    RealBall coeff = sci(542, 31, prec);
    RealBall one = RealBall::from_long(1, prec);
    RealBall k = RealBall::from_long(601, prec);
    mpz_class prev_floor = 0;
    for (int it = 0; it < 200; ++it) {
        RealBall n_bound = mul(mul(four_e42(prec), pow_int(k, 11)), pow_int(log(k), 7));
        RealBall next = mul(coeff, pow_int(add(one, log(n_bound)), 3));
        mpz_class fl = next.floor_upper();
        if (fl == prev_floor) {
            AbsoluteBounds out;
            out.k_max = fl;
            out.n_max = lemma_bd_bound(out.k_max);
            return out;
        }
        prev_floor = fl;
        k = next;
    }
    throw NonConvergence("absolute_bounds: no fixed point within 200 iterations");
}

ChainCoefficients chain_coefficients(mpfr_prec_t prec) {
    RealBall one = RealBall::from_long(1, prec);
    RealBall log2 = log(RealBall::from_long(2, prec));
    RealBall log3 = log(RealBall::from_long(3, prec));
    auto base = [&](unsigned t) {
        // 1.4 * 30^{t+3} * t^{4.5}
        RealBall tb = RealBall::from_long(t, prec);
        return mul(mul(RealBall::from_rational(7, 5, prec),
                       pow_int(RealBall::from_long(30, prec), t + 3)),
                   mul(pow_int(tb, 4), nth_root(tb, 2)));
    };

    ChainCoefficients out;
    // t=2, D=1, A = {log3, log2}: the coefficient of (1+log n)
    out.t2_base = mul(mul(base(2), log3), log2);
    // t=3, D=k, A = {3k log k, log2, k log3}: coefficient of
    // k^4 log k (1+log k)(1+log n); the published form majorizes
    // (1+log k) <= 2 log k to reach k^4 log^2 k
    out.t3_k_raw = mul(mul(mul(base(3), RealBall::from_long(3, prec)), log2), log3);
    out.t3_k_min = mul(out.t3_k_raw, RealBall::from_long(2, prec));
    out.t3_k_max = mul(mul(mul(base(3), sci(680, 11, prec)), log2), log3);
    out.t3_k_gamma3 = mul(mul(mul(base(3), sci(830, 22, prec)), log2), log3);
    out.t3_d1_second = mul(mul(mul(base(3), sci(590, 8, prec)), log2), log3);
    out.t3_d1_third = mul(mul(mul(base(3), sci(130, 20, prec)), log2), log3);
    // k < (2/log2)(1.86e31 (1+log n)^3 + 5 log2): slack folded at n >= 602
    RealBall slack = div(mul(RealBall::from_long(5, prec), log2),
                         pow_int(add(one, log(RealBall::from_long(602, prec))), 3));
    out.k_final_coeff = mul(div(RealBall::from_long(2, prec), log2), add(sci(186, 31, prec), slack));
    return out;
}

}  // namespace pillai3
