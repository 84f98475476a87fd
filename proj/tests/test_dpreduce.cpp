#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pillai3/dpreduce.hpp"

using namespace pillai3;

namespace {

RealBall rat(const mpz_class& n, const mpz_class& d, mpfr_prec_t p = 512) {
    return RealBall::from_rational(n, d, p);
}

}  // namespace

TEST_CASE("hand-checkable tiny case") {
    // tau = 1/7 exactly: convergents 0/1, 1/7; M = 1 needs q > 6
    RealBall tau = rat(1, 7);
    CFExpansion cf = cf_expand(mpq_class(1, 7), 6);
    REQUIRE(cf.q(cf.certified_len - 1) == 7);

    ReductionCase c{tau, rat(1, 2), RealBall::from_long(8), RealBall::from_long(2), 1};
    ReductionOutcome out = dp_reduce(c, cf);
    CHECK(out.q == 7);
    // eps = ||7/2|| - 1*||1|| = 1/2
    CHECK(out.epsilon.ge(rat(49, 100)) == Tri::yes);
    CHECK(out.epsilon.le(rat(51, 100)) == Tri::yes);
    // w_bound = floor(log(8*7/0.5)/log 2) = floor(log2 112) = 6
    CHECK(out.w_bound == 6);

    // exhaustive oracle: no (u, v, w) with u <= 1, w in (6, 50] satisfies
    // 0 < |u/7 - v + 1/2| < 8 * 2^-w  (exact rational arithmetic)
    for (long w = 7; w <= 50; ++w) {
        mpq_class envelope(8, mpz_class(1) << w);
        for (long v = -3; v <= 3; ++v) {
            mpq_class form = mpq_class(1, 7) - v + mpq_class(1, 2);
            mpq_class mag = form >= 0 ? form : mpq_class(-form);
            CHECK(!(mag > 0 && mag < envelope));
        }
    }
}

TEST_CASE("mu near zero is rejected") {
    RealBall tau = rat(1, 7);
    CFExpansion cf = cf_expand(mpq_class(1, 7), 6);
    ReductionCase c{tau, RealBall::from_long(0), RealBall::from_long(8), RealBall::from_long(2),
                    1};
    CHECK_THROWS_AS(dp_reduce(c, cf), MuNearZero);
}

TEST_CASE("invariants of the reducer inputs") {
    RealBall tau = rat(1, 7);
    CFExpansion cf = cf_expand(mpq_class(1, 7), 6);
    CHECK_THROWS_AS(
        dp_reduce({tau, rat(1, 2), RealBall::from_long(-1), RealBall::from_long(2), 1}, cf),
        DomainError);
    CHECK_THROWS_AS(
        dp_reduce({tau, rat(1, 2), RealBall::from_long(8), RealBall::from_long(1), 1}, cf),
        DomainError);
    // expansion without any q > 6M
    CHECK_THROWS_AS(
        dp_reduce({tau, rat(1, 2), RealBall::from_long(8), RealBall::from_long(2), 100}, cf),
        PrecisionExhausted);
}

TEST_CASE("soundness against exhaustive enumeration, 200 random cases") {
    std::mt19937 rng(90210);
    std::uniform_int_distribution<long> dend(100003, 999983);
    std::uniform_int_distribution<long> numd(1, 99);
    std::uniform_int_distribution<long> Md(1, 30);
    std::uniform_int_distribution<long> Ad(2, 8);

    int ran = 0;
    for (int trial = 0; trial < 400 && ran < 200; ++trial) {
        mpz_class den = dend(rng);
        mpz_class tnum = numd(rng);
        mpz_class mnum = numd(rng) * 37 + 1;
        mpz_class M = Md(rng);
        long A = Ad(rng);
        mpq_class tau_q(tnum, den);
        tau_q.canonicalize();
        mpq_class mu_q(mnum, den * 3);
        mu_q.canonicalize();

        RealBall tau = rat(tau_q.get_num(), tau_q.get_den());
        RealBall mu = rat(mu_q.get_num(), mu_q.get_den());
        ReductionCase c{tau, mu, RealBall::from_long(A), RealBall::from_long(2), M};
        CFExpansion cf;
        ReductionOutcome out;
        try {
            cf = cf_expand(tau_q, 6 * M);
            out = dp_reduce(c, cf);
        } catch (const Error&) {
            continue;  // rational terminated early or eps failed; skip the draw
        }
        ++ran;

        // oracle: enumerate every u <= M, w in (w_bound, w_bound+40], and all
        // candidate v; everything in exact rationals, independent of balls
        long wb = out.w_bound.get_si();
        for (mpz_class u = 1; u <= M; ++u) {
            mpq_class ut = mpq_class(u) * tau_q + mu_q;
            mpz_class v_center;
            mpz_fdiv_q(v_center.get_mpz_t(), ut.get_num_mpz_t(), ut.get_den_mpz_t());
            for (long w = wb + 1; w <= wb + 40; ++w) {
                mpq_class envelope(A, mpz_class(1) << w);
                for (mpz_class v = v_center - 1; v <= v_center + 2; ++v) {
                    if (v <= 0) continue;
                    mpq_class form = ut - v;
                    mpq_class mag = form >= 0 ? form : mpq_class(-form);
                    bool violates = mag > 0 && mag < envelope;
                    CHECK(!violates);
                }
            }
        }
    }
    CHECK(ran == 200);
}

TEST_CASE("w_bound grows at most like log(q'/q) under later convergents") {
    RealBall tau = div(log(RealBall::from_long(3, 1024)), log(RealBall::from_long(2, 1024)));
    CFExpansion cf = cf_expand_to_index(tau, 40);
    mpz_class M = 100;
    RealBall A = RealBall::from_long(5, 1024);
    RealBall B = RealBall::from_long(2, 1024);
    FamilyReducer red(tau, cf, A, B, M);
    RealBall mu = RealBall::from_rational(113, 355, 1024);
    ReductionOutcome first = red.reduce(mu);

    // rerun with the expansion truncated past a later convergent by raising M
    mpz_class M2 = cf.q(first.convergent_index + 2) / 6;
    FamilyReducer red2(tau, cf, A, B, M2 > M ? M2 : M + 1);
    ReductionOutcome second = red2.reduce(mu);
    CHECK(second.q > first.q);
    // growth <= log(q'/q)/log B + 1
    mpfr_prec_t p = 1024;
    RealBall growth = div(log(div(RealBall::from_integer(second.q, p),
                                  RealBall::from_integer(first.q, p))),
                          log(B));
    mpz_class allowance = growth.floor_upper() + 1;
    CHECK(second.w_bound <= first.w_bound + allowance);
    CHECK(second.w_bound >= first.w_bound);

    // ||tau q|| always lands in [0, 1/2]
    for (size_t t = 0; t < 3; ++t) {
        RealBall tq = mul(tau, RealBall::from_integer(red.q_at(t), 1024)).dist_to_nearest_int();
        CHECK(tq.ge(RealBall::from_long(0)) != Tri::no);
        CHECK(tq.le(RealBall::from_rational(1, 2)) != Tri::no);
    }
}

TEST_CASE("family sweep aggregates and records failures") {
    RealBall tau = rat(1, 7);
    CFExpansion cf = cf_expand(mpq_class(1, 7), 6);
    FamilyReducer red(tau, cf, RealBall::from_long(8), RealBall::from_long(2), 1);
    auto mu = [&](size_t i) {
        if (i == 1) return RealBall::from_long(0);  // degenerate member
        return rat(1 + 2 * static_cast<long>(i), 6);
    };
    FamilyStats st = dp_reduce_family(red, mu, 3);
    CHECK(st.members == 2);
    CHECK(st.failures.size() == 1);
    CHECK(st.failures[0].member == 1);
    CHECK(st.max_w_bound >= 6);
}
