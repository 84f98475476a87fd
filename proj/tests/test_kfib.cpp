#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pillai3/kfib.hpp"

using namespace pillai3;

namespace {

// independent oracle: the defining k-term sum recursion, no three-term trick
mpz_class naive_fib(int k, long n) {
    if (n < 2 - k) throw DomainError("naive_fib");
    std::vector<mpz_class> vals;
    for (long i = 2 - k; i <= n; ++i) {
        mpz_class v;
        if (i <= 0)
            v = 0;
        else if (i == 1)
            v = 1;
        else {
            v = 0;
            long lo = i - k;
            for (long j = std::max(lo, 2L - k); j < i; ++j) v += vals[j - (2 - k)];
        }
        vals.push_back(v);
    }
    return vals.back();
}

// the string oracles carry ~50 digits; compare at that tolerance
bool ball_matches_digits(const RealBall& b, const char* digits) {
    mpfr_t truth;
    mpfr_init2(truth, b.precision());
    mpfr_set_str(truth, digits, 10, MPFR_RNDN);
    RealBall ref = RealBall::from_endpoints(truth, truth, b.precision());
    mpfr_clear(truth);
    RealBall tol = pow_int(RealBall::from_rational(1, 10, b.precision()), 48);
    return abs_val(sub(b, ref)).lt(tol) == Tri::yes;
}

}  // namespace

TEST_CASE("exact terms against the defining recursion") {
    CHECK(fib_at(4, 1) == 1);
    CHECK(fib_at(17, 1) == 1);
    CHECK(fib_at(9, 10) == 256);  // 2^{n-2} regime, n <= k+1
    CHECK(fib_at(4, 8) == 56);

    std::vector<mpz_class> b4 = fib_block(4, 1, 8);
    std::vector<mpz_class> want = {1, 1, 2, 4, 8, 15, 29, 56};
    CHECK(b4 == want);
    CHECK(fib_block(7, 2, 2) == std::vector<mpz_class>{1});
    CHECK(fib_block(5, 1, 10).back() == 236);

    for (int k : {2, 3, 4, 7, 10}) {
        for (long n = 2 - k; n <= 120; ++n) CHECK(fib_at(k, n) == naive_fib(k, n));
    }
    CHECK_THROWS_AS(fib_at(4, -3), DomainError);
    CHECK_THROWS_AS(fib_block(4, -3, 5), DomainError);
}

TEST_CASE("power-of-two identities on the grid") {
    for (int k = 2; k <= 30; ++k) {
        mpz_class pow2 = 1;  // 2^{n-2} at n=2
        std::vector<mpz_class> blk = fib_block(k, 2, 300);
        for (long n = 2; n <= 300; ++n) {
            const mpz_class& f = blk[n - 2];
            if (n <= k + 1)
                CHECK(f == pow2);
            else
                CHECK(f < pow2);
            pow2 *= 2;
        }
        // three-term recursion, exact
        for (long n = 3; n <= 300; ++n) {
            mpz_class lag = (n - k - 1) >= 2 ? blk[n - k - 1 - 2] : fib_at(k, n - k - 1);
            CHECK(blk[n - 2] == 2 * blk[n - 1 - 2] - lag);
        }
    }
}

TEST_CASE("context for k=2 matches the golden ratio") {
    KFibContext ctx = make_context(2, 256);
    CHECK(ball_matches_digits(ctx.alpha,
                              "1.61803398874989484820458683436563811772030917980576"));
    // f_2(phi) = phi/sqrt(5)
    CHECK(ball_matches_digits(ctx.fk_alpha,
                              "0.72360679774997896964091736687312762354406183596115"));
}

TEST_CASE("context invariants across k") {
    for (int k : {2, 3, 4, 10, 50, 100, 300, 600}) {
        KFibContext ctx = make_context(k, 256);
        CHECK(ctx.alpha.lt(2) == Tri::yes);
        // strict lower bound 2(1 - 2^{-k})
        RealBall lower = sub(RealBall::from_long(2, ctx.alpha.precision()),
                             pow_int(RealBall::from_rational(1, 2, ctx.alpha.precision()), k - 1));
        CHECK(ctx.alpha.gt(lower) == Tri::yes);
        CHECK(ctx.fk_alpha.gt(RealBall::from_rational(1, 2)) == Tri::yes);
        CHECK(ctx.fk_alpha.lt(RealBall::from_rational(3, 4)) == Tri::yes);
    }
}

TEST_CASE("alpha(4) against an independent bisection oracle") {
    // plain mpfr bisection of x^4 - x^3 - x^2 - x - 1 at 1024 bits
    mpfr_t lo, hi, mid, val, t;
    mpfr_inits2(1024, lo, hi, mid, val, t, (mpfr_ptr) nullptr);
    mpfr_set_d(lo, 1.9, MPFR_RNDN);
    mpfr_set_d(hi, 2.0, MPFR_RNDN);
    auto psi = [&](const mpfr_t x) {
        mpfr_pow_ui(val, x, 4, MPFR_RNDN);
        mpfr_pow_ui(t, x, 3, MPFR_RNDN);
        mpfr_sub(val, val, t, MPFR_RNDN);
        mpfr_sqr(t, x, MPFR_RNDN);
        mpfr_sub(val, val, t, MPFR_RNDN);
        mpfr_sub(val, val, x, MPFR_RNDN);
        mpfr_sub_ui(val, val, 1, MPFR_RNDN);
        return mpfr_sgn(val);
    };
    for (int i = 0; i < 900; ++i) {
        mpfr_add(mid, lo, hi, MPFR_RNDN);
        mpfr_mul_2si(mid, mid, -1, MPFR_RNDN);
        if (psi(mid) > 0)
            mpfr_set(hi, mid, MPFR_RNDN);
        else
            mpfr_set(lo, mid, MPFR_RNDN);
    }
    KFibContext ctx = make_context(4, 256);
    RealBall oracle = RealBall::from_endpoints(lo, hi, 1024);
    CHECK(abs_val(sub(ctx.alpha, oracle)).lt(pow_int(RealBall::from_rational(1, 2, 256), 250)) ==
          Tri::yes);
    mpfr_clears(lo, hi, mid, val, t, (mpfr_ptr) nullptr);
}

TEST_CASE("binet error stays below one half") {
    KFibContext c2 = make_context(2, 256);
    RealBall e10 = binet_error(c2, 10);
    CHECK(e10.lt(RealBall::from_rational(1, 2)) == Tri::yes);
    // |55 - phi^10/sqrt 5| ~ 0.0036361, oracle value from exact Fibonacci
    CHECK(e10.gt(RealBall::from_rational(36, 10000)) == Tri::yes);
    CHECK(e10.lt(RealBall::from_rational(37, 10000)) == Tri::yes);

    KFibContext c4 = make_context(4, 256);
    CHECK(binet_error(c4, 2).lt(RealBall::from_rational(1, 2)) == Tri::yes);
    KFibContext c10 = make_context(10, 512);
    CHECK(binet_error(c10, 200).lt(RealBall::from_rational(1, 2)) == Tri::yes);

    for (int k : {2, 5, 17, 30}) {
        KFibContext ctx = make_context(k, 512);
        for (long n : {2L, 3L, 50L, 137L, 200L})
            CHECK(binet_error(ctx, n).lt(RealBall::from_rational(1, 2)) == Tri::yes);
    }
}

TEST_CASE("power bounds alpha^{n-2} <= F_n <= alpha^{n-1}") {
    KFibContext c2 = make_context(2, 256);
    CHECK(power_bounds_check(c2, 1) == Tri::yes);
    KFibContext c4 = make_context(4, 256);
    CHECK(power_bounds_check(c4, 8) == Tri::yes);
    KFibContext c5 = make_context(5, 256);
    CHECK(power_bounds_check(c5, 10) == Tri::yes);
    for (long n = 1; n <= 80; ++n) CHECK(power_bounds_check(c4, n) == Tri::yes);
}

TEST_CASE("gap to 2^{n-2} is monotone past k+2") {
    CHECK(power2_gap_monotone(4, 8));
    CHECK(power2_gap_monotone(4, 200));
    for (int k : {2, 3, 5, 9, 20}) CHECK(power2_gap_monotone(k, 300));
    // spot values from the proof: g(k+2) = 1
    CHECK((mpz_class(1) << 4) == fib_at(4, 6) + 1);
    CHECK(fib_at(4, 5) == 8);  // n <= k+1 regime, gap 0
}

TEST_CASE("zeta is the exact relative gap") {
    for (long n = 2; n <= 11; ++n) {
        RealBall z = zeta_of(10, n);
        CHECK(z.contains_zero());
        CHECK(z.is_exact());
    }
    // F_12^(10) = 2^10 - 1: zeta = -1/1024
    RealBall z12 = zeta_of(10, 12);
    RealBall want = RealBall::from_rational(-1, 1024);
    CHECK(z12.le(want) == Tri::yes);
    CHECK(z12.ge(want) == Tri::yes);
    RealBall bound10 = RealBall::from_rational(5, 32);  // 5/2^5
    CHECK(abs_val(z12).lt(bound10) == Tri::yes);

    RealBall z30 = zeta_of(12, 30);
    CHECK(abs_val(z30).lt(RealBall::from_rational(5, 64)) == Tri::yes);

    CHECK_THROWS_AS(zeta_of(9, 5), DomainError);
    CHECK_THROWS_AS(zeta_of(10, 32), DomainError);  // n >= 2^{k/2}
}
