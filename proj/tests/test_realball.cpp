#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "pillai3/realball.hpp"

using namespace pillai3;

namespace {

// plain high-precision recomputation, independent of the ball radius logic
bool contains_mpfr(const RealBall& b, const mpfr_t truth) {
    mpfr_t lo, hi;
    mpfr_init2(lo, b.precision());
    mpfr_init2(hi, b.precision());
    b.endpoints(lo, hi);
    bool ok = mpfr_cmp(lo, truth) <= 0 && mpfr_cmp(truth, hi) <= 0;
    mpfr_clears(lo, hi, (mpfr_ptr) nullptr);
    return ok;
}

bool contained_in(const RealBall& inner, const RealBall& outer) {
    mpfr_t il, ih, ol, oh;
    mpfr_init2(il, inner.precision());
    mpfr_init2(ih, inner.precision());
    mpfr_init2(ol, outer.precision());
    mpfr_init2(oh, outer.precision());
    inner.endpoints(il, ih);
    outer.endpoints(ol, oh);
    bool ok = mpfr_cmp(ol, il) <= 0 && mpfr_cmp(ih, oh) <= 0;
    mpfr_clears(il, ih, ol, oh, (mpfr_ptr) nullptr);
    return ok;
}

}  // namespace

TEST_CASE("exact integer arithmetic") {
    RealBall a = RealBall::from_long(1);
    RealBall b = RealBall::from_long(2);
    RealBall s = add(a, b);
    CHECK(s.is_exact());
    CHECK(s.floor_exact().value() == 3);

    RealBall x = RealBall::from_rational(7, 5);
    RealBall zero = RealBall::from_long(0);
    RealBall p = mul(x, zero);  // annihilator keeps the ball exact
    CHECK(p.is_exact());
    CHECK(p.contains_zero());
    CHECK(p.floor_exact().value() == 0);
}

TEST_CASE("division radius against quadruple-precision recomputation") {
    RealBall q = div(RealBall::from_long(1, 256), RealBall::from_long(3, 256));
    // oracle: 1/3 at 1024 bits
    mpfr_t truth;
    mpfr_init2(truth, 1024);
    mpfr_set_ui(truth, 1, MPFR_RNDN);
    mpfr_div_ui(truth, truth, 3, MPFR_RNDN);
    CHECK(contains_mpfr(q, truth));
    mpfr_clear(truth);
    // radius <= 2^(1-256)
    mpfr_t lim;
    mpfr_init2(lim, 64);
    mpfr_set_ui_2exp(lim, 1, 1 - 256, MPFR_RNDN);
    CHECK(mpfr_cmp(q.rad(), lim) <= 0);
    mpfr_clear(lim);
}

TEST_CASE("transcendental basics") {
    RealBall one = RealBall::from_long(1);
    RealBall l = log(one);
    CHECK(l.contains_zero());
    CHECK(l.lt(RealBall::from_rational(1, 1000000)) == Tri::yes);

    RealBall p = pow_int(RealBall::from_long(2), 10);
    CHECK(p.floor_exact().value() == 1024);
    CHECK(p.nearest_int_exact().value() == 1024);

    CHECK_THROWS_AS(log(RealBall::from_long(-1)), DomainError);
    CHECK_THROWS_AS(nth_root(RealBall::from_long(-4), 2), DomainError);
    CHECK_THROWS_AS(div(one, RealBall::from_long(0)), DivisorStraddlesZero);
}

TEST_CASE("log(3)/log(2) contains the reference digits") {
    // oracle digits computed independently (gmpy2 at 700 bits); the parsed
    // string is only good to ~54 digits, so compare at that tolerance
    const char* ref = "1.58496250072115618145373894394781650875981440769248106";
    RealBall t = div(log(RealBall::from_long(3, 256)), log(RealBall::from_long(2, 256)));
    mpfr_t truth;
    mpfr_init2(truth, 256);
    mpfr_set_str(truth, ref, 10, MPFR_RNDN);
    RealBall ref_ball = RealBall::from_endpoints(truth, truth, 256);
    RealBall tol = pow_int(RealBall::from_rational(1, 10, 256), 52);
    CHECK(abs_val(sub(t, ref_ball)).lt(tol) == Tri::yes);
    mpfr_clear(truth);

    // doubled-precision cross-check: the refined ball nests inside
    RealBall t2 = div(log(RealBall::from_long(3, 1024)), log(RealBall::from_long(2, 1024)));
    CHECK(contained_in(t2, t));
}

TEST_CASE("certified comparisons") {
    auto ball = [](double m, double r) {
        RealBall v = RealBall::from_rational(static_cast<long>(m * 1000), 1000);
        RealBall rr = RealBall::from_rational(static_cast<long>(r * 1000), 1000);
        return add(v, mul(rr, RealBall::from_long(0)));  // radius via sub/add below
    };
    (void)ball;
    // [0.9, 1.1] vs [1.9, 2.1]
    mpfr_t lo, hi;
    mpfr_init2(lo, 64);
    mpfr_init2(hi, 64);
    mpfr_set_d(lo, 0.9, MPFR_RNDN);
    mpfr_set_d(hi, 1.1, MPFR_RNDN);
    RealBall a = RealBall::from_endpoints(lo, hi, 64);
    mpfr_set_d(lo, 1.9, MPFR_RNDN);
    mpfr_set_d(hi, 2.1, MPFR_RNDN);
    RealBall b = RealBall::from_endpoints(lo, hi, 64);
    CHECK(a.lt(b) == Tri::yes);
    CHECK(b.lt(a) == Tri::no);

    mpfr_set_d(lo, 0.4, MPFR_RNDN);
    mpfr_set_d(hi, 1.6, MPFR_RNDN);
    RealBall c = RealBall::from_endpoints(lo, hi, 64);
    mpfr_set_d(lo, 0.9, MPFR_RNDN);
    mpfr_set_d(hi, 2.1, MPFR_RNDN);
    RealBall d = RealBall::from_endpoints(lo, hi, 64);
    CHECK(c.lt(d) == Tri::unknown);
    mpfr_clears(lo, hi, (mpfr_ptr) nullptr);

    // le on touching exact endpoints certifies
    CHECK(RealBall::from_long(1).le(RealBall::from_long(1)) == Tri::yes);
    CHECK(RealBall::from_long(1).lt(RealBall::from_long(1)) == Tri::no);
}

TEST_CASE("distance to nearest integer") {
    RealBall x = RealBall::from_rational(11, 4);  // 2.75
    RealBall d = x.dist_to_nearest_int();
    CHECK(d.is_exact());
    RealBall quarter = RealBall::from_rational(1, 4);
    CHECK(d.le(quarter) == Tri::yes);
    CHECK(d.ge(quarter) == Tri::yes);

    // exact integers have distance 0
    CHECK(RealBall::from_long(42).dist_to_nearest_int().contains_zero());

    // randomized: ball output contains the exact rational distance and stays
    // inside [0, 1/2]
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<long> num(-500000, 500000);
    std::uniform_int_distribution<long> den(1, 9973);
    for (int i = 0; i < 500; ++i) {
        mpz_class p = num(rng), q = den(rng);
        RealBall v = RealBall::from_rational(p, q, 192);
        RealBall dist = v.dist_to_nearest_int();
        // exact oracle: ||p/q|| computed in rational arithmetic
        mpq_class val(p, q);
        val.canonicalize();
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), val.get_num_mpz_t(), val.get_den_mpz_t());
        mpq_class frac(r, val.get_den());
        frac.canonicalize();
        mpq_class truth = frac <= mpq_class(1, 2) ? frac : mpq_class(1) - frac;
        RealBall tb = RealBall::from_rational(truth.get_num(), truth.get_den(), 192);
        CHECK(dist.ge(tb) != Tri::no);
        CHECK(dist.le(tb) != Tri::no);
        CHECK(dist.ge(RealBall::from_long(0)) != Tri::no);
        CHECK(dist.le(RealBall::from_rational(1, 2)) != Tri::no);
    }
}

TEST_CASE("floor straddle policy") {
    mpfr_t lo, hi;
    mpfr_init2(lo, 64);
    mpfr_init2(hi, 64);
    mpfr_set_d(lo, 2.4, MPFR_RNDN);
    mpfr_set_d(hi, 2.6, MPFR_RNDN);
    RealBall a = RealBall::from_endpoints(lo, hi, 64);
    CHECK(a.floor_exact().value() == 2);

    mpfr_set_d(lo, 2.99, MPFR_RNDN);
    mpfr_set_d(hi, 3.01, MPFR_RNDN);
    RealBall b = RealBall::from_endpoints(lo, hi, 64);
    CHECK(!b.floor_exact().has_value());
    CHECK(b.floor_upper() == 3);
    mpfr_clears(lo, hi, (mpfr_ptr) nullptr);
}

namespace {

// random expression DAGs over a pool of values, replayed at two precisions
RealBall replay(std::mt19937& rng, mpfr_prec_t prec) {
    std::mt19937 local = rng;  // same stream for both precisions
    std::uniform_int_distribution<int> op(0, 6);
    std::uniform_int_distribution<long> numd(1, 1000);
    std::vector<RealBall> pool;
    for (int i = 0; i < 4; ++i)
        pool.push_back(RealBall::from_rational(numd(local), numd(local), prec));
    for (int step = 0; step < 12; ++step) {
        std::uniform_int_distribution<size_t> pick(0, pool.size() - 1);
        const RealBall& a = pool[pick(local)];
        const RealBall& b = pool[pick(local)];
        switch (op(local)) {
            case 0: pool.push_back(add(a, b)); break;
            case 1: pool.push_back(sub(a, b)); break;
            case 2: pool.push_back(mul(a, b)); break;
            case 3:
                pool.push_back(b.contains_zero() ? add(a, b) : div(a, b));
                break;
            case 4: pool.push_back(a.is_positive() == Tri::yes ? log(a) : abs_val(a)); break;
            case 5: pool.push_back(pow_int(a, 3)); break;
            default:
                pool.push_back(nth_root(add(mul(a, a), RealBall::from_long(1, prec)), 2));
                break;
        }
    }
    return pool.back();
}

}  // namespace

TEST_CASE("containment under precision refinement, 1000 random DAGs") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 1000; ++trial) {
        std::mt19937 snapshot = rng;
        RealBall coarse = replay(snapshot, 128);
        snapshot = rng;
        RealBall fine = replay(snapshot, 512);
        CHECK(contained_in(fine, coarse));
        // comparisons never flip under refinement
        RealBall half = RealBall::from_rational(1, 2, 128);
        Tri c = coarse.lt(half);
        Tri f = fine.lt(half);
        if (c != Tri::unknown) CHECK(c == f);
        rng.discard(64);
    }
}
