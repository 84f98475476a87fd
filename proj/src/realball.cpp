#include "pillai3/realball.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <vector>

namespace pillai3 {

namespace {

constexpr mpfr_prec_t kRadPrec = 64;

std::atomic<mpfr_prec_t> g_precision_cap{[] {
    if (const char* env = std::getenv("PILLAI_PRECISION_CAP")) {
        long v = std::atol(env);
        if (v >= 64) return static_cast<mpfr_prec_t>(v);
    }
    return static_cast<mpfr_prec_t>(1L << 20);
}()};

// One ulp of x at precision `prec`, i.e. 2^(exp(x)-prec). Covers the
// round-to-nearest error of an inexact operation (actual bound is half this).
void add_ulp(mpfr_t rad, const mpfr_t x, mpfr_prec_t prec) {
    if (mpfr_zero_p(x)) return;  // inexact zero cannot occur in mpfr's exponent range
    mpfr_t u;
    mpfr_init2(u, 16);
    mpfr_set_ui_2exp(u, 1, mpfr_get_exp(x) - prec, MPFR_RNDU);
    mpfr_add(rad, rad, u, MPFR_RNDU);
    mpfr_clear(u);
}

struct Tmp {
    mpfr_t v;
    explicit Tmp(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~Tmp() { mpfr_clear(v); }
    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
    mpfr_srcptr get() const { return v; }
};

}  // namespace

mpfr_prec_t default_precision() { return 256; }
mpfr_prec_t precision_cap() { return g_precision_cap.load(); }
void set_precision_cap(mpfr_prec_t bits) { g_precision_cap.store(bits); }

RealBall::RealBall(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(mid_, prec);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

RealBall::RealBall(const RealBall& o) : prec_(o.prec_) {
    mpfr_init2(mid_, o.prec_);
    mpfr_init2(rad_, kRadPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

RealBall::RealBall(RealBall&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(mid_, 2);
    mpfr_init2(rad_, 2);
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
}

RealBall& RealBall::operator=(const RealBall& o) {
    if (this != &o) {
        mpfr_set_prec(mid_, o.prec_);
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
        prec_ = o.prec_;
    }
    return *this;
}

RealBall& RealBall::operator=(RealBall&& o) noexcept {
    if (this != &o) {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
        prec_ = o.prec_;
    }
    return *this;
}

RealBall::~RealBall() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

RealBall RealBall::from_long(long v, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall RealBall::from_integer(const mpz_class& v, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall RealBall::from_rational(long num, long den, mpfr_prec_t prec) {
    return from_rational(mpz_class(num), mpz_class(den), prec);
}

RealBall RealBall::from_rational(const mpz_class& num, const mpz_class& den, mpfr_prec_t prec) {
    if (den == 0) throw DomainError("rational with zero denominator");
    mpq_class q(num, den);
    q.canonicalize();
    return from_rational(q, prec);
}

RealBall RealBall::from_rational(const mpq_class& q, mpfr_prec_t prec) {
    RealBall r(prec);
    int t = mpfr_set_q(r.mid_, q.get_mpq_t(), MPFR_RNDN);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall RealBall::from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec) {
    if (!mpfr_number_p(lo) || !mpfr_number_p(hi) || mpfr_cmp(lo, hi) > 0)
        throw DomainError("from_endpoints: bad interval");
    RealBall r(prec);
    Tmp m(prec);
    mpfr_add(m, lo, hi, MPFR_RNDN);
    mpfr_mul_2si(m, m, -1, MPFR_RNDN);
    mpfr_set(r.mid_, m.get(), MPFR_RNDN);
    Tmp d1(kRadPrec), d2(kRadPrec);
    mpfr_sub(d1, hi, r.mid_, MPFR_RNDU);
    mpfr_sub(d2, r.mid_, lo, MPFR_RNDU);
    mpfr_max(r.rad_, d1, d2, MPFR_RNDU);
    if (mpfr_sgn(r.rad_) < 0) mpfr_set_zero(r.rad_, 1);
    return r;
}

void RealBall::endpoints(mpfr_t lo, mpfr_t hi) const {
    mpfr_sub(lo, mid_, rad_, MPFR_RNDD);
    mpfr_add(hi, mid_, rad_, MPFR_RNDU);
}

namespace {

// exact conversion of a finite mpfr to a rational
mpq_class mpfr_to_q(const mpfr_t x) {
    mpq_class out;
    mpfr_get_q(out.get_mpq_t(), x);
    return out;
}

}  // namespace

mpq_class RealBall::lower_rational() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    return mpfr_to_q(lo);
}

mpq_class RealBall::upper_rational() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    return mpfr_to_q(hi);
}

RealBall add(const RealBall& a, const RealBall& b) {
    mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    RealBall r(prec);
    int t = mpfr_add(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall sub(const RealBall& a, const RealBall& b) {
    mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    RealBall r(prec);
    int t = mpfr_sub(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, a.rad_, b.rad_, MPFR_RNDU);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall neg(const RealBall& a) {
    RealBall r(a.prec_);
    mpfr_neg(r.mid_, a.mid_, MPFR_RNDN);  // exact
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    return r;
}

RealBall abs_val(const RealBall& a) {
    RealBall r(a.prec_);
    mpfr_abs(r.mid_, a.mid_, MPFR_RNDN);  // exact
    mpfr_set(r.rad_, a.rad_, MPFR_RNDU);
    return r;
}

RealBall mul(const RealBall& a, const RealBall& b) {
    mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    RealBall r(prec);
    int t = mpfr_mul(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    // |xy - am*bm| <= |am| rb + |bm| ra + ra rb
    Tmp am(kRadPrec), bm(kRadPrec), acc(kRadPrec), term(kRadPrec);
    mpfr_abs(am, a.mid_, MPFR_RNDU);
    mpfr_abs(bm, b.mid_, MPFR_RNDU);
    mpfr_mul(acc, am, b.rad_, MPFR_RNDU);
    mpfr_mul(term, bm, a.rad_, MPFR_RNDU);
    mpfr_add(acc, acc, term, MPFR_RNDU);
    mpfr_mul(term, a.rad_, b.rad_, MPFR_RNDU);
    mpfr_add(acc, acc, term, MPFR_RNDU);
    mpfr_set(r.rad_, acc.get(), MPFR_RNDU);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall div(const RealBall& a, const RealBall& b) {
    mpfr_prec_t prec = std::max(a.prec_, b.prec_);
    // divisor must be bounded away from zero: |bm| - rb > 0
    Tmp bm(kRadPrec), denom(kRadPrec);
    mpfr_abs(bm, b.mid_, MPFR_RNDD);
    mpfr_sub(denom, bm, b.rad_, MPFR_RNDD);
    if (mpfr_sgn(denom.get()) <= 0) throw DivisorStraddlesZero();

    RealBall r(prec);
    int t = mpfr_div(r.mid_, a.mid_, b.mid_, MPFR_RNDN);
    // |x/y - am/bm| <= (ra + |am/bm| rb) / (|bm| - rb)
    Tmp quot(kRadPrec), num(kRadPrec);
    mpfr_abs(quot, r.mid_, MPFR_RNDU);
    mpfr_nextabove(quot);  // covers the rounding of mid toward zero
    mpfr_mul(num, quot, b.rad_, MPFR_RNDU);
    mpfr_add(num, num, a.rad_, MPFR_RNDU);
    mpfr_div(r.rad_, num, denom, MPFR_RNDU);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

RealBall log(const RealBall& a) {
    mpfr_prec_t prec = a.prec_;
    Tmp lo(prec), hi(prec);
    a.endpoints(lo, hi);
    if (mpfr_sgn(lo.get()) <= 0) throw DomainError("log of interval not certified positive");
    Tmp llo(prec), lhi(prec);
    mpfr_log(llo, lo, MPFR_RNDD);
    mpfr_log(lhi, hi, MPFR_RNDU);
    return RealBall::from_endpoints(llo, lhi, prec);
}

RealBall exp(const RealBall& a) {
    mpfr_prec_t prec = a.prec_;
    Tmp lo(prec), hi(prec);
    a.endpoints(lo, hi);
    Tmp elo(prec), ehi(prec);
    mpfr_exp(elo, lo, MPFR_RNDD);
    mpfr_exp(ehi, hi, MPFR_RNDU);
    if (!mpfr_number_p(ehi.get())) throw DomainError("exp overflow");
    return RealBall::from_endpoints(elo, ehi, prec);
}

RealBall inv(const RealBall& a) {
    return div(RealBall::from_long(1, a.prec_), a);
}

RealBall pow_int(const RealBall& a, long e) {
    if (e == 0) return RealBall::from_long(1, a.prec_);
    if (e < 0) return inv(pow_int(a, -e));
    // binary powering on balls
    RealBall base = a;
    RealBall acc = RealBall::from_long(1, a.prec_);
    unsigned long u = static_cast<unsigned long>(e);
    while (u > 0) {
        if (u & 1) acc = mul(acc, base);
        u >>= 1;
        if (u) base = mul(base, base);
    }
    return acc;
}

RealBall nth_root(const RealBall& a, unsigned long n) {
    if (n == 0) throw DomainError("0th root");
    mpfr_prec_t prec = a.prec_;
    Tmp lo(prec), hi(prec);
    a.endpoints(lo, hi);
    if (mpfr_sgn(lo.get()) < 0) throw DomainError("nth_root of interval not certified nonnegative");
    Tmp rlo(prec), rhi(prec);
    mpfr_rootn_ui(rlo, lo, n, MPFR_RNDD);
    mpfr_rootn_ui(rhi, hi, n, MPFR_RNDU);
    return RealBall::from_endpoints(rlo, rhi, prec);
}

Tri RealBall::lt(const RealBall& b) const {
    mpfr_prec_t prec = std::max(prec_, b.prec_);
    Tmp alo(prec), ahi(prec), blo(prec), bhi(prec);
    endpoints(alo, ahi);
    b.endpoints(blo, bhi);
    if (mpfr_cmp(ahi, blo) < 0) return Tri::yes;
    if (mpfr_cmp(alo, bhi) >= 0) return Tri::no;
    return Tri::unknown;
}

Tri RealBall::le(const RealBall& b) const {
    mpfr_prec_t prec = std::max(prec_, b.prec_);
    Tmp alo(prec), ahi(prec), blo(prec), bhi(prec);
    endpoints(alo, ahi);
    b.endpoints(blo, bhi);
    if (mpfr_cmp(ahi, blo) <= 0) return Tri::yes;
    if (mpfr_cmp(alo, bhi) > 0) return Tri::no;
    return Tri::unknown;
}

Tri RealBall::lt(long v) const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    if (mpfr_cmp_si(hi, v) < 0) return Tri::yes;
    if (mpfr_cmp_si(lo, v) >= 0) return Tri::no;
    return Tri::unknown;
}

Tri RealBall::gt(long v) const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    if (mpfr_cmp_si(lo, v) > 0) return Tri::yes;
    if (mpfr_cmp_si(hi, v) <= 0) return Tri::no;
    return Tri::unknown;
}

Tri RealBall::is_positive() const { return gt(0); }
Tri RealBall::is_negative() const { return lt(0); }

bool RealBall::contains_zero() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    return mpfr_sgn(lo.get()) <= 0 && mpfr_sgn(hi.get()) >= 0;
}

bool RealBall::contains_integer() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    mpz_class zlo;
    mpfr_get_z(zlo.get_mpz_t(), lo, MPFR_RNDU);  // ceil(lo)
    return mpfr_cmp_z(hi, zlo.get_mpz_t()) >= 0;
}

namespace {

// |x - nearest_int(x)| for an exact mpfr endpoint; the subtraction is exact
// at a precision wide enough for the fractional tail.
void dist_point(mpfr_t out, const mpfr_t x) {
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), x, MPFR_RNDN);
    mpfr_prec_t px = mpfr_get_prec(x);
    mpfr_exp_t ex = mpfr_zero_p(x) ? 0 : mpfr_get_exp(x);
    mpfr_prec_t need = std::max<mpfr_prec_t>(kRadPrec, px - ex + 8);
    mpfr_set_prec(out, need);
    int t = mpfr_sub_z(out, x, z.get_mpz_t(), MPFR_RNDN);
    if (t != 0) throw Error("dist_point: fractional part not exactly representable");
    mpfr_abs(out, out, MPFR_RNDN);
}

}  // namespace

RealBall RealBall::dist_to_nearest_int() const {
    // the result lies in [0, 1/2]; its width is set by the input radius, so a
    // moderate output precision loses nothing
    mpfr_prec_t prec = std::min<mpfr_prec_t>(prec_, 512);
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);

    Tmp width(kRadPrec);
    mpfr_sub(width, hi, lo, MPFR_RNDU);
    Tmp half(kRadPrec);
    mpfr_set_ui_2exp(half, 1, -1, MPFR_RNDN);  // 1/2

    RealBall out(prec);
    if (mpfr_cmp_ui(width, 1) >= 0) {
        Tmp z(kRadPrec);
        mpfr_set_zero(z, 1);
        return from_endpoints(z, half, prec);
    }

    // integers / half-integers inside [lo, hi]
    mpz_class zlo;
    mpfr_get_z(zlo.get_mpz_t(), lo, MPFR_RNDU);
    bool has_int = mpfr_cmp_z(hi, zlo.get_mpz_t()) >= 0;

    Tmp lo2(prec_ + 1), hi2(prec_ + 1);
    mpfr_mul_2si(lo2, lo, 1, MPFR_RNDN);  // exact at prec_ + 1
    mpfr_mul_2si(hi2, hi, 1, MPFR_RNDN);
    mpz_class h2;
    mpfr_get_z(h2.get_mpz_t(), lo2, MPFR_RNDU);
    if (mpz_even_p(h2.get_mpz_t())) h2 += 1;
    bool has_half = mpfr_cmp_z(hi2, h2.get_mpz_t()) >= 0;

    mpfr_t dlo, dhi;
    mpfr_init2(dlo, kRadPrec);
    mpfr_init2(dhi, kRadPrec);
    dist_point(dlo, lo);
    dist_point(dhi, hi);

    mpfr_prec_t wide = std::max(mpfr_get_prec(dlo), mpfr_get_prec(dhi));
    Tmp omin(wide), omax(wide);
    if (has_int)
        mpfr_set_zero(omin, 1);
    else
        mpfr_min(omin, dlo, dhi, MPFR_RNDD);
    if (has_half)
        mpfr_set(omax, half.get(), MPFR_RNDU);
    else
        mpfr_max(omax, dlo, dhi, MPFR_RNDU);
    if (mpfr_cmp(omax, half) > 0) mpfr_set(omax, half.get(), MPFR_RNDN);
    if (mpfr_sgn(omin.get()) < 0) mpfr_set_zero(omin, 1);
    if (mpfr_cmp(omin, omax) > 0) mpfr_set(omin, omax.get(), MPFR_RNDD);

    out = from_endpoints(omin, omax, prec);
    mpfr_clear(dlo);
    mpfr_clear(dhi);
    return out;
}

std::optional<mpz_class> RealBall::floor_exact() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    mpz_class flo, fhi;
    mpfr_get_z(flo.get_mpz_t(), lo, MPFR_RNDD);
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
    if (flo == fhi) return flo;
    return std::nullopt;
}

mpz_class RealBall::floor_upper() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    mpz_class fhi;
    mpfr_get_z(fhi.get_mpz_t(), hi, MPFR_RNDD);
    return fhi;
}

std::optional<mpz_class> RealBall::nearest_int_exact() const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    mpz_class nlo, nhi;
    mpfr_get_z(nlo.get_mpz_t(), lo, MPFR_RNDN);
    mpfr_get_z(nhi.get_mpz_t(), hi, MPFR_RNDN);
    if (nlo == nhi) return nlo;
    return std::nullopt;
}

RealBall RealBall::round_to(mpfr_prec_t prec) const {
    RealBall r(prec);
    int t = mpfr_set(r.mid_, mid_, MPFR_RNDN);
    mpfr_set(r.rad_, rad_, MPFR_RNDU);
    if (t != 0) add_ulp(r.rad_, r.mid_, prec);
    return r;
}

std::string RealBall::to_string(size_t digits) const {
    char* s = nullptr;
    int n = mpfr_asprintf(&s, "%.*Rg ± %.3Rg", static_cast<int>(digits), mid_, rad_);
    std::string out = (n >= 0 && s) ? s : "<fmt error>";
    if (s) mpfr_free_str(s);
    return out;
}

std::string RealBall::enclosure(size_t digits) const {
    Tmp lo(prec_), hi(prec_);
    endpoints(lo, hi);
    char* s = nullptr;
    int n = mpfr_asprintf(&s, "[%.*RDg, %.*RUg]", static_cast<int>(digits), (mpfr_srcptr)lo,
                          static_cast<int>(digits), (mpfr_srcptr)hi);
    std::string out = (n >= 0 && s) ? s : "<fmt error>";
    if (s) mpfr_free_str(s);
    return out;
}

}  // namespace pillai3
