#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>
#include <utility>

#include "pillai3/errors.hpp"

namespace pillai3 {

// Tri-state result of a certified comparison. `unknown` means the intervals
// overlap; callers escalate precision, they never guess.
enum class Tri { yes, no, unknown };

inline bool certified(Tri t) { return t != Tri::unknown; }

// Working-precision defaults and the escalation cap (bits). The cap can be
// overridden through PILLAI_PRECISION_CAP.
mpfr_prec_t default_precision();
mpfr_prec_t precision_cap();
void set_precision_cap(mpfr_prec_t bits);

// A real number as midpoint +- radius. The represented true value always
// lies in [mid - rad, mid + rad]; every operation rounds outward so the
// invariant survives composition. Immutable after construction.
class RealBall {
  public:
    explicit RealBall(mpfr_prec_t prec = default_precision());
    RealBall(const RealBall& o);
    RealBall(RealBall&& o) noexcept;
    RealBall& operator=(const RealBall& o);
    RealBall& operator=(RealBall&& o) noexcept;
    ~RealBall();

    static RealBall from_long(long v, mpfr_prec_t prec = default_precision());
    static RealBall from_integer(const mpz_class& v, mpfr_prec_t prec = default_precision());
    static RealBall from_rational(long num, long den, mpfr_prec_t prec = default_precision());
    static RealBall from_rational(const mpz_class& num, const mpz_class& den,
                                  mpfr_prec_t prec = default_precision());
    static RealBall from_rational(const mpq_class& q, mpfr_prec_t prec = default_precision());
    // Ball covering [lo, hi]; endpoints must be finite with lo <= hi.
    static RealBall from_endpoints(const mpfr_t lo, const mpfr_t hi, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }
    const mpfr_t& mid() const { return mid_; }
    const mpfr_t& rad() const { return rad_; }
    bool is_exact() const { return mpfr_zero_p(rad_); }

    // Certified endpoints (outward rounded at this ball's precision).
    void endpoints(mpfr_t lo, mpfr_t hi) const;
    mpq_class lower_rational() const;
    mpq_class upper_rational() const;

    // arithmetic; result precision is the max of the operand precisions
    friend RealBall add(const RealBall& a, const RealBall& b);
    friend RealBall sub(const RealBall& a, const RealBall& b);
    friend RealBall mul(const RealBall& a, const RealBall& b);
    friend RealBall div(const RealBall& a, const RealBall& b);  // throws DivisorStraddlesZero
    friend RealBall neg(const RealBall& a);
    friend RealBall abs_val(const RealBall& a);

    friend RealBall log(const RealBall& a);   // throws DomainError unless a > 0 certified
    friend RealBall exp(const RealBall& a);
    friend RealBall pow_int(const RealBall& a, long e);    // e < 0 needs a bounded away from 0
    friend RealBall nth_root(const RealBall& a, unsigned long n);  // needs a >= 0 certified, n >= 1

    RealBall operator-() const { return neg(*this); }

    // certified comparisons
    Tri lt(const RealBall& b) const;
    Tri le(const RealBall& b) const;
    Tri gt(const RealBall& b) const { return b.lt(*this); }
    Tri ge(const RealBall& b) const { return b.le(*this); }
    Tri lt(long v) const;
    Tri gt(long v) const;
    Tri is_positive() const;  // yes iff lower endpoint > 0
    Tri is_negative() const;
    bool contains_zero() const;
    bool contains_integer() const;  // any integer inside [lo, hi]

    // ||x|| = distance to the nearest integer, as a ball inside [0, 1/2]
    RealBall dist_to_nearest_int() const;

    // floor: the exact value when the whole interval shares one floor
    std::optional<mpz_class> floor_exact() const;
    mpz_class floor_upper() const;  // floor of the upper endpoint (sound upper bound)
    std::optional<mpz_class> nearest_int_exact() const;

    RealBall round_to(mpfr_prec_t prec) const;  // outward re-round (containment kept)

    double mid_double() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_double() const { return mpfr_get_d(rad_, MPFR_RNDU); }
    std::string to_string(size_t digits = 20) const;
    std::string enclosure(size_t digits = 20) const;  // "[lo, hi]" decimal, outward

  private:
    mpfr_t mid_;
    mpfr_t rad_;
    mpfr_prec_t prec_;

    friend RealBall inv(const RealBall& a);
};

RealBall add(const RealBall& a, const RealBall& b);
RealBall sub(const RealBall& a, const RealBall& b);
RealBall mul(const RealBall& a, const RealBall& b);
RealBall div(const RealBall& a, const RealBall& b);
RealBall neg(const RealBall& a);
RealBall abs_val(const RealBall& a);
RealBall log(const RealBall& a);
RealBall exp(const RealBall& a);
RealBall pow_int(const RealBall& a, long e);
RealBall nth_root(const RealBall& a, unsigned long n);

inline RealBall operator+(const RealBall& a, const RealBall& b) { return add(a, b); }
inline RealBall operator-(const RealBall& a, const RealBall& b) { return sub(a, b); }
inline RealBall operator*(const RealBall& a, const RealBall& b) { return mul(a, b); }
inline RealBall operator/(const RealBall& a, const RealBall& b) { return div(a, b); }

}  // namespace pillai3
