#pragma once

// Closed real intervals with MPFR endpoints and outward rounding. Every
// operation returns an interval guaranteed to contain the exact result for
// any choice of operands inside the inputs.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <utility>

namespace pseudolin {

class Interval {
 public:
  static constexpr mpfr_prec_t kDefaultPrecision = 128;

  explicit Interval(mpfr_prec_t prec = kDefaultPrecision) {
    init(prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
  }

  Interval(long value, mpfr_prec_t prec) {
    init(prec);
    mpfr_set_si(lo_, value, MPFR_RNDD);
    mpfr_set_si(hi_, value, MPFR_RNDU);
  }

  Interval(const mpz_class& value, mpfr_prec_t prec) {
    init(prec);
    mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
  }

  Interval(const mpq_class& value, mpfr_prec_t prec) {
    init(prec);
    mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
  }

  /// The double is taken as an exact binary value.
  static Interval from_double(double value, mpfr_prec_t prec = kDefaultPrecision) {
    Interval r(prec);
    mpfr_set_d(r.lo_, value, MPFR_RNDD);
    mpfr_set_d(r.hi_, value, MPFR_RNDU);
    return r;
  }

  static Interval hull(double lo, double hi, mpfr_prec_t prec = kDefaultPrecision) {
    if (lo > hi) throw std::invalid_argument("Interval::hull: lo > hi");
    Interval r(prec);
    mpfr_set_d(r.lo_, lo, MPFR_RNDD);
    mpfr_set_d(r.hi_, hi, MPFR_RNDU);
    return r;
  }

  Interval(const Interval& other) {
    init(other.precision());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }

  Interval(Interval&& other) noexcept {
    init(other.precision());
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
  }

  Interval& operator=(Interval other) noexcept {
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
    return *this;
  }

  ~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  mpfr_prec_t precision() const { return mpfr_get_prec(lo_); }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid() const {
    Interval m = *this;
    mpfr_add(m.lo_, lo_, hi_, MPFR_RNDN);
    return mpfr_get_d(m.lo_, MPFR_RNDN) / 2.0;
  }

  /// Upper bound on hi - lo.
  double width() const {
    mpfr_t w;
    mpfr_init2(w, precision());
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
  bool contains(double v) const { return mpfr_cmp_d(lo_, v) <= 0 && mpfr_cmp_d(hi_, v) >= 0; }
  bool contains(const Interval& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
  }
  bool overlaps(const Interval& o) const {
    return mpfr_cmp(lo_, o.hi_) <= 0 && mpfr_cmp(o.lo_, hi_) <= 0;
  }
  /// Every point of *this is <= every point of o.
  bool certainly_le(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) <= 0; }
  bool certainly_lt(const Interval& o) const { return mpfr_cmp(hi_, o.lo_) < 0; }
  bool certainly_ge(const Interval& o) const { return o.certainly_le(*this); }

  /// True iff some integer lies in [lo, hi].
  bool contains_integer() const {
    mpz_class c;
    ceil_lo(c);
    return mpfr_cmp_z(hi_, c.get_mpz_t()) >= 0;
  }

  /// Integer nearest to the midpoint.
  mpz_class nearest_integer() const {
    mpfr_t m;
    mpfr_init2(m, precision() + 1);
    mpfr_add(m, lo_, hi_, MPFR_RNDN);
    mpfr_div_2ui(m, m, 1, MPFR_RNDN);
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), m, MPFR_RNDN);
    mpfr_clear(m);
    return z;
  }

  /// Endpoints printed with `digits` significant digits, rounded outward.
  std::string str(int digits = 12) const {
    char lo[128], hi[128];
    mpfr_snprintf(lo, sizeof lo, "%.*RDg", digits, lo_);
    mpfr_snprintf(hi, sizeof hi, "%.*RUg", digits, hi_);
    return std::string("[") + lo + "," + hi + "]";
  }

  friend Interval operator+(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator-(const Interval& a) {
    Interval r(a.precision());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_mul(t, x, y, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, x, y, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      }
    }
    mpfr_clear(t);
    return r;
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw std::domain_error("Interval: division by an interval containing zero");
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    Interval r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    const mpfr_srcptr as[2] = {a.lo_, a.hi_};
    const mpfr_srcptr bs[2] = {b.lo_, b.hi_};
    mpfr_set_inf(r.lo_, 1);
    mpfr_set_inf(r.hi_, -1);
    for (auto x : as) {
      for (auto y : bs) {
        mpfr_div(t, x, y, MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_div(t, x, y, MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      }
    }
    mpfr_clear(t);
    return r;
  }

  Interval& operator+=(const Interval& o) { return *this = *this + o; }
  Interval& operator-=(const Interval& o) { return *this = *this - o; }

  /// Exact multiplication by an integer (up to outward rounding).
  friend Interval operator*(const Interval& a, const mpz_class& k) {
    Interval r(a.precision());
    if (sgn(k) >= 0) {
      mpfr_mul_z(r.lo_, a.lo_, k.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(r.hi_, a.hi_, k.get_mpz_t(), MPFR_RNDU);
    } else {
      mpfr_mul_z(r.lo_, a.hi_, k.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(r.hi_, a.lo_, k.get_mpz_t(), MPFR_RNDU);
    }
    return r;
  }

  /// Multiplication by 2^-k; exact.
  Interval scaled_pow2(long k) const {
    Interval r(precision());
    mpfr_mul_2si(r.lo_, lo_, k, MPFR_RNDD);
    mpfr_mul_2si(r.hi_, hi_, k, MPFR_RNDU);
    return r;
  }

  friend Interval abs(const Interval& a) {
    if (mpfr_sgn(a.lo_) >= 0) return a;
    if (mpfr_sgn(a.hi_) <= 0) return -a;
    Interval r(a.precision());
    mpfr_set_zero(r.lo_, 1);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval max(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval min(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  /// Smallest interval containing both.
  friend Interval hull(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  /// Intersection; the caller guarantees the intervals overlap.
  friend Interval intersect(const Interval& a, const Interval& b) {
    Interval r(std::max(a.precision(), b.precision()));
    mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    if (mpfr_cmp(r.lo_, r.hi_) > 0) throw std::domain_error("Interval: empty intersection");
    return r;
  }

  friend Interval log(const Interval& a) {
    if (!a.certainly_positive()) throw std::domain_error("Interval: log of a non-positive interval");
    Interval r(a.precision());
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend Interval exp(const Interval& a) {
    Interval r(a.precision());
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  /// Enclosure of log(n) for a positive integer n.
  static Interval log_of(const mpz_class& n, mpfr_prec_t prec = kDefaultPrecision) {
    if (sgn(n) <= 0) throw std::domain_error("Interval::log_of: non-positive argument");
    return log(Interval(n, prec));
  }

 private:
  void init(mpfr_prec_t prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
  }

  void ceil_lo(mpz_class& out) const { mpfr_get_z(out.get_mpz_t(), lo_, MPFR_RNDU); }

  mpfr_t lo_;
  mpfr_t hi_;
};

using HeightInterval = Interval;

}  // namespace pseudolin
