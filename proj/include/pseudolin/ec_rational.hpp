#pragma once

// Elliptic curves over Q in long Weierstrass form
//   y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6,  a_i in Z,
// with exact rational points and the chord-tangent group law.

#include <gmpxx.h>

#include <array>
#include <optional>
#include <ostream>
#include <string>

#include "pseudolin/errors.hpp"

namespace pseudolin {

class CurveQ {
 public:
  /// Throws SingularCurve when the discriminant vanishes.
  CurveQ(mpz_class a1, mpz_class a2, mpz_class a3, mpz_class a4, mpz_class a6)
      : a1_(std::move(a1)), a2_(std::move(a2)), a3_(std::move(a3)), a4_(std::move(a4)), a6_(std::move(a6)) {
    b2_ = a1_ * a1_ + 4 * a2_;
    b4_ = 2 * a4_ + a1_ * a3_;
    b6_ = a3_ * a3_ + 4 * a6_;
    b8_ = a1_ * a1_ * a6_ + 4 * a2_ * a6_ - a1_ * a3_ * a4_ + a2_ * a3_ * a3_ - a4_ * a4_;
    c4_ = b2_ * b2_ - 24 * b4_;
    c6_ = -b2_ * b2_ * b2_ + 36 * b2_ * b4_ - 216 * b6_;
    disc_ = -b2_ * b2_ * b8_ - 8 * b4_ * b4_ * b4_ - 27 * b6_ * b6_ + 9 * b2_ * b4_ * b6_;
    if (disc_ == 0) throw SingularCurve("singular Weierstrass model (discriminant 0): " + str());
  }

  const mpz_class& a1() const { return a1_; }
  const mpz_class& a2() const { return a2_; }
  const mpz_class& a3() const { return a3_; }
  const mpz_class& a4() const { return a4_; }
  const mpz_class& a6() const { return a6_; }
  const mpz_class& b2() const { return b2_; }
  const mpz_class& b4() const { return b4_; }
  const mpz_class& b6() const { return b6_; }
  const mpz_class& b8() const { return b8_; }
  const mpz_class& c4() const { return c4_; }
  const mpz_class& c6() const { return c6_; }
  const mpz_class& disc() const { return disc_; }

  std::array<mpz_class, 5> coefficients() const { return {a1_, a2_, a3_, a4_, a6_}; }

  /// "a1 a2 a3 a4 a6", the curve line of every file format.
  std::string str() const {
    return a1_.get_str() + " " + a2_.get_str() + " " + a3_.get_str() + " " + a4_.get_str() + " " +
           a6_.get_str();
  }

  friend bool operator==(const CurveQ& a, const CurveQ& b) { return a.coefficients() == b.coefficients(); }

 private:
  mpz_class a1_, a2_, a3_, a4_, a6_;
  mpz_class b2_, b4_, b6_, b8_, c4_, c6_, disc_;
};

inline CurveQ parse_curve(const mpz_class& a1, const mpz_class& a2, const mpz_class& a3, const mpz_class& a4,
                          const mpz_class& a6) {
  return CurveQ(a1, a2, a3, a4, a6);
}

/// (m, n, k) with x = m/k^2, y = n/k^3, k >= 1, gcd(m,k) = gcd(n,k) = 1.
struct CanonicalForm {
  mpz_class m, n, k;
};

class PointQ {
 public:
  /// The point at infinity.
  PointQ() = default;

  /// Unchecked affine point; use make_point to validate against a curve.
  PointQ(mpq_class x, mpq_class y) : affine_(Affine{std::move(x), std::move(y)}) {
    affine_->x.canonicalize();
    affine_->y.canonicalize();
  }

  static PointQ infinity() { return PointQ(); }

  bool is_infinity() const { return !affine_.has_value(); }
  const mpq_class& x() const { return affine().x; }
  const mpq_class& y() const { return affine().y; }

  friend bool operator==(const PointQ& a, const PointQ& b) {
    if (a.is_infinity() || b.is_infinity()) return a.is_infinity() == b.is_infinity();
    return a.x() == b.x() && a.y() == b.y();
  }

  /// "inf" or "xnum/xden,ynum/yden" (denominators of 1 omitted).
  std::string str() const {
    if (is_infinity()) return "inf";
    return x().get_str() + "," + y().get_str();
  }

  friend std::ostream& operator<<(std::ostream& os, const PointQ& p) { return os << p.str(); }

 private:
  struct Affine {
    mpq_class x, y;
  };

  const Affine& affine() const {
    if (!affine_) throw InfinityPoint("affine coordinate requested for the point at infinity");
    return *affine_;
  }

  std::optional<Affine> affine_;
};

inline bool on_curve(const CurveQ& c, const PointQ& p) {
  if (p.is_infinity()) return true;
  const mpq_class& x = p.x();
  const mpq_class& y = p.y();
  mpq_class lhs = y * y + c.a1() * x * y + c.a3() * y;
  mpq_class rhs = ((x + c.a2()) * x + c.a4()) * x + c.a6();
  return lhs == rhs;
}

/// Validated affine point; throws NotOnCurve.
inline PointQ make_point(const CurveQ& c, const mpq_class& x, const mpq_class& y) {
  PointQ p(x, y);
  if (!on_curve(c, p)) throw NotOnCurve("point (" + p.str() + ") is not on curve [" + c.str() + "]");
  return p;
}

inline PointQ negate(const CurveQ& c, const PointQ& p) {
  if (p.is_infinity()) return p;
  return PointQ(p.x(), -p.y() - c.a1() * p.x() - c.a3());
}

inline PointQ add(const CurveQ& c, const PointQ& p, const PointQ& q) {
  if (p.is_infinity()) return q;
  if (q.is_infinity()) return p;
  const mpq_class& x1 = p.x();
  const mpq_class& y1 = p.y();
  const mpq_class& x2 = q.x();
  const mpq_class& y2 = q.y();
  mpq_class lambda;
  if (x1 == x2) {
    mpq_class denom = y1 + y2 + c.a1() * x2 + c.a3();
    if (denom == 0) return PointQ::infinity();
    // x1 == x2 and not opposite, so p == q.
    lambda = (3 * x1 * x1 + 2 * c.a2() * x1 + c.a4() - c.a1() * y1) / (2 * y1 + c.a1() * x1 + c.a3());
  } else {
    lambda = (y2 - y1) / (x2 - x1);
  }
  mpq_class nu = y1 - lambda * x1;
  mpq_class x3 = lambda * lambda + c.a1() * lambda - c.a2() - x1 - x2;
  mpq_class y3 = -(lambda + c.a1()) * x3 - nu - c.a3();
  return PointQ(std::move(x3), std::move(y3));
}

inline PointQ subtract(const CurveQ& c, const PointQ& p, const PointQ& q) { return add(c, p, negate(c, q)); }

/// n*P by left-to-right double-and-add; negative n via negation.
inline PointQ scalar_mul(const CurveQ& c, const mpz_class& n, const PointQ& p) {
  if (n == 0 || p.is_infinity()) return PointQ::infinity();
  if (n < 0) return scalar_mul(c, -n, negate(c, p));
  PointQ acc;
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    acc = add(c, acc, acc);
    if (mpz_tstbit(n.get_mpz_t(), i)) acc = add(c, acc, p);
  }
  return acc;
}

inline PointQ scalar_mul(const CurveQ& c, long n, const PointQ& p) { return scalar_mul(c, mpz_class(n), p); }

/// Throws InfinityPoint for O, and NotOnCurve when the denominators are not
/// of the form k^2, k^3 (impossible for points on an integral model).
inline CanonicalForm canonical_form(const PointQ& p) {
  if (p.is_infinity()) throw InfinityPoint("canonical form of the point at infinity");
  const mpz_class& xd = p.x().get_den();
  const mpz_class& yd = p.y().get_den();
  if (!mpz_perfect_square_p(xd.get_mpz_t())) throw NotOnCurve("x denominator is not a square: " + p.str());
  mpz_class k;
  mpz_sqrt(k.get_mpz_t(), xd.get_mpz_t());
  if (k * k * k != yd) throw NotOnCurve("y denominator is not k^3: " + p.str());
  return CanonicalForm{p.x().get_num(), p.y().get_num(), k};
}

inline bool is_good_reduction(const CurveQ& c, unsigned long p) {
  return !mpz_divisible_ui_p(c.disc().get_mpz_t(), p);
}

}  // namespace pseudolin
