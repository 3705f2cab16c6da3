#pragma once

// Rational torsion subgroup: the order is bounded by gcd(N_p) over a few odd
// good primes (reduction is injective on torsion there), candidates come from
// Lutz-Nagell on the integral short model, and every survivor is verified
// with exact arithmetic.

#include <algorithm>
#include <functional>
#include <vector>

#include "pseudolin/ec_finite.hpp"
#include "pseudolin/ec_rational.hpp"
#include "pseudolin/numtheory.hpp"

namespace pseudolin {

/// Mazur's bound; exceeding it means the computation is wrong.
inline constexpr unsigned kMaxTorsionOrder = 16;

struct TorsionGroup {
  std::vector<PointQ> points;  // points[0] is O
  unsigned order = 1;

  bool contains(const PointQ& p) const { return std::find(points.begin(), points.end(), p) != points.end(); }
};

/// gcd of N_p over the first `count` odd good primes.
inline u64 torsion_order_bound(const CurveQ& c, unsigned count = 5) {
  u64 bound = 0;
  unsigned used = 0;
  for (u64 p = 3; used < count; p += 2) {
    if (!nt::is_prime(p) || !is_good_reduction(c, p)) continue;
    bound = nt::gcd(bound, group_order(reduce_curve(c, p)).n);
    ++used;
  }
  return bound;
}

namespace detail {

/// Integer roots of x^3 + a x + b.
inline std::vector<mpz_class> integer_roots_depressed_cubic(const mpz_class& a, const mpz_class& b) {
  auto g = [&](const mpz_class& x) { return mpz_class(x * x * x + a * x + b); };
  const mpz_class bound = 1 + std::max(abs(a), abs(b));
  std::vector<mpz_class> roots;
  // Binary search on an integer range where g is monotone.
  auto search = [&](mpz_class lo, mpz_class hi, bool increasing) {
    if (lo > hi) return;
    while (lo < hi) {
      mpz_class mid = lo + (hi - lo) / 2;
      const mpz_class v = g(mid);
      if ((increasing && v < 0) || (!increasing && v > 0)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    if (g(lo) == 0) roots.push_back(lo);
  };
  if (a >= 0) {
    search(-bound, bound, true);
  } else {
    // Critical points at +-r, r = sqrt(-a/3); floor(r) = isqrt(floor(-a/3)).
    const mpz_class r = nt::isqrt(mpz_class(-a / 3));
    search(-bound, -r - 1, true);
    search(-r, r, false);
    search(r + 1, bound, true);
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

inline void square_divisor_roots(const BigFactorization& f, std::size_t i, const mpz_class& acc,
                                 std::vector<mpz_class>& out) {
  if (i == f.size()) {
    out.push_back(acc);
    return;
  }
  mpz_class cur = acc;
  for (unsigned e = 0; 2 * e <= f[i].second; ++e) {
    square_divisor_roots(f, i + 1, cur, out);
    cur *= f[i].first;
  }
}

}  // namespace detail

inline TorsionGroup torsion_subgroup(const CurveQ& c) {
  TorsionGroup group{{PointQ::infinity()}, 1};
  const u64 bound = torsion_order_bound(c);
  if (bound == 1) return group;

  // y^2 = x^3 + A x + B with X = 36x + 3 b2, Y = 108 (2y + a1 x + a3).
  const mpz_class A = -27 * c.c4();
  const mpz_class B = -54 * c.c6();
  const mpz_class D = 4 * A * A * A + 27 * B * B;
  std::vector<mpz_class> ys{0};
  detail::square_divisor_roots(nt::factor(D), 0, 1, ys);

  std::vector<PointQ> found;
  for (const auto& Y : ys) {
    for (const auto& X : detail::integer_roots_depressed_cubic(A, B - Y * Y)) {
      for (const mpz_class& sy : {Y, mpz_class(-Y)}) {
        mpq_class x(X - 3 * c.b2(), 36);
        mpq_class y = (mpq_class(sy, 108) - c.a1() * x - c.a3()) / 2;
        PointQ p(x, y);
        if (!on_curve(c, p)) continue;
        if (!scalar_mul(c, mpz_class(static_cast<unsigned long>(bound)), p).is_infinity()) continue;
        if (std::find(found.begin(), found.end(), p) == found.end()) found.push_back(p);
        if (Y == 0) break;
      }
    }
  }
  for (auto& p : found) group.points.push_back(std::move(p));
  // Closure check: the candidate set must already be a group.
  for (const auto& p : group.points) {
    for (const auto& q : group.points) {
      if (!group.contains(add(c, p, q))) throw std::logic_error("torsion candidates are not closed under addition");
    }
  }
  group.order = static_cast<unsigned>(group.points.size());
  if (group.order > kMaxTorsionOrder || bound % group.order != 0) {
    throw std::logic_error("torsion subgroup order " + std::to_string(group.order) + " violates its bounds");
  }
  return group;
}

/// Order of a torsion point, or 0 if P has no order <= kMaxTorsionOrder
/// (i.e. P has infinite order).
inline unsigned torsion_order(const CurveQ& c, const PointQ& p) {
  PointQ acc = p;
  for (unsigned k = 1; k <= kMaxTorsionOrder; ++k) {
    if (acc.is_infinity()) return k;
    acc = add(c, acc, p);
  }
  return 0;
}

}  // namespace pseudolin
