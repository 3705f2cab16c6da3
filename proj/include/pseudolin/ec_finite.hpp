#pragma once

// Elliptic curves over prime fields F_p (p < 2^62): group law, point
// counting, point orders, discrete logarithms and subgroup structure.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "pseudolin/ec_rational.hpp"
#include "pseudolin/errors.hpp"
#include "pseudolin/numtheory.hpp"

namespace pseudolin {

/// Primes up to this bound are counted by character sums; BSGS above it.
inline constexpr u64 kEnumerationThreshold = 10000;

struct CurveFp {
  u64 p = 0;
  u64 a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;
};

struct PointFp {
  u64 x = 0, y = 0;
  bool inf = true;

  static PointFp infinity() { return PointFp{}; }
  static PointFp affine(u64 x, u64 y) { return PointFp{x, y, false}; }

  friend bool operator==(const PointFp& a, const PointFp& b) {
    if (a.inf || b.inf) return a.inf == b.inf;
    return a.x == b.x && a.y == b.y;
  }

  std::string str() const { return inf ? "inf" : std::to_string(x) + "," + std::to_string(y); }
};

struct PointFpHash {
  std::size_t operator()(const PointFp& q) const noexcept {
    return q.inf ? 0x9e3779b97f4a7c15ULL : (q.x * 0x9e3779b97f4a7c15ULL) ^ (q.y + 0x632be59bd9b4e019ULL);
  }
};

struct GroupOrderFp {
  u64 n = 0;
  Factorization factorization;
};

/// E(F_p) = Z/d1 x Z/d2 with d1 | d2; g1, g2 have orders d1, d2 and
/// generate E(F_p) as a direct sum.
struct GroupStructureFp {
  u64 d1 = 1, d2 = 1;
  PointFp g1, g2;
};

inline CurveFp reduce_curve(const CurveQ& c, u64 p) {
  if (!is_good_reduction(c, p)) {
    throw BadReduction("p = " + std::to_string(p) + " divides the discriminant " + c.disc().get_str());
  }
  return CurveFp{p, nt::mod(c.a1(), p), nt::mod(c.a2(), p), nt::mod(c.a3(), p), nt::mod(c.a4(), p),
                 nt::mod(c.a6(), p)};
}

// ---------------------------------------------------------------------------
// Group law.

inline bool on_curve(const CurveFp& c, const PointFp& q) {
  if (q.inf) return true;
  const u64 p = c.p;
  using nt::addmod, nt::mulmod;
  u64 lhs = addmod(mulmod(q.y, q.y, p), mulmod(addmod(mulmod(c.a1, q.x, p), c.a3, p), q.y, p), p);
  u64 rhs = addmod(mulmod(addmod(mulmod(addmod(q.x, c.a2, p), q.x, p), c.a4, p), q.x, p), c.a6, p);
  return lhs == rhs;
}

inline PointFp negate(const CurveFp& c, const PointFp& q) {
  if (q.inf) return q;
  const u64 p = c.p;
  u64 t = nt::addmod(nt::addmod(q.y, nt::mulmod(c.a1, q.x, p), p), c.a3, p);
  return PointFp::affine(q.x, nt::negmod(t, p));
}

inline PointFp add(const CurveFp& c, const PointFp& a, const PointFp& b) {
  if (a.inf) return b;
  if (b.inf) return a;
  const u64 p = c.p;
  using nt::addmod, nt::mulmod, nt::submod;
  u64 lambda;
  if (a.x == b.x) {
    u64 s = addmod(addmod(addmod(a.y, b.y, p), mulmod(c.a1, b.x, p), p), c.a3, p);
    if (s == 0) return PointFp::infinity();
    u64 num = addmod(addmod(mulmod(3, mulmod(a.x, a.x, p), p), mulmod(mulmod(2, c.a2, p), a.x, p), p), c.a4, p);
    num = submod(num, mulmod(c.a1, a.y, p), p);
    u64 den = addmod(addmod(mulmod(2, a.y, p), mulmod(c.a1, a.x, p), p), c.a3, p);
    lambda = mulmod(num, *nt::invmod(den, p), p);
  } else {
    lambda = mulmod(submod(b.y, a.y, p), *nt::invmod(submod(b.x, a.x, p), p), p);
  }
  u64 nu = submod(a.y, mulmod(lambda, a.x, p), p);
  u64 x3 = submod(submod(submod(addmod(mulmod(lambda, lambda, p), mulmod(c.a1, lambda, p), p), c.a2, p), a.x, p),
                  b.x, p);
  u64 y3 = submod(submod(nt::negmod(mulmod(addmod(lambda, c.a1, p), x3, p), p), nu, p), c.a3, p);
  return PointFp::affine(x3, y3);
}

inline PointFp subtract(const CurveFp& c, const PointFp& a, const PointFp& b) { return add(c, a, negate(c, b)); }

inline PointFp scalar_mul(const CurveFp& c, u64 n, const PointFp& q) {
  PointFp acc, base = q;
  while (n) {
    if (n & 1) acc = add(c, acc, base);
    base = add(c, base, base);
    n >>= 1;
  }
  return acc;
}

inline PointFp scalar_mul(const CurveFp& c, const mpz_class& n, const PointFp& q, u64 order_hint = 0) {
  if (order_hint) return scalar_mul(c, nt::mod(n, order_hint), q);
  if (n < 0) return scalar_mul(c, mpz_class(-n), negate(c, q));
  PointFp acc, base = q;
  const std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
  for (std::size_t i = 0; i < bits; ++i) {
    if (mpz_tstbit(n.get_mpz_t(), i)) acc = add(c, acc, base);
    base = add(c, base, base);
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Points and counting.

/// All points with the given x-coordinate (0, 1 or 2 of them).
inline std::vector<PointFp> points_with_x(const CurveFp& c, u64 x) {
  const u64 p = c.p;
  using nt::addmod, nt::mulmod;
  std::vector<PointFp> out;
  u64 f = addmod(mulmod(addmod(mulmod(addmod(x, c.a2, p), x, p), c.a4, p), x, p), c.a6, p);
  u64 b = addmod(mulmod(c.a1, x, p), c.a3, p);
  if (p == 2) {
    for (u64 y = 0; y < 2; ++y) {
      if (((y * y + b * y) % 2) == f) out.push_back(PointFp::affine(x, y));
    }
    return out;
  }
  // y^2 + b y - f = 0  ->  (2y + b)^2 = b^2 + 4f
  u64 disc = addmod(mulmod(b, b, p), mulmod(4, f, p), p);
  auto root = nt::sqrt_mod(disc, p);
  if (!root) return out;
  const u64 inv2 = (p + 1) / 2;
  u64 y1 = mulmod(nt::submod(*root, b, p), inv2, p);
  out.push_back(PointFp::affine(x, y1));
  if (*root != 0) out.push_back(PointFp::affine(x, mulmod(nt::submod(p - *root, b, p), inv2, p)));
  return out;
}

/// Exhaustive count: #E(F_p) = 1 + sum_x (1 + chi(b(x)^2 + 4 f(x))) for odd p.
inline u64 count_points_enumeration(const CurveFp& c) {
  const u64 p = c.p;
  if (p == 2) {
    u64 n = 1;
    for (u64 x = 0; x < 2; ++x) n += points_with_x(c, x).size();
    return n;
  }
  using nt::addmod, nt::mulmod;
  std::vector<char> is_square(p, 0);
  for (u64 t = 1; t < p; ++t) is_square[mulmod(t, t, p)] = 1;
  u64 n = 1;
  for (u64 x = 0; x < p; ++x) {
    u64 f = addmod(mulmod(addmod(mulmod(addmod(x, c.a2, p), x, p), c.a4, p), x, p), c.a6, p);
    u64 b = addmod(mulmod(c.a1, x, p), c.a3, p);
    u64 d = addmod(mulmod(b, b, p), mulmod(4, f, p), p);
    n += d == 0 ? 1 : (is_square[d] ? 2 : 0);
  }
  return n;
}

inline PointFp random_point(const CurveFp& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<u64> dist(0, c.p - 1);
  for (;;) {
    auto pts = points_with_x(c, dist(rng));
    if (pts.empty()) continue;
    return pts[pts.size() == 2 ? (rng() & 1) : 0];
  }
}

/// Hasse interval [p + 1 - floor(2 sqrt p), p + 1 + floor(2 sqrt p)].
inline std::pair<u64, u64> hasse_interval(u64 p) {
  const u64 w = nt::isqrt(4 * p);
  return {p + 1 - w, p + 1 + w};
}

/// Exact order of q given any positive multiple m of it.
inline u64 order_from_multiple(const CurveFp& c, const PointFp& q, u64 m, const Factorization& mf) {
  u64 order = m;
  for (const auto& [prime, e] : mf) {
    for (unsigned i = 0; i < e; ++i) {
      if (!scalar_mul(c, order / prime, q).inf) break;
      order /= prime;
    }
  }
  return order;
}

inline u64 order_from_multiple(const CurveFp& c, const PointFp& q, u64 m) {
  return order_from_multiple(c, q, m, nt::factor(m));
}

/// Some m in [lo, hi] with m*q = O by baby-step/giant-step, if one exists.
inline std::optional<u64> multiple_in_range(const CurveFp& c, const PointFp& q, u64 lo, u64 hi) {
  const u64 span = hi - lo + 1;
  const u64 baby = nt::isqrt(span) + 1;
  std::unordered_map<PointFp, u64, PointFpHash> table;
  table.reserve(baby * 2);
  PointFp cur;
  for (u64 j = 0; j < baby; ++j) {
    table.emplace(cur, j);
    cur = add(c, cur, q);
  }
  const PointFp giant = cur;  // baby * q
  PointFp acc = scalar_mul(c, lo, q);
  for (u64 i = 0; i * baby <= span; ++i) {
    auto it = table.find(negate(c, acc));
    if (it != table.end()) {
      u64 m = lo + i * baby + it->second;
      if (m <= hi) return m;
    }
    acc = add(c, acc, giant);
  }
  return std::nullopt;
}

/// Quadratic twist for p >= 5: y^2 = x^3 + A d^2 x + B d^3 with A, B the
/// short Weierstrass coefficients of c and d a non-residue.
inline CurveFp quadratic_twist(const CurveFp& c) {
  const u64 p = c.p;
  using nt::addmod, nt::mulmod, nt::submod;
  u64 b2 = addmod(mulmod(c.a1, c.a1, p), mulmod(4, c.a2, p), p);
  u64 b4 = addmod(mulmod(2, c.a4, p), mulmod(c.a1, c.a3, p), p);
  u64 b6 = addmod(mulmod(c.a3, c.a3, p), mulmod(4, c.a6, p), p);
  u64 c4 = submod(mulmod(b2, b2, p), mulmod(24, b4, p), p);
  u64 c6 = submod(submod(mulmod(36, mulmod(b2, b4, p), p), mulmod(mulmod(b2, b2, p), b2, p), p),
                  mulmod(216, b6, p), p);
  u64 A = nt::negmod(mulmod(27, c4, p), p);
  u64 B = nt::negmod(mulmod(54, c6, p), p);
  u64 d = 2;
  while (nt::legendre(d, p) != -1) ++d;
  return CurveFp{p, 0, 0, 0, mulmod(A, mulmod(d, d, p), p), mulmod(B, mulmod(mulmod(d, d, p), d, p), p)};
}

/// #E(F_p) by baby-step/giant-step in the Hasse interval, using points on
/// the curve and on its quadratic twist (N + N' = 2p + 2) to disambiguate.
/// For p < 5 the twist is skipped and only point orders on c are used.
/// Returns nullopt when the candidates stay ambiguous (only for tiny p).
inline std::optional<u64> count_points_bsgs(const CurveFp& c, std::uint64_t seed = 0) {
  const u64 p = c.p;
  const bool use_twist = p >= 5;
  const auto [lo, hi] = hasse_interval(p);
  const CurveFp twist = use_twist ? quadratic_twist(c) : c;
  std::mt19937_64 rng(seed ^ (p * 0x2545f4914f6cdd1dULL));
  u64 lambda = 1, lambda_twist = 1;
  for (int attempt = 0; attempt < 48; ++attempt) {
    const bool on_twist = use_twist && attempt % 2 == 1;
    const CurveFp& curve = on_twist ? twist : c;
    const PointFp q = random_point(curve, rng);
    auto m = multiple_in_range(curve, q, lo, hi);
    if (!m) return std::nullopt;  // impossible for a valid curve
    const u64 ord = order_from_multiple(curve, q, *m);
    (on_twist ? lambda_twist : lambda) = nt::lcm(on_twist ? lambda_twist : lambda, ord);
    std::optional<u64> found;
    int candidates = 0;
    for (u64 n = (lo + lambda - 1) / lambda * lambda; n <= hi; n += lambda) {
      if ((2 * p + 2 - n) % lambda_twist != 0) continue;
      found = n;
      if (++candidates > 1) break;
    }
    if (candidates == 1) return found;
  }
  return std::nullopt;
}

inline GroupOrderFp group_order(const CurveFp& c) {
  u64 n = 0;
  if (c.p <= kEnumerationThreshold) {
    n = count_points_enumeration(c);
  } else if (auto m = count_points_bsgs(c)) {
    n = *m;
  } else {
    n = count_points_enumeration(c);
  }
  const auto [lo, hi] = hasse_interval(c.p);
  if (n < lo || n > hi) throw std::logic_error("group order outside the Hasse interval");
  return GroupOrderFp{n, nt::factor(n)};
}

/// Exact order of q; always divides the group order.
inline u64 point_order(const CurveFp& c, const PointFp& q, const GroupOrderFp& ord) {
  return order_from_multiple(c, q, ord.n, ord.factorization);
}

// ---------------------------------------------------------------------------
// Discrete logarithms.

namespace detail {

/// d in [0, q) with d*gamma = h, gamma of prime order q.
inline std::optional<u64> dlog_prime_order(const CurveFp& c, const PointFp& gamma, const PointFp& h, u64 q) {
  if (q <= 64) {
    PointFp cur;
    for (u64 d = 0; d < q; ++d) {
      if (cur == h) return d;
      cur = add(c, cur, gamma);
    }
    return std::nullopt;
  }
  const u64 m = nt::isqrt(q) + 1;
  std::unordered_map<PointFp, u64, PointFpHash> table;
  table.reserve(2 * m);
  PointFp cur;
  for (u64 j = 0; j < m; ++j) {
    table.emplace(cur, j);
    cur = add(c, cur, gamma);
  }
  const PointFp step = negate(c, cur);  // -m*gamma
  PointFp target = h;
  for (u64 i = 0; i <= m; ++i) {
    auto it = table.find(target);
    if (it != table.end()) return (i * m + it->second) % q;
    target = add(c, target, step);
  }
  return std::nullopt;
}

}  // namespace detail

/// Smallest k >= 0 with k*base = target, or nullopt if target is not in
/// <base>. Pohlig-Hellman over the factorization of base_order with BSGS
/// for each prime.
inline std::optional<u64> discrete_log(const CurveFp& c, const PointFp& base, const PointFp& target, u64 base_order,
                                       const Factorization& order_factorization) {
  if (target.inf) return 0;
  if (!scalar_mul(c, base_order, target).inf) return std::nullopt;
  u64 k = 0, modulus = 1;
  for (const auto& [q, e] : order_factorization) {
    u64 qe = 1;
    for (unsigned i = 0; i < e; ++i) qe *= q;
    const u64 cof = base_order / qe;
    const PointFp b = scalar_mul(c, cof, base);
    const PointFp t = scalar_mul(c, cof, target);
    const PointFp gamma = scalar_mul(c, qe / q, b);
    u64 x = 0, qk = 1;
    for (unsigned i = 0; i < e; ++i) {
      PointFp h = scalar_mul(c, qe / (qk * q), subtract(c, t, scalar_mul(c, x, b)));
      auto d = detail::dlog_prime_order(c, gamma, h, q);
      if (!d) return std::nullopt;
      x += *d * qk;
      qk *= q;
    }
    // CRT: k = x mod qe, k = k mod modulus
    const u64 inv = *nt::invmod(modulus % qe, qe);
    const u64 t_coef = nt::mulmod(nt::submod(x % qe, k % qe, qe), inv, qe);
    k += modulus * t_coef;
    modulus *= qe;
  }
  k %= base_order;
  if (!(scalar_mul(c, k, base) == target)) return std::nullopt;
  return k;
}

inline std::optional<u64> discrete_log(const CurveFp& c, const PointFp& base, const PointFp& target, u64 base_order) {
  return discrete_log(c, base, target, base_order, nt::factor(base_order));
}

// ---------------------------------------------------------------------------
// Finite subgroups of E(F_p).

/// The subgroup H generated by a set of points, kept in the normal form
/// H = <c> (+) <d> with ord(d) = t | ord(c) = o, so #H = t*o. Requires only
/// point orders and discrete logs in the cyclic group <c>.
class SubgroupFp {
 public:
  SubgroupFp(CurveFp curve, GroupOrderFp group_order) : curve_(curve), group_order_(std::move(group_order)) {}

  const CurveFp& curve() const { return curve_; }
  const GroupOrderFp& group_order() const { return group_order_; }
  u64 size() const { return exponent_ * complement_order_; }
  u64 exponent() const { return exponent_; }
  u64 complement_order() const { return complement_order_; }
  const PointFp& max_order_element() const { return cyclic_; }
  const PointFp& complement_generator() const { return complement_; }
  bool cyclic() const { return complement_order_ == 1; }

  u64 order_of(const PointFp& q) const { return point_order(curve_, q, group_order_); }

  bool contains(const PointFp& q) const {
    if (q.inf) return true;
    if (!scalar_mul(curve_, exponent_, q).inf) return false;
    PointFp shifted = q;
    const PointFp neg_d = negate(curve_, complement_);
    for (u64 a = 0; a < complement_order_; ++a) {
      if (in_cyclic(shifted)) return true;
      shifted = add(curve_, shifted, neg_d);
    }
    return false;
  }

  void add_generator(const PointFp& g) {
    if (contains(g)) return;
    const u64 og = order_of(g);
    const std::vector<std::pair<PointFp, u64>> old_gens = {{cyclic_, exponent_}, {complement_, complement_order_}};
    // Element of order lcm(o, og).
    PointFp new_c = combine({{cyclic_, exponent_}, {g, og}});
    const u64 new_o = nt::lcm(exponent_, og);
    cyclic_ = new_c;
    exponent_ = new_o;
    exponent_factorization_ = nt::factor(new_o);
    // Quotient H'/<c'> is cyclic, generated by the images of c, d, g.
    std::vector<std::pair<PointFp, u64>> images;
    for (const auto& [x, ox] : {old_gens[0], old_gens[1], std::pair<PointFp, u64>{g, og}}) {
      if (x.inf) continue;
      images.emplace_back(x, quotient_order(x, ox));
    }
    u64 t = 1;
    for (const auto& [x, m] : images) t = nt::lcm(t, m);
    if (t == 1) {
      complement_ = PointFp::infinity();
      complement_order_ = 1;
      return;
    }
    PointFp e = combine(images);
    const PointFp te = scalar_mul(curve_, t, e);
    auto j = discrete_log(curve_, cyclic_, te, exponent_, exponent_factorization_);
    if (!j || *j % t != 0) throw std::logic_error("SubgroupFp: complement lift failed");
    complement_ = subtract(curve_, e, scalar_mul(curve_, *j / t, cyclic_));
    complement_order_ = t;
  }

 private:
  bool in_cyclic(const PointFp& q) const {
    return discrete_log(curve_, cyclic_, q, exponent_, exponent_factorization_).has_value();
  }

  /// Smallest k > 0 with k*x in <c>; x has order ox.
  u64 quotient_order(const PointFp& x, u64 ox) const {
    u64 k = ox;
    for (const auto& [q, e] : nt::factor(ox)) {
      for (unsigned i = 0; i < e; ++i) {
        if (!in_cyclic(scalar_mul(curve_, k / q, x))) break;
        k /= q;
      }
    }
    return k;
  }

  /// Given (x_i, m_i) where m_i is the order of x_i in some quotient, an
  /// element whose order there is lcm(m_i): for each prime take the x_i with
  /// the largest power and scale it down to that prime power.
  PointFp combine(const std::vector<std::pair<PointFp, u64>>& items) const {
    u64 l = 1;
    for (const auto& [x, m] : items) l = nt::lcm(l, m);
    PointFp acc;
    if (l == 1) return acc;
    for (const auto& [q, e] : nt::factor(l)) {
      for (const auto& [x, m] : items) {
        u64 v = 0, mm = m;
        while (mm % q == 0) {
          mm /= q;
          ++v;
        }
        if (v == e) {
          acc = add(curve_, acc, scalar_mul(curve_, mm, x));
          break;
        }
      }
    }
    return acc;
  }

  CurveFp curve_;
  GroupOrderFp group_order_;
  PointFp cyclic_;
  u64 exponent_ = 1;
  Factorization exponent_factorization_;
  PointFp complement_;
  u64 complement_order_ = 1;
};

/// Every element of the group generated by gens, by breadth-first closure.
/// Exhaustive; intended for small groups and as a cross-check.
inline std::vector<PointFp> enumerate_closure(const CurveFp& c, const std::vector<PointFp>& gens) {
  std::unordered_map<PointFp, char, PointFpHash> seen;
  std::vector<PointFp> out{PointFp::infinity()};
  seen.emplace(PointFp::infinity(), 1);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      PointFp r = add(c, out[i], g);
      if (seen.emplace(r, 1).second) out.push_back(r);
    }
  }
  return out;
}

/// All points of E(F_p), by enumeration of x.
inline std::vector<PointFp> all_points(const CurveFp& c) {
  std::vector<PointFp> out{PointFp::infinity()};
  for (u64 x = 0; x < c.p; ++x) {
    for (const auto& q : points_with_x(c, x)) out.push_back(q);
  }
  return out;
}

inline GroupStructureFp group_structure(const CurveFp& c, const GroupOrderFp& ord, std::uint64_t seed = 0) {
  std::mt19937_64 rng(seed ^ (c.p * 0x9e3779b97f4a7c15ULL) ^ 0x5bd1e995);
  if (nt::squarefree(ord.factorization)) {
    for (;;) {
      PointFp q = random_point(c, rng);
      if (point_order(c, q, ord) == ord.n) return GroupStructureFp{1, ord.n, PointFp::infinity(), q};
    }
  }
  SubgroupFp h(c, ord);
  while (h.size() != ord.n) h.add_generator(random_point(c, rng));
  GroupStructureFp s{h.complement_order(), h.exponent(), h.complement_generator(), h.max_order_element()};
  if ((c.p - 1) % s.d1 != 0) throw std::logic_error("group structure: d1 does not divide p - 1");
  return s;
}

}  // namespace pseudolin
