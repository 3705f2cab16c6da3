#pragma once

// Weil height, certified canonical height, height pairing and the
// height-based membership/independence tests over Q.
//
// The canonical height is computed as the doubling limit
//   hhat(P) = lim h(2^n P) / 4^n
// without ever forming 2^n P. Write x(2^j P) = a_j / b_j in lowest terms and
// let F, G be the quartic forms of the duplication map, x(2P) = F(a,b)/G(a,b).
// Then h(2^(j+1) P) = 4 h(2^j P) + log Phi(u_j, v_j) - log g_j, where (u_j, v_j)
// is (a_j, b_j) scaled to sup-norm 1, Phi = max(|F|, |G|), and
// g_j = gcd(F(a_j,b_j), G(a_j,b_j)) divides the resultant R of F and G. The
// real part is iterated in interval arithmetic; g_j is computed exactly by
// carrying (a_j, b_j) modulo R^(n+1-j). Every term lies in
// [log min Phi - log R, log max Phi], which bounds the tail after n steps and
// gives the curve constant C_E with |hhat - h| <= C_E.

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "pseudolin/ec_rational.hpp"
#include "pseudolin/errors.hpp"
#include "pseudolin/interval.hpp"
#include "pseudolin/reduction.hpp"
#include "pseudolin/torsion.hpp"

namespace pseudolin {

inline constexpr double kDefaultEps = 1e-8;
inline constexpr int kPrecisionRetries = 4;

struct HeightOptions {
  /// Working precision ceiling; exceeding it raises PrecisionOverflow.
  mpfr_prec_t max_bits = 4096;
};

/// Quartic forms of the duplication map on x and the constants derived from them.
struct HeightConstants {
  std::array<mpz_class, 5> f;  // coefficients of X^4, X^3 Z, ..., Z^4
  std::array<mpz_class, 5> g;
  mpz_class resultant;         // |Res(F, G)| > 0
  Interval term_bounds;        // encloses every log Phi - log g_j
  double c_e = 0;              // |hhat(P) - h(P)| <= c_e for all P
};

/// log max(|a|, |b|) for x = a/b in lowest terms, kept exactly as the integer
/// max(|a|, |b|).
struct WeilHeight {
  mpz_class argument{1};

  Interval value(mpfr_prec_t prec = Interval::kDefaultPrecision) const { return Interval::log_of(argument, prec); }
  double approx() const { return value().mid(); }

  friend bool operator<(const WeilHeight& a, const WeilHeight& b) { return a.argument < b.argument; }
  friend bool operator==(const WeilHeight& a, const WeilHeight& b) { return a.argument == b.argument; }
};

inline WeilHeight weil_height(const PointQ& p) {
  if (p.is_infinity()) return WeilHeight{1};
  return WeilHeight{std::max(mpz_class(abs(p.x().get_num())), mpz_class(p.x().get_den()))};
}

namespace detail {

/// Determinant of a square integer matrix (fraction-free Bareiss).
inline mpz_class bareiss_det(std::vector<std::vector<mpz_class>> m) {
  const std::size_t n = m.size();
  mpz_class prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m[k][k] == 0) {
      std::size_t r = k + 1;
      while (r < n && m[r][k] == 0) ++r;
      if (r == n) return 0;
      std::swap(m[k], m[r]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
      }
    }
    prev = m[k][k];
  }
  return sign * m[n - 1][n - 1];
}

/// Resultant of two binary forms of degree 4 (Sylvester determinant).
inline mpz_class binary_quartic_resultant(const std::array<mpz_class, 5>& f, const std::array<mpz_class, 5>& g) {
  std::vector<std::vector<mpz_class>> s(8, std::vector<mpz_class>(8, 0));
  for (int r = 0; r < 4; ++r) {
    for (int i = 0; i < 5; ++i) {
      s[r][r + i] = f[i];
      s[r + 4][r + i] = g[i];
    }
  }
  return bareiss_det(std::move(s));
}

inline Interval eval_form(const std::array<mpz_class, 5>& c, const Interval& u, const Interval& v) {
  // Powers are taken separately so that u^2 etc. stay non-negative enclosures.
  const Interval u2 = u * u, v2 = v * v;
  const Interval u3 = u2 * u, v3 = v2 * v;
  const Interval u4 = u2 * u2, v4 = v2 * v2;
  return u4 * c[0] + (u3 * v) * c[1] + (u2 * v2) * c[2] + (u * v3) * c[3] + v4 * c[4];
}

inline mpz_class eval_form_mod(const std::array<mpz_class, 5>& c, const mpz_class& a, const mpz_class& b,
                               const mpz_class& modulus) {
  mpz_class acc = 0, apow = 1, bpow = 1;
  std::array<mpz_class, 5> ap, bp;
  for (int i = 0; i < 5; ++i) {
    ap[i] = apow;
    bp[i] = bpow;
    apow = apow * a % modulus;
    bpow = bpow * b % modulus;
  }
  for (int i = 0; i < 5; ++i) acc += c[i] * ap[4 - i] * bp[i];
  mpz_class r;
  mpz_mod(r.get_mpz_t(), acc.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

/// Encloses min and max of Phi(u, v) = max(|F|, |G|) over the sup-norm unit
/// circle by adaptive subdivision of its two half-edges (Phi is even).
inline std::pair<Interval, Interval> phi_range(const std::array<mpz_class, 5>& f,
                                               const std::array<mpz_class, 5>& g) {
  constexpr mpfr_prec_t prec = 96;
  constexpr int initial_pieces = 512;
  Interval lower_min(prec), upper_max(prec);
  bool first = true;
  struct Piece {
    mpq_class lo, hi;
    int depth;
  };
  for (int edge = 0; edge < 2; ++edge) {
    std::vector<Piece> work;
    for (int i = 0; i < initial_pieces; ++i) {
      work.push_back({mpq_class(2 * i - initial_pieces, initial_pieces),
                      mpq_class(2 * (i + 1) - initial_pieces, initial_pieces), 0});
    }
    while (!work.empty()) {
      Piece piece = work.back();
      work.pop_back();
      const Interval t = hull(Interval(piece.lo, prec), Interval(piece.hi, prec));
      const Interval one(1L, prec);
      const Interval& u = edge == 0 ? one : t;
      const Interval& v = edge == 0 ? t : one;
      const Interval phi = max(abs(eval_form(f, u, v)), abs(eval_form(g, u, v)));
      if (!phi.certainly_positive()) {
        if (piece.depth > 60) throw std::logic_error("duplication forms share a real root");
        mpq_class mid = (piece.lo + piece.hi) / 2;
        work.push_back({piece.lo, mid, piece.depth + 1});
        work.push_back({mid, piece.hi, piece.depth + 1});
        continue;
      }
      if (first) {
        lower_min = phi;
        upper_max = phi;
        first = false;
      } else {
        lower_min = min(lower_min, phi);
        upper_max = max(upper_max, phi);
      }
    }
  }
  return {lower_min, upper_max};
}

inline HeightConstants compute_height_constants(const CurveQ& c) {
  HeightConstants hc;
  hc.f = {1, 0, -c.b4(), -2 * c.b6(), -c.b8()};
  hc.g = {0, 4, c.b2(), 2 * c.b4(), c.b6()};
  hc.resultant = abs(binary_quartic_resultant(hc.f, hc.g));
  if (hc.resultant == 0) throw SingularCurve("duplication forms have a common root");
  auto [phi_min, phi_max] = phi_range(hc.f, hc.g);
  const Interval lo_term = log(phi_min) - Interval::log_of(hc.resultant);
  const Interval hi_term = log(phi_max);
  hc.term_bounds = hull(lo_term, hi_term);
  hc.c_e = std::max(std::fabs(hc.term_bounds.lower()), std::fabs(hc.term_bounds.upper())) / 3.0;
  hc.c_e = std::nextafter(hc.c_e, INFINITY);
  return hc;
}

}  // namespace detail

/// Per-curve constants, computed once and cached.
inline const HeightConstants& height_constants(const CurveQ& c) {
  static std::mutex mutex;
  static std::map<std::string, std::unique_ptr<const HeightConstants>> cache;
  const std::string key = c.str();
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
  }
  auto computed = std::make_unique<const HeightConstants>(detail::compute_height_constants(c));
  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(computed));
  return *it->second;
}

/// Explicit constant with |hhat(P) - h(P)| <= C_E for every P in E(Q).
inline double height_difference_bound(const CurveQ& c) { return height_constants(c).c_e; }

namespace detail {

/// One attempt at the given precision; nullopt if the precision was too low
/// to separate Phi from zero or to reach the requested width.
inline std::optional<Interval> canonical_height_attempt(const HeightConstants& hc, const PointQ& pt, int steps,
                                                        mpfr_prec_t prec) {
  const mpz_class a0 = pt.x().get_num();
  const mpz_class b0 = pt.x().get_den();
  const mpz_class scale = std::max(mpz_class(abs(a0)), b0);

  mpz_class modulus;
  mpz_pow_ui(modulus.get_mpz_t(), hc.resultant.get_mpz_t(), static_cast<unsigned long>(steps + 1));
  mpz_class a, b;
  mpz_mod(a.get_mpz_t(), a0.get_mpz_t(), modulus.get_mpz_t());
  mpz_mod(b.get_mpz_t(), b0.get_mpz_t(), modulus.get_mpz_t());

  mpq_class u0(a0, scale), v0(b0, scale);
  u0.canonicalize();
  v0.canonicalize();
  Interval u(u0, prec), v(v0, prec);
  const Interval unit = Interval::hull(-1.0, 1.0, prec);
  Interval sum = Interval::log_of(scale, prec);
  for (int j = 0; j < steps; ++j) {
    // Exact cancellation g_j.
    const mpz_class fa = eval_form_mod(hc.f, a, b, modulus);
    const mpz_class ga = eval_form_mod(hc.g, a, b, modulus);
    mpz_class g = gcd(gcd(fa, ga), hc.resultant);
    modulus /= hc.resultant;
    a = fa / g % modulus;
    b = ga / g % modulus;

    // Archimedean growth.
    const Interval fu = eval_form(hc.f, u, v);
    const Interval gu = eval_form(hc.g, u, v);
    const Interval af = abs(fu), ag = abs(gu);
    const Interval phi = max(af, ag);
    if (!phi.certainly_positive()) return std::nullopt;
    const Interval term = log(phi) - Interval::log_of(g, prec);
    sum += term.scaled_pow2(-2 * (j + 1));
    // (F, G) is only defined up to sign, and Phi is even.
    if (af.certainly_ge(ag) && !fu.contains_zero()) {
      v = intersect(gu / fu, unit);
      u = Interval(1L, prec);
    } else if (ag.certainly_ge(af) && !gu.contains_zero()) {
      u = intersect(fu / gu, unit);
      v = Interval(1L, prec);
    } else {
      u = intersect(fu / phi, unit);
      v = intersect(gu / phi, unit);
    }
  }
  const Interval tail = (hc.term_bounds / Interval(3L, prec)).scaled_pow2(-2 * steps);
  return sum + tail;
}

}  // namespace detail

/// Certified enclosure of hhat(P) of width <= eps.
inline HeightInterval canonical_height(const CurveQ& c, const PointQ& p, double eps = kDefaultEps,
                                       const HeightOptions& opts = {}) {
  if (!(eps > 0)) throw PreconditionViolated("canonical_height: eps must be positive");
  if (p.is_infinity()) return Interval(0L, Interval::kDefaultPrecision);
  const HeightConstants& hc = height_constants(c);
  // Tail width (hi - lo)/(3 * 4^n) <= eps/2.
  const double spread = hc.term_bounds.width() / 3.0;
  int steps = 0;
  while (std::ldexp(spread, -2 * steps) > eps / 2) ++steps;
  mpfr_prec_t prec = 64 + 2 * steps + static_cast<mpfr_prec_t>(std::ceil(-std::log2(eps)));
  for (; prec <= opts.max_bits; prec *= 2) {
    auto r = detail::canonical_height_attempt(hc, p, steps, prec);
    if (r && r->width() <= eps) {
      // hhat >= 0 always.
      if (r->certainly_negative()) throw std::logic_error("negative canonical height enclosure");
      return *r;
    }
  }
  throw PrecisionOverflow("canonical height of " + p.str() + " needs more than " + std::to_string(opts.max_bits) +
                          " bits");
}

/// Neron-Tate pairing <P,Q> = (hhat(P+Q) - hhat(P) - hhat(Q))/2, width <= eps.
inline Interval height_pairing(const CurveQ& c, const PointQ& p, const PointQ& q, double eps = kDefaultEps) {
  const double e = eps * 2.0 / 3.0;
  if (p == q) return canonical_height(c, p, eps);
  const Interval sum = canonical_height(c, add(c, p, q), e);
  const Interval two(2L, sum.precision());
  return (sum - canonical_height(c, p, e) - canonical_height(c, q, e)) / two;
}

// ---------------------------------------------------------------------------
// Gram matrices and Gamma-membership.

using IntervalMatrix = std::vector<std::vector<Interval>>;

inline IntervalMatrix gram_matrix(const CurveQ& c, const std::vector<PointQ>& pts, double eps = kDefaultEps) {
  IntervalMatrix m(pts.size(), std::vector<Interval>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i; j < pts.size(); ++j) {
      m[i][j] = height_pairing(c, pts[i], pts[j], eps);
      if (i != j) m[j][i] = m[i][j];
    }
  }
  return m;
}

/// Laplace expansion; the matrices here are tiny (rank + 1).
inline Interval determinant(const IntervalMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Interval(1L, Interval::kDefaultPrecision);
  if (n == 1) return m[0][0];
  Interval det(0L, m[0][0].precision());
  for (std::size_t col = 0; col < n; ++col) {
    IntervalMatrix minor;
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<Interval> row;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != col) row.push_back(m[r][k]);
      }
      minor.push_back(std::move(row));
    }
    const Interval term = m[0][col] * determinant(minor);
    det = col % 2 == 0 ? det + term : det - term;
  }
  return det;
}

/// Solution of m x = rhs by Cramer's rule; throws InconclusivePrecision when
/// det(m) is not separated from zero.
inline std::vector<Interval> solve(const IntervalMatrix& m, const std::vector<Interval>& rhs) {
  const Interval det = determinant(m);
  if (det.contains_zero()) throw InconclusivePrecision("Gram determinant not separated from zero");
  std::vector<Interval> x;
  for (std::size_t i = 0; i < m.size(); ++i) {
    IntervalMatrix mi = m;
    for (std::size_t r = 0; r < m.size(); ++r) mi[r][i] = rhs[r];
    x.push_back(determinant(mi) / det);
  }
  return x;
}

/// Regulator of the free generators (determinant of their Gram matrix).
inline Interval regulator(const Subgroup& g, double eps = kDefaultEps) {
  return determinant(gram_matrix(g.curve(), g.free_gens(), eps));
}

/// Runs f(eps), halving eps on InconclusivePrecision up to kPrecisionRetries times.
template <typename F>
auto with_precision_retries(double eps, F&& f) {
  for (int attempt = 0;; ++attempt) {
    try {
      return f(eps);
    } catch (const InconclusivePrecision&) {
      if (attempt >= kPrecisionRetries) throw;
      eps /= 2;
    }
  }
}

/// Verifies the subgroup presentation: torsion generators of finite order,
/// free generators of infinite order with a regulator certified nonzero
/// (lower end above 10x the enclosure width).
inline void certify_subgroup(const Subgroup& g, double eps = kDefaultEps) {
  for (const auto& t : g.torsion_gens()) {
    if (torsion_order(g.curve(), t) == 0) throw InvalidSubgroup("torsion generator " + t.str() + " has infinite order");
  }
  for (const auto& p : g.free_gens()) {
    if (torsion_order(g.curve(), p) != 0) throw InvalidSubgroup("free generator " + p.str() + " is a torsion point");
  }
  if (g.rank() == 0) return;
  for (int attempt = 0; attempt <= kPrecisionRetries; ++attempt, eps /= 2) {
    const Interval reg = regulator(g, eps);
    if (reg.certainly_positive() && reg.lower() > 10 * reg.width()) return;
  }
  throw InvalidSubgroup("free generators are not certified independent");
}

struct GammaMembership {
  std::vector<mpz_class> coefficients;  // c_i with Q = t + sum c_i P_i
  PointQ torsion;                       // t
};

namespace detail {

inline constexpr double kRoundingTolerance = 1e-3;

/// Integer vector enclosed (to kRoundingTolerance) by xs; nullopt if some
/// entry certainly excludes every integer. Throws InconclusivePrecision
/// otherwise.
inline std::optional<std::vector<mpz_class>> round_to_integers(const std::vector<Interval>& xs) {
  std::vector<mpz_class> out;
  for (const auto& x : xs) {
    if (!x.contains_integer()) return std::nullopt;
    const mpz_class n = x.nearest_integer();
    const Interval window =
        Interval(n, x.precision()) + Interval::hull(-kRoundingTolerance, kRoundingTolerance, x.precision());
    if (!window.contains(x)) throw InconclusivePrecision("coefficient enclosure too wide to round");
    out.push_back(n);
  }
  return out;
}

inline PointQ combination(const CurveQ& c, const std::vector<PointQ>& pts, const std::vector<mpz_class>& coeffs) {
  PointQ acc;
  for (std::size_t i = 0; i < pts.size(); ++i) acc = add(c, acc, scalar_mul(c, coeffs[i], pts[i]));
  return acc;
}

}  // namespace detail

/// Decides Q in Gamma. On membership returns the coefficients, verified by
/// exact arithmetic; nullopt is a certified non-membership.
inline std::optional<GammaMembership> gamma_membership(const Subgroup& g, const PointQ& q, double eps = kDefaultEps) {
  const CurveQ& c = g.curve();
  const auto torsion = g.torsion_part();
  auto in_torsion = [&](const PointQ& d) { return std::find(torsion.begin(), torsion.end(), d) != torsion.end(); };
  if (g.rank() == 0) {
    if (in_torsion(q)) return GammaMembership{{}, q};
    return std::nullopt;
  }
  const IntervalMatrix gram = gram_matrix(c, g.free_gens(), eps);
  std::vector<Interval> rhs;
  for (const auto& p : g.free_gens()) rhs.push_back(height_pairing(c, q, p, eps));
  auto coeffs = detail::round_to_integers(solve(gram, rhs));
  if (!coeffs) return std::nullopt;
  const PointQ d = subtract(c, q, detail::combination(c, g.free_gens(), *coeffs));
  if (!in_torsion(d)) return std::nullopt;
  return GammaMembership{*coeffs, d};
}

/// Largest multiplier tried when looking for m with m*R in Gamma + torsion.
inline constexpr long kDependenceSearchLimit = 1000;

/// True iff <R> meets Gamma only in O. R must have infinite order.
inline bool independent_of(const Subgroup& g, const PointQ& r, double eps = kDefaultEps) {
  const CurveQ& c = g.curve();
  if (torsion_order(c, r) != 0) throw PreconditionViolated("independent_of: " + r.str() + " is a torsion point");
  std::vector<PointQ> pts = g.free_gens();
  pts.push_back(r);
  const IntervalMatrix gram = gram_matrix(c, pts, eps);
  if (determinant(gram).certainly_positive()) return true;
  if (g.rank() == 0) throw InconclusivePrecision("canonical height of R not separated from zero");

  // det ~ 0: look for m with m R - sum n_i P_i torsion.
  IntervalMatrix base(g.rank(), std::vector<Interval>(g.rank()));
  std::vector<Interval> rhs;
  for (std::size_t i = 0; i < g.rank(); ++i) {
    for (std::size_t j = 0; j < g.rank(); ++j) base[i][j] = gram[i][j];
    rhs.push_back(gram[i][g.rank()]);
  }
  const auto coeffs = solve(base, rhs);
  for (long m = 1; m <= kDependenceSearchLimit; ++m) {
    std::vector<Interval> scaled;
    for (const auto& x : coeffs) scaled.push_back(x * mpz_class(m));
    std::optional<std::vector<mpz_class>> n;
    try {
      n = detail::round_to_integers(scaled);
    } catch (const InconclusivePrecision&) {
      continue;
    }
    if (!n) continue;
    const PointQ d = subtract(c, scalar_mul(c, mpz_class(m), r), detail::combination(c, g.free_gens(), *n));
    if (torsion_order(c, d) != 0) return false;
  }
  throw InconclusivePrecision("independence of " + r.str() + " could not be decided");
}

}  // namespace pseudolin
