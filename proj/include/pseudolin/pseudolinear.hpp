#pragma once

// L_x, the minimal independent point R_min, the witness Q_min = L_x R_min,
// and the checks around pseudolinear dependence:
//   Q not in Gamma, but Q mod p in Gamma_p for every good p <= x.

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudolin/ec_finite.hpp"
#include "pseudolin/ec_rational.hpp"
#include "pseudolin/errors.hpp"
#include "pseudolin/heights.hpp"
#include "pseudolin/numtheory.hpp"
#include "pseudolin/parallel.hpp"
#include "pseudolin/reduction.hpp"
#include "pseudolin/torsion.hpp"

namespace pseudolin {

/// Above this many bits of L_x the witness is never expanded to coordinates.
inline constexpr std::size_t kSymbolicThresholdBits = 4096;

struct PrimeQuotient {
  u64 p = 0;
  bool good = true;
  u64 n_p = 1;  // N_p (1 at bad primes)
  u64 t_p = 1;  // T_p (1 at bad primes)
  u64 quotient() const { return n_p / t_p; }
};

struct LcmExponent {
  double x = 0;
  mpz_class value{1};
  std::vector<PrimeQuotient> per_prime;  // every prime <= x, increasing
};

/// Quotients N_p/T_p over the primes <= x (computed concurrently) and their lcm.
inline LcmExponent lcm_exponent(const Subgroup& g, double x) {
  if (!(x >= 2)) throw PreconditionViolated("lcm_exponent: x must be at least 2");
  const auto primes = nt::primes_upto(static_cast<u64>(std::floor(x)));
  auto rows = parallel_map(primes.size(), [&](std::size_t i) {
    const u64 p = primes[i];
    if (!is_good_reduction(g.curve(), p)) return PrimeQuotient{p, false, 1, 1};
    const ReducedSubgroup gp = reduced_subgroup(g, p);
    return PrimeQuotient{p, true, gp.group_order.n, gp.order};
  });
  if (std::none_of(rows.begin(), rows.end(), [](const PrimeQuotient& r) { return r.good; })) {
    throw NoGoodPrime("no prime of good reduction up to " + std::to_string(x));
  }
  LcmExponent out{x, 1, std::move(rows)};
  for (const auto& r : out.per_prime) {
    const mpz_class q(static_cast<unsigned long>(r.quotient()));
    out.value = lcm(out.value, q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// R_min.

struct RMin {
  PointQ point;
  std::vector<long> coefficients;  // on the basis; empty when found by search
  std::size_t torsion_index = 0;   // index into torsion_subgroup().points
  WeilHeight height;
};

namespace detail {

/// Integers ordered 0, 1, -1, 2, -2, ...
inline bool small_first_less(long a, long b) {
  const long aa = std::labs(a), ab = std::labs(b);
  if (aa != ab) return aa < ab;
  return a > b;
}

inline bool small_first_less_q(const mpq_class& a, const mpq_class& b) {
  const int c = cmp(abs(a), abs(b));
  if (c != 0) return c < 0;
  return a > b;
}

inline bool coefficient_less(const std::vector<long>& a, const std::vector<long>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), small_first_less);
}

inline bool is_independent(const Subgroup& g, const PointQ& r, double eps) {
  return with_precision_retries(eps, [&](double e) { return independent_of(g, r, e); });
}

}  // namespace detail

/// R_min over the box t + sum c_i B_i, |c_i| <= coeff_bound: the candidate of
/// least Weil height with <R> meeting Gamma only in O. Ties go to the
/// coefficient vector that is lexicographically first under 0 < 1 < -1 < 2 <
/// -2 < ..., then to the lower torsion index.
inline RMin find_rmin(const std::vector<PointQ>& basis, const Subgroup& g, long coeff_bound,
                      double eps = kDefaultEps) {
  const CurveQ& c = g.curve();
  if (g.rank() >= basis.size()) {
    throw RankExhausted("Gamma has rank " + std::to_string(g.rank()) + " but the basis has only " +
                        std::to_string(basis.size()) + " points");
  }
  if (coeff_bound < 1) throw PreconditionViolated("find_rmin: coefficient bound must be >= 1");
  for (const auto& b : basis) {
    if (!on_curve(c, b)) throw NotOnCurve("basis point " + b.str() + " is not on the curve");
  }
  const auto torsion = torsion_subgroup(c).points;

  std::vector<RMin> candidates;
  std::vector<long> coeffs(basis.size(), -coeff_bound);
  for (;;) {
    if (std::any_of(coeffs.begin(), coeffs.end(), [](long v) { return v != 0; })) {
      PointQ base;
      for (std::size_t i = 0; i < basis.size(); ++i) base = add(c, base, scalar_mul(c, coeffs[i], basis[i]));
      for (std::size_t t = 0; t < torsion.size(); ++t) {
        PointQ r = add(c, base, torsion[t]);
        if (r.is_infinity()) continue;
        WeilHeight h = weil_height(r);
        candidates.push_back(RMin{std::move(r), coeffs, t, std::move(h)});
      }
    }
    std::size_t i = 0;
    while (i < coeffs.size() && coeffs[i] == coeff_bound) coeffs[i++] = -coeff_bound;
    if (i == coeffs.size()) break;
    ++coeffs[i];
  }
  std::sort(candidates.begin(), candidates.end(), [](const RMin& a, const RMin& b) {
    if (a.height.argument != b.height.argument) return a.height < b.height;
    if (a.coefficients != b.coefficients) return detail::coefficient_less(a.coefficients, b.coefficients);
    return a.torsion_index < b.torsion_index;
  });
  for (auto& cand : candidates) {
    if (torsion_order(c, cand.point) != 0) continue;
    if (detail::is_independent(g, cand.point, eps)) return cand;
  }
  throw NotFound("no point independent of Gamma with coefficients bounded by " + std::to_string(coeff_bound));
}

/// Points of E(Q) with Weil height at most log(height_bound): x = m/k^2 with
/// max(|m|, k^2) <= height_bound, both signs of y. Sorted by Weil height, then
/// x and y each in the order 0 < 1 < -1 < ... (smaller |.| first, positive
/// before negative).
inline std::vector<PointQ> search_points(const CurveQ& c, long height_bound) {
  std::vector<PointQ> out;
  for (long k = 1; k * k <= height_bound; ++k) {
    const mpz_class kz(k), k2 = kz * kz, k3 = k2 * kz, k4 = k2 * k2, k6 = k3 * k3;
    for (long m = -height_bound; m <= height_bound; ++m) {
      if (std::gcd(m, k) != 1) continue;
      const mpz_class mz(m);
      // n^2 + (a1 m k + a3 k^3) n = m^3 + a2 m^2 k^2 + a4 m k^4 + a6 k^6, y = n/k^3.
      const mpz_class lin = c.a1() * mz * kz + c.a3() * k3;
      const mpz_class rhs = mz * mz * mz + c.a2() * mz * mz * k2 + c.a4() * mz * k4 + c.a6() * k6;
      const mpz_class disc = lin * lin + 4 * rhs;
      if (disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) continue;
      const mpz_class s = nt::isqrt(disc);
      for (const mpz_class& num : {mpz_class(-lin + s), mpz_class(-lin - s)}) {
        if (!mpz_even_p(num.get_mpz_t())) continue;
        PointQ p(mpq_class(mz, k2), mpq_class(num / 2, k3));
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(std::move(p));
        if (s == 0) break;
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const PointQ& a, const PointQ& b) {
    const WeilHeight ha = weil_height(a), hb = weil_height(b);
    if (!(ha == hb)) return ha < hb;
    if (a.x() != b.x()) return detail::small_first_less_q(a.x(), b.x());
    return detail::small_first_less_q(a.y(), b.y());
  });
  return out;
}

/// R_min without a basis: the first point in search_points order that is
/// independent of Gamma.
inline RMin find_rmin_by_search(const Subgroup& g, long height_bound, double eps = kDefaultEps) {
  for (auto& p : search_points(g.curve(), height_bound)) {
    if (torsion_order(g.curve(), p) != 0) continue;
    if (detail::is_independent(g, p, eps)) {
      WeilHeight h = weil_height(p);
      return RMin{std::move(p), {}, 0, std::move(h)};
    }
  }
  throw NotFound("no point independent of Gamma with Weil height <= log " + std::to_string(height_bound));
}

// ---------------------------------------------------------------------------
// Q_min.

struct PseudoWitness {
  RMin r_min;
  LcmExponent l_x;
  HeightInterval rmin_height;
  HeightInterval qmin_height;  // L_x^2 * rmin_height
  bool symbolic = false;       // L_x above kSymbolicThresholdBits
  PointQ translate;            // P in Gamma; the witness is P + L_x R_min

  std::size_t lx_bits() const { return mpz_sizeinbase(l_x.value.get_mpz_t(), 2); }
};

struct ConstructOptions {
  long coeff_bound = 3;
  long search_bound = 1000;  // used when no basis is supplied
  double eps = kDefaultEps;
  PointQ translate;
};

/// Assembles (R_min, L_x) and the certified height L_x^2 hhat(R_min).
inline PseudoWitness construct_qmin(const Subgroup& g, double x, const std::vector<PointQ>& basis,
                                    const ConstructOptions& opts = {}) {
  LcmExponent l = lcm_exponent(g, x);
  RMin r = basis.empty() ? find_rmin_by_search(g, opts.search_bound, opts.eps)
                         : find_rmin(basis, g, opts.coeff_bound, opts.eps);
  if (!opts.translate.is_infinity()) {
    if (!on_curve(g.curve(), opts.translate)) throw NotOnCurve("translate " + opts.translate.str() + " is not on the curve");
    const auto m = with_precision_retries(opts.eps, [&](double e) { return gamma_membership(g, opts.translate, e); });
    if (!m) throw PreconditionViolated("translate " + opts.translate.str() + " is not in Gamma");
  }
  HeightInterval h = canonical_height(g.curve(), r.point, opts.eps);
  const mpz_class l2 = l.value * l.value;
  HeightInterval qh = h * l2;
  PseudoWitness w{std::move(r), std::move(l), std::move(h), std::move(qh), false, opts.translate};
  w.symbolic = w.lx_bits() > kSymbolicThresholdBits;
  return w;
}

/// Coordinates of P + L_x R_min. Refuses symbolic witnesses and witnesses
/// whose expected coordinate size exceeds max_digits decimal digits.
inline PointQ explicit_point(const CurveQ& c, const PseudoWitness& w, double max_digits = 1e5) {
  if (w.symbolic) throw PrecisionOverflow("witness is symbolic; L_x has " + std::to_string(w.lx_bits()) + " bits");
  // Numerator and denominator of x have about hhat/log(10) digits.
  if (w.qmin_height.upper() / std::log(10.0) > max_digits) {
    throw PrecisionOverflow("explicit coordinates of Q_min would exceed " + std::to_string(max_digits) + " digits");
  }
  return add(c, w.translate, scalar_mul(c, w.l_x.value, w.r_min.point));
}

// ---------------------------------------------------------------------------
// Verification.

struct PrimeCheck {
  u64 p = 0;
  u64 n_p = 0;
  u64 t_p = 0;
  bool member = false;
};

struct VerificationReport {
  double x = 0;
  bool not_in_gamma = false;
  std::string over_q;  // how "Q not in Gamma" was decided, or why it failed
  std::vector<PrimeCheck> rows;  // good primes in order, up to the first failure
  std::optional<u64> first_failure;
  bool pass = false;

  std::string csv() const {
    std::ostringstream os;
    os << "p,N_p,T_p,member\n";
    for (const auto& r : rows) os << r.p << ',' << r.n_p << ',' << r.t_p << ',' << (r.member ? "yes" : "no") << '\n';
    return os.str();
  }

  std::string text() const {
    std::ostringstream os;
    os << "x: " << x << '\n';
    os << "not in Gamma: " << (not_in_gamma ? "yes" : "no") << " (" << over_q << ")\n";
    for (const auto& r : rows) {
      os << "p=" << r.p << " N_p=" << r.n_p << " T_p=" << r.t_p << " member=" << (r.member ? "yes" : "no") << '\n';
    }
    if (first_failure) os << "first failing prime: " << *first_failure << '\n';
    os << "result: " << (pass ? "pass" : "fail") << '\n';
    return os.str();
  }
};

namespace detail {

template <typename ReduceQ>
void check_primes(const Subgroup& g, double x, VerificationReport& report, ReduceQ&& reduce_q) {
  std::vector<u64> good;
  for (u64 p : nt::primes_upto(static_cast<u64>(std::floor(x)))) {
    if (is_good_reduction(g.curve(), p)) good.push_back(p);
  }
  report.rows = parallel_map_until(
      good.size(),
      [&](std::size_t i) {
        const ReducedSubgroup gp = reduced_subgroup(g, good[i]);
        return PrimeCheck{gp.p, gp.group_order.n, gp.order, gp.contains(reduce_q(gp))};
      },
      [](const PrimeCheck& r) { return !r.member; });
  if (!report.rows.empty() && !report.rows.back().member) report.first_failure = report.rows.back().p;
  report.pass = report.not_in_gamma && !report.first_failure;
}

}  // namespace detail

/// Checks that the symbolic witness P + L_x R_min is x-pseudolinearly
/// dependent. Mod p the scalar L_x is first reduced modulo ord(R mod p).
inline VerificationReport verify_pseudolinear(const Subgroup& g, const PseudoWitness& w, double x,
                                              double eps = kDefaultEps) {
  VerificationReport report;
  report.x = x;
  // L_x R in Gamma together with P in Gamma would put L_x R in <R> cap Gamma.
  report.not_in_gamma = detail::is_independent(g, w.r_min.point, eps);
  report.over_q = report.not_in_gamma ? "R_min independent of Gamma" : "R_min dependent on Gamma";
  detail::check_primes(g, x, report, [&](const ReducedSubgroup& gp) {
    const PointFp r = reduce_point(g.curve(), w.r_min.point, gp.p);
    const u64 ord = point_order(gp.curve, r, gp.group_order);
    const u64 k = nt::mod(w.l_x.value, ord);
    return add(gp.curve, reduce_point(g.curve(), w.translate, gp.p), scalar_mul(gp.curve, k, r));
  });
  return report;
}

/// Same check for an explicit point Q.
inline VerificationReport verify_pseudolinear(const Subgroup& g, const PointQ& q, double x, double eps = kDefaultEps) {
  if (!on_curve(g.curve(), q)) throw NotOnCurve("point " + q.str() + " is not on the curve");
  VerificationReport report;
  report.x = x;
  const auto m = with_precision_retries(eps, [&](double e) { return gamma_membership(g, q, e); });
  report.not_in_gamma = !m.has_value();
  report.over_q = report.not_in_gamma ? "not a member of Gamma" : "member of Gamma";
  detail::check_primes(g, x, report, [&](const ReducedSubgroup& gp) { return reduce_point(g.curve(), q, gp.p); });
  return report;
}

struct WitnessSearch {
  std::optional<u64> prime;
  std::vector<std::pair<u64, bool>> transcript;  // (good prime, Q mod p in Gamma_p)
};

/// Smallest good p <= p_max with Q mod p outside Gamma_p.
inline WitnessSearch find_witness_prime(const Subgroup& g, const PointQ& q, u64 p_max) {
  if (!on_curve(g.curve(), q)) throw NotOnCurve("point " + q.str() + " is not on the curve");
  WitnessSearch out;
  for (u64 p : nt::primes_upto(p_max)) {
    if (!is_good_reduction(g.curve(), p)) continue;
    const bool member = member_mod_p(g, q, p);
    out.transcript.emplace_back(p, member);
    if (!member) {
      out.prime = p;
      break;
    }
  }
  return out;
}

struct MultipleDependenceCheck {
  u64 period = 0;               // ord(P mod p)
  std::vector<u64> violations;  // n with m not dividing n and nP in <mP> mod p
  bool holds() const { return violations.empty(); }
};

/// Scans n over one period of P mod p: no nP with m not dividing n may lie in
/// <mP> mod p. Requires m | ord(P mod p).
inline MultipleDependenceCheck check_proposition_34(const CurveQ& c, const PointQ& p_gen, u64 p, u64 m) {
  if (m == 0) throw PreconditionViolated("m must be positive");
  const CurveFp cp = reduce_curve(c, p);
  const GroupOrderFp ord = group_order(cp);
  const PointFp gen = reduce_point(c, p_gen, p);
  MultipleDependenceCheck out;
  out.period = point_order(cp, gen, ord);
  if (out.period % m != 0) {
    throw PreconditionViolated(std::to_string(m) + " does not divide the order " + std::to_string(out.period) +
                               " of the reduced Mordell-Weil image");
  }
  SubgroupFp sub(cp, ord);
  sub.add_generator(scalar_mul(cp, m, gen));
  PointFp np = PointFp::infinity();
  for (u64 n = 0; n < out.period; ++n, np = add(cp, np, gen)) {
    if (n % m != 0 && sub.contains(np)) out.violations.push_back(n);
  }
  return out;
}

}  // namespace pseudolin
