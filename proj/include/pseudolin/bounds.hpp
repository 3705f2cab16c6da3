#pragma once

// Leading-term evaluations of the upper and lower bounds for hhat(Q_min),
// and a report comparing them with the measured value over a grid of x.
// Unknown O(.) and o(1) constants are pinned to 0; natural logarithms.

#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudolin/errors.hpp"
#include "pseudolin/interval.hpp"
#include "pseudolin/pseudolinear.hpp"

namespace pseudolin {

/// Exponent 2x in log hhat(Q_min) <= 2x + o(x).
inline double bound_trivial(double x) {
  if (x < 3) throw PreconditionViolated("bound_trivial: x must be at least 3");
  return 2 * x;
}

/// Torsion Gamma (s = 0) of order gamma_order: 2x - 2 log(#Gamma) x / log x.
inline double bound_thm12(double x, unsigned long gamma_order) {
  if (x < 3 || gamma_order < 1) throw PreconditionViolated("bound_thm12: need x >= 3 and #Gamma >= 1");
  return 2 * x - 2 * std::log(static_cast<double>(gamma_order)) * x / std::log(x);
}

/// Free rank s >= 1: 4x/(s+2).
inline double bound_thm13(double x, unsigned s) {
  if (s < 1) throw PreconditionViolated("bound_thm13: s must be at least 1");
  return 4 * x / (s + 2);
}

/// GRH-conditional: 4x log log x / log x. Stated for s >= 19 (s >= 7 with CM);
/// evaluated regardless as a reference curve.
inline double bound_thm14(double x) {
  if (!(x > std::exp(1.0))) throw PreconditionViolated("bound_thm14: x must exceed e");
  return 4 * x * std::log(std::log(x)) / std::log(x);
}

inline constexpr const char* kThm14Note = "conditional on GRH; stated for s >= 19 (s >= 7 with CM)";

/// Lower bound on hhat(Q_min) itself (not its logarithm): x / (#Gamma log x).
inline double lower_thm15(double x, unsigned long gamma_order) {
  if (x < 3 || gamma_order < 1) throw PreconditionViolated("lower_thm15: need x >= 3 and #Gamma >= 1");
  return x / (static_cast<double>(gamma_order) * std::log(x));
}

/// Certified enclosure of x / (#Gamma log x) for exact comparisons.
inline Interval lower_thm15_interval(const mpq_class& x, unsigned long gamma_order,
                                     mpfr_prec_t prec = Interval::kDefaultPrecision) {
  const Interval xi(x, prec);
  return xi / (log(xi) * mpz_class(gamma_order));
}

/// Reference curve (not a certified bound): exp((log x)^(1/(2s+6))), or
/// exp(x^(1/(4s+12))) under GRH.
inline double lower_thm16(double x, unsigned s, bool grh) {
  if (s < 1) throw PreconditionViolated("lower_thm16: s must be at least 1");
  if (x <= 1) throw PreconditionViolated("lower_thm16: x must exceed 1");
  if (grh) return std::exp(std::pow(x, 1.0 / (4.0 * s + 12.0)));
  return std::exp(std::pow(std::log(x), 1.0 / (2.0 * s + 6.0)));
}

inline constexpr const char* kThm16Note = "reference curve, not a certified bound";

struct BoundRow {
  double x = 0;
  Interval log_lx;
  Interval log_qmin_height;
  double trivial = 0;
  std::optional<double> thm12, thm13, thm14, lower15, lower16_uncond, lower16_grh;
  Interval ratio_x;        // log hhat(Q_min) / x
  Interval ratio_trivial;  // log hhat(Q_min) / trivial
};

struct BoundReport {
  unsigned rank_gamma = 0;           // s
  unsigned long gamma_order = 0;     // #Gamma when s = 0, else 0
  std::vector<BoundRow> rows;

  static constexpr const char* kHeader =
      "x,log_L_x,log_hhat_Qmin,trivial,thm12,thm13,thm14,lower15,lower16_uncond,lower16_grh,ratio_x,ratio_trivial";

  std::string csv() const;
  std::string text() const;
};

namespace detail {

inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) { return v ? fmt12(*v) : "NA"; }

inline std::string quoted(const Interval& i) { return "\"" + i.str(12) + "\""; }

}  // namespace detail

inline std::string BoundReport::csv() const {
  std::ostringstream os;
  os << kHeader << '\n';
  for (const auto& r : rows) {
    os << detail::fmt12(r.x) << ',' << detail::quoted(r.log_lx) << ',' << detail::quoted(r.log_qmin_height) << ','
       << detail::fmt12(r.trivial) << ',' << detail::fmt_opt(r.thm12) << ',' << detail::fmt_opt(r.thm13) << ','
       << detail::fmt_opt(r.thm14) << ',' << detail::fmt_opt(r.lower15) << ',' << detail::fmt_opt(r.lower16_uncond)
       << ',' << detail::fmt_opt(r.lower16_grh) << ',' << detail::quoted(r.ratio_x) << ','
       << detail::quoted(r.ratio_trivial) << '\n';
  }
  return os.str();
}

inline std::string BoundReport::text() const {
  std::ostringstream os;
  os << "s = " << rank_gamma;
  if (rank_gamma == 0) os << ", #Gamma = " << gamma_order;
  os << "\nthm14: " << kThm14Note << "\nlower16: " << kThm16Note << '\n';
  for (const auto& r : rows) {
    os << "x=" << detail::fmt12(r.x) << " log L_x=" << r.log_lx.str() << " log hhat(Q_min)=" << r.log_qmin_height.str()
       << " trivial=" << detail::fmt12(r.trivial) << " thm12=" << detail::fmt_opt(r.thm12)
       << " thm13=" << detail::fmt_opt(r.thm13) << " thm14=" << detail::fmt_opt(r.thm14)
       << " lower15=" << detail::fmt_opt(r.lower15) << " lower16=" << detail::fmt_opt(r.lower16_uncond) << '/'
       << detail::fmt_opt(r.lower16_grh) << " ratio_x=" << r.ratio_x.str() << '\n';
  }
  return os.str();
}

/// Bound columns for a witness already constructed at w.l_x.x.
inline BoundRow bound_row(const Subgroup& g, const PseudoWitness& w) {
  const double x = w.l_x.x;
  BoundRow row;
  row.x = x;
  row.log_lx = Interval::log_of(w.l_x.value);
  row.log_qmin_height = row.log_lx.scaled_pow2(1) + log(w.rmin_height);
  row.trivial = bound_trivial(x);
  if (g.rank() == 0) {
    const unsigned long order = g.torsion_part().size();
    row.thm12 = bound_thm12(x, order);
    row.lower15 = lower_thm15(x, order);
  } else {
    row.thm13 = bound_thm13(x, static_cast<unsigned>(g.rank()));
    row.lower16_uncond = lower_thm16(x, static_cast<unsigned>(g.rank()), false);
    row.lower16_grh = lower_thm16(x, static_cast<unsigned>(g.rank()), true);
  }
  if (x > std::exp(1.0)) row.thm14 = bound_thm14(x);
  const Interval xi = Interval::from_double(x);
  row.ratio_x = row.log_qmin_height / xi;
  row.ratio_trivial = row.log_qmin_height / Interval::from_double(row.trivial);
  return row;
}

/// One row per x, in grid order.
inline BoundReport compare_report(const Subgroup& g, const std::vector<PointQ>& basis, const std::vector<double>& grid,
                                  const ConstructOptions& opts = {}) {
  BoundReport report;
  report.rank_gamma = static_cast<unsigned>(g.rank());
  if (g.rank() == 0) report.gamma_order = g.torsion_part().size();
  for (double x : grid) report.rows.push_back(bound_row(g, construct_qmin(g, x, basis, opts)));
  return report;
}

}  // namespace pseudolin
