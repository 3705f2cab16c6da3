#pragma once

// Command dispatch for the pseudolin front end. Argument parsing lives in
// tools/pseudolin_cli.cpp; everything here is testable in-process.

#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudolin/pseudolin.hpp"

namespace pseudolin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitParse = 2;

struct JobConfig {
  std::string command;               // order|structure|construct|verify|witness|bounds|scan
  std::optional<std::string> curve;  // "a1 a2 a3 a4 a6"
  std::optional<std::string> gamma;  // subgroup file or "trivial"
  std::optional<std::string> basis;  // basis file (free lines)
  std::optional<double> x;
  std::optional<std::string> grid;  // a:b:step
  double eps = kDefaultEps;
  long coeff_bound = 3;
  long search_bound = 1000;
  u64 pmax = 10000;
  std::optional<std::string> point;
  std::optional<u64> p;
  std::string format;  // csv|text; empty picks the command default
};

struct RunResult {
  int status = kExitOk;
  std::string output;
  std::string error;
};

namespace detail {

inline std::string fmt12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Context {
  CurveQ curve;
  Subgroup gamma;
  bool gamma_given;
  std::vector<PointQ> basis;
};

inline Context load(const JobConfig& cfg) {
  std::optional<CurveQ> curve;
  if (cfg.curve) curve = io::parse_curve_line(*cfg.curve);
  std::optional<io::SubgroupFile> gfile;
  if (cfg.gamma && *cfg.gamma != "trivial") {
    gfile = io::read_subgroup_file(*cfg.gamma);
    if (curve && !(*curve == gfile->curve)) throw PreconditionViolated("--curve differs from the curve in " + *cfg.gamma);
    curve = gfile->curve;
  }
  std::vector<PointQ> basis;
  if (cfg.basis) {
    const io::SubgroupFile b = io::read_subgroup_file(*cfg.basis);
    if (curve && !(*curve == b.curve)) throw PreconditionViolated("--curve differs from the curve in " + *cfg.basis);
    if (!b.torsion_gens.empty()) throw ParseError(*cfg.basis + ": a basis file takes only 'free' lines");
    curve = b.curve;
    basis = b.free_gens;
  }
  if (!curve) throw ParseError("no curve given (use --curve or a --gamma/--basis file)");
  Subgroup g = gfile ? gfile->subgroup() : Subgroup::trivial(*curve);
  return Context{*curve, std::move(g), cfg.gamma.has_value(), std::move(basis)};
}

inline double require_x(const JobConfig& cfg) {
  if (!cfg.x) throw ParseError(cfg.command + " requires --x");
  return *cfg.x;
}

inline std::vector<double> grid_of(const JobConfig& cfg) {
  if (cfg.grid) return io::parse_grid(*cfg.grid);
  if (cfg.x) return {*cfg.x};
  throw ParseError(cfg.command + " requires --grid or --x");
}

inline ConstructOptions construct_options(const JobConfig& cfg) {
  ConstructOptions o;
  o.coeff_bound = cfg.coeff_bound;
  o.search_bound = cfg.search_bound;
  o.eps = cfg.eps;
  return o;
}

inline std::vector<u64> good_primes(const CurveQ& c, const JobConfig& cfg) {
  std::vector<u64> out;
  if (cfg.p) {
    if (!nt::is_prime(*cfg.p)) throw ParseError("--p must be prime");
    if (!is_good_reduction(c, *cfg.p)) throw BadReduction(std::to_string(*cfg.p) + " is a prime of bad reduction");
    out.push_back(*cfg.p);
    return out;
  }
  for (u64 p : nt::primes_upto(static_cast<u64>(require_x(cfg)))) {
    if (is_good_reduction(c, p)) out.push_back(p);
  }
  return out;
}

inline std::string cmd_order(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  const auto primes = good_primes(ctx.curve, cfg);
  std::ostringstream os;
  if (!ctx.gamma_given) {
    const auto n = parallel_map(primes.size(), [&](std::size_t i) {
      return group_order(reduce_curve(ctx.curve, primes[i])).n;
    });
    if (csv) os << "p,N_p\n";
    for (std::size_t i = 0; i < primes.size(); ++i) {
      if (csv) {
        os << primes[i] << ',' << n[i] << '\n';
      } else {
        os << "p=" << primes[i] << " N_p=" << n[i] << '\n';
      }
    }
    return os.str();
  }
  const auto rows = parallel_map(primes.size(), [&](std::size_t i) {
    const ReducedSubgroup gp = reduced_subgroup(ctx.gamma, primes[i]);
    return PrimeQuotient{gp.p, true, gp.group_order.n, gp.order};
  });
  if (csv) os << "p,N_p,T_p,quotient\n";
  for (const auto& r : rows) {
    if (csv) {
      os << r.p << ',' << r.n_p << ',' << r.t_p << ',' << r.quotient() << '\n';
    } else {
      os << "p=" << r.p << " N_p=" << r.n_p << " T_p=" << r.t_p << " N_p/T_p=" << r.quotient() << '\n';
    }
  }
  return os.str();
}

inline std::string cmd_structure(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  const auto primes = good_primes(ctx.curve, cfg);
  const auto rows = parallel_map(primes.size(), [&](std::size_t i) {
    const CurveFp cp = reduce_curve(ctx.curve, primes[i]);
    const GroupOrderFp ord = group_order(cp);
    return std::make_pair(ord.n, group_structure(cp, ord));
  });
  std::ostringstream os;
  if (csv) os << "p,N_p,d1,d2\n";
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const auto& [n, s] = rows[i];
    if (csv) {
      os << primes[i] << ',' << n << ',' << s.d1 << ',' << s.d2 << '\n';
    } else {
      os << "p=" << primes[i] << " N_p=" << n << " E(F_p) = Z/" << s.d1 << " x Z/" << s.d2 << '\n';
    }
  }
  return os.str();
}

inline std::string lx_text(const PseudoWitness& w) {
  return w.symbolic ? "<" + std::to_string(w.lx_bits()) + " bits>" : w.l_x.value.get_str();
}

inline std::string cmd_construct(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  const double x = require_x(cfg);
  const PseudoWitness w = construct_qmin(ctx.gamma, x, ctx.basis, construct_options(cfg));
  const Interval log_lx = Interval::log_of(w.l_x.value);
  std::ostringstream os;
  if (csv) {
    os << "x,R_min,L_x,log_L_x,hhat_R_min,hhat_Q_min,symbolic\n";
    os << fmt12(x) << ",\"" << w.r_min.point.str() << "\"," << lx_text(w) << ",\"" << log_lx.str() << "\",\""
       << w.rmin_height.str() << "\",\"" << w.qmin_height.str() << "\"," << (w.symbolic ? "yes" : "no") << '\n';
  } else {
    os << "x=" << fmt12(x) << '\n';
    os << "R_min=" << w.r_min.point.str() << '\n';
    os << "L_x=" << lx_text(w) << '\n';
    os << "log L_x=" << log_lx.str() << '\n';
    os << "hhat(R_min)=" << w.rmin_height.str() << '\n';
    os << "hhat(Q_min)=" << w.qmin_height.str() << '\n';
    os << "symbolic=" << (w.symbolic ? "yes" : "no") << '\n';
  }
  return os.str();
}

inline std::string cmd_verify(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  const double x = require_x(cfg);
  VerificationReport report;
  if (cfg.point) {
    report = verify_pseudolinear(ctx.gamma, io::parse_point(ctx.curve, *cfg.point), x, cfg.eps);
  } else {
    const PseudoWitness w = construct_qmin(ctx.gamma, x, ctx.basis, construct_options(cfg));
    report = verify_pseudolinear(ctx.gamma, w, x, cfg.eps);
  }
  return csv ? report.csv() : report.text();
}

inline std::string cmd_witness(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  if (!cfg.point) throw ParseError("witness requires --point");
  const PointQ q = io::parse_point(ctx.curve, *cfg.point);
  const WitnessSearch s = find_witness_prime(ctx.gamma, q, cfg.pmax);
  std::ostringstream os;
  if (csv) {
    os << "witness,pmax\n" << (s.prime ? std::to_string(*s.prime) : "none") << ',' << cfg.pmax << '\n';
  } else {
    for (const auto& [p, member] : s.transcript) os << "p=" << p << " member=" << (member ? "yes" : "no") << '\n';
    if (s.prime) {
      os << "witness: " << *s.prime << '\n';
    } else {
      os << "witness: none <= " << cfg.pmax << '\n';
    }
  }
  return os.str();
}

inline std::string cmd_bounds(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  const BoundReport r = compare_report(ctx.gamma, ctx.basis, grid_of(cfg), construct_options(cfg));
  return csv ? r.csv() : r.text();
}

inline std::string cmd_scan(const JobConfig& cfg, bool csv) {
  const Context ctx = load(cfg);
  std::ostringstream os;
  if (csv) os << "x,L_x_bits,log_L_x,log_hhat_Qmin,verified,first_failure\n";
  for (double x : grid_of(cfg)) {
    const PseudoWitness w = construct_qmin(ctx.gamma, x, ctx.basis, construct_options(cfg));
    const VerificationReport v = verify_pseudolinear(ctx.gamma, w, x, cfg.eps);
    const Interval log_lx = Interval::log_of(w.l_x.value);
    const Interval log_q = log_lx.scaled_pow2(1) + log(w.rmin_height);
    const std::string fail = v.first_failure ? std::to_string(*v.first_failure) : "NA";
    if (csv) {
      os << fmt12(x) << ',' << w.lx_bits() << ",\"" << log_lx.str() << "\",\"" << log_q.str() << "\","
         << (v.pass ? "yes" : "no") << ',' << fail << '\n';
    } else {
      os << "x=" << fmt12(x) << " L_x bits=" << w.lx_bits() << " log L_x=" << log_lx.str()
         << " log hhat(Q_min)=" << log_q.str() << " verified=" << (v.pass ? "yes" : "no") << '\n';
    }
  }
  return os.str();
}

inline void validate(const JobConfig& cfg) {
  if (!(cfg.eps > 0)) throw ParseError("--eps must be positive");
  if (cfg.coeff_bound < 1) throw ParseError("--coeff-bound must be at least 1");
  if (cfg.search_bound < 1) throw ParseError("--search-bound must be at least 1");
  if (cfg.x && !(*cfg.x >= 2)) throw ParseError("--x must be at least 2");
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "text") throw ParseError("--format is csv or text");
}

}  // namespace detail

/// Runs one job. Domain errors give status 1, parse errors status 2.
inline RunResult run(const JobConfig& cfg) {
  RunResult r;
  try {
    detail::validate(cfg);
    const bool table_default = cfg.command == "bounds" || cfg.command == "scan";
    const bool csv = cfg.format.empty() ? table_default : cfg.format == "csv";
    if (cfg.command == "order") {
      r.output = detail::cmd_order(cfg, csv);
    } else if (cfg.command == "structure") {
      r.output = detail::cmd_structure(cfg, csv);
    } else if (cfg.command == "construct") {
      r.output = detail::cmd_construct(cfg, csv);
    } else if (cfg.command == "verify") {
      r.output = detail::cmd_verify(cfg, csv);
    } else if (cfg.command == "witness") {
      r.output = detail::cmd_witness(cfg, csv);
    } else if (cfg.command == "bounds") {
      r.output = detail::cmd_bounds(cfg, csv);
    } else if (cfg.command == "scan") {
      r.output = detail::cmd_scan(cfg, csv);
    } else {
      throw ParseError("unknown command '" + cfg.command + "'");
    }
  } catch (const ParseError& e) {
    r.status = kExitParse;
    r.error = e.what();
  } catch (const std::exception& e) {
    r.status = kExitDomain;
    r.error = e.what();
  }
  return r;
}

}  // namespace pseudolin::cli
