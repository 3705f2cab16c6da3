#pragma once

// Text formats. A curve line is "a1 a2 a3 a4 a6". Rationals are "num/den" or
// integers, points are "x,y" or "inf". Subgroup and basis files hold a curve
// line followed by "free x,y" / "torsion x,y" lines; '#' starts a comment.

#include <gmpxx.h>

#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pseudolin/ec_rational.hpp"
#include "pseudolin/errors.hpp"
#include "pseudolin/reduction.hpp"

namespace pseudolin::io {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& s) { return trim(s.substr(0, s.find('#'))); }

inline mpz_class parse_integer(const std::string& text) {
  const std::string t = trim(text);
  mpz_class z;
  const std::size_t start = !t.empty() && (t[0] == '-' || t[0] == '+') ? 1 : 0;
  if (t.size() == start || t.find_first_not_of("0123456789", start) != std::string::npos ||
      z.set_str(t[0] == '+' ? t.substr(1) : t, 10) != 0) {
    throw ParseError("not an integer: '" + text + "'");
  }
  return z;
}

inline mpq_class parse_rational(const std::string& text) {
  const std::string t = trim(text);
  const auto slash = t.find('/');
  if (slash == std::string::npos) return mpq_class(parse_integer(t));
  const mpz_class num = parse_integer(t.substr(0, slash));
  const mpz_class den = parse_integer(t.substr(slash + 1));
  if (den == 0) throw ParseError("zero denominator: '" + text + "'");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

/// "inf" or "x,y"; not checked against any curve.
inline PointQ parse_point(const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf") return PointQ::infinity();
  const auto comma = t.find(',');
  if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
    throw ParseError("point must be 'x,y' or 'inf': '" + text + "'");
  }
  return PointQ(parse_rational(t.substr(0, comma)), parse_rational(t.substr(comma + 1)));
}

inline PointQ parse_point(const CurveQ& c, const std::string& text) {
  PointQ p = parse_point(text);
  if (!on_curve(c, p)) throw NotOnCurve("point " + p.str() + " is not on curve [" + c.str() + "]");
  return p;
}

/// Five integers separated by whitespace. Throws ParseError on malformed
/// input and SingularCurve on a singular model.
inline CurveQ parse_curve_line(const std::string& text) {
  std::istringstream is(strip_comment(text));
  std::vector<mpz_class> a;
  std::string tok;
  while (is >> tok) a.push_back(parse_integer(tok));
  if (a.size() != 5) throw ParseError("curve line needs 5 integers a1 a2 a3 a4 a6: '" + text + "'");
  return CurveQ(a[0], a[1], a[2], a[3], a[4]);
}

struct SubgroupFile {
  CurveQ curve;
  std::vector<PointQ> free_gens;
  std::vector<PointQ> torsion_gens;

  Subgroup subgroup() const { return Subgroup(curve, free_gens, torsion_gens); }
};

inline SubgroupFile parse_subgroup(std::istream& in, const std::string& name = "<input>") {
  std::optional<CurveQ> curve;
  std::vector<PointQ> free_gens, torsion_gens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = strip_comment(line);
    if (t.empty()) continue;
    const std::string where = name + ":" + std::to_string(lineno) + ": ";
    try {
      if (!curve) {
        curve = parse_curve_line(t);
        continue;
      }
      std::istringstream is(t);
      std::string kind, pt, extra;
      is >> kind >> pt;
      if (pt.empty() || (is >> extra)) throw ParseError("expected 'free x,y' or 'torsion x,y'");
      PointQ p = parse_point(*curve, pt);
      if (kind == "free") {
        free_gens.push_back(std::move(p));
      } else if (kind == "torsion") {
        torsion_gens.push_back(std::move(p));
      } else {
        throw ParseError("unknown generator kind '" + kind + "'");
      }
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    } catch (const NotOnCurve& e) {
      throw NotOnCurve(where + e.what());
    }
  }
  if (!curve) throw ParseError(name + ": missing curve line");
  return SubgroupFile{*curve, std::move(free_gens), std::move(torsion_gens)};
}

inline SubgroupFile read_subgroup_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  return parse_subgroup(in, path);
}

/// "a:b:step" -> a, a+step, ..., <= b.
inline std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw ParseError("");
    } catch (const std::exception&) {
      throw ParseError("grid must be a:b:step with numeric parts: '" + text + "'");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0]) {
    throw ParseError("grid must be a:b:step with step > 0 and a <= b: '" + text + "'");
  }
  std::vector<double> grid;
  for (long i = 0;; ++i) {
    const double v = parts[0] + static_cast<double>(i) * parts[2];
    if (v > parts[1] * (1 + 1e-12)) break;
    grid.push_back(v);
  }
  return grid;
}

}  // namespace pseudolin::io
