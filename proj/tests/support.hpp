#pragma once

// Shared fixtures and seeded generators for the test suites.

#include <random>
#include <string>
#include <vector>

#include "pseudolin/pseudolin.hpp"

namespace fixtures {

using namespace pseudolin;

/// y^2 + y = x^3 - x; rank 1, generator (0,0), trivial torsion.
inline CurveQ curve_37a() { return CurveQ(0, 0, 1, -1, 0); }
inline PointQ p37() { return PointQ(0, 0); }

/// y^2 + y = x^3 + x^2 - 2x; rank 2, generators (-1,1), (0,0).
inline CurveQ curve_389a() { return CurveQ(0, 1, 1, -2, 0); }
inline PointQ p389_1() { return PointQ(-1, 1); }
inline PointQ p389_2() { return PointQ(0, 0); }

/// y^2 + 4xy + 3y = x^3 + 3x^2; torsion Z/5 generated by (0,0), rank 1.
inline CurveQ curve_c5() { return CurveQ(4, 3, 3, 0, 0); }
inline PointQ c5_torsion() { return PointQ(0, 0); }
inline PointQ c5_free() { return PointQ(-1, -1); }

/// y^2 = x^3 + 1; torsion Z/6 generated by (2,3), rank 0.
inline CurveQ curve_x3p1() { return CurveQ(0, 0, 0, 0, 1); }

inline std::mt19937_64 rng(std::uint64_t salt = 0) { return std::mt19937_64(0x5eed5eedULL ^ salt); }

/// t + sum c_i B_i with |c_i| <= bound, not all zero.
inline PointQ random_combination(const CurveQ& c, const std::vector<PointQ>& basis,
                                 const std::vector<PointQ>& torsion, long bound, std::mt19937_64& g) {
  std::uniform_int_distribution<long> coeff(-bound, bound);
  for (;;) {
    PointQ acc;
    bool nonzero = false;
    for (const auto& b : basis) {
      const long k = coeff(g);
      nonzero = nonzero || k != 0;
      acc = add(c, acc, scalar_mul(c, k, b));
    }
    if (!nonzero) continue;
    if (!torsion.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, torsion.size() - 1);
      acc = add(c, acc, torsion[pick(g)]);
    }
    if (!acc.is_infinity()) return acc;
  }
}

struct CurveCase {
  std::string name;
  CurveQ curve;
  std::vector<PointQ> basis;
  std::vector<PointQ> torsion;  // all torsion points
};

inline std::vector<CurveCase> rank_curves() {
  return {
      {"37a", curve_37a(), {p37()}, {PointQ::infinity()}},
      {"389a", curve_389a(), {p389_1(), p389_2()}, {PointQ::infinity()}},
      {"c5", curve_c5(), {c5_free()}, torsion_subgroup(curve_c5()).points},
  };
}

inline std::string data_path(const std::string& file) { return std::string(PSEUDOLIN_DATA_DIR) + "/" + file; }

}  // namespace fixtures
