#pragma once

// Reduction E(Q) -> E(F_p) and the reduced subgroup Gamma_p.

#include <string>
#include <vector>

#include "pseudolin/ec_finite.hpp"
#include "pseudolin/ec_rational.hpp"
#include "pseudolin/torsion.hpp"

namespace pseudolin {

/// Gamma = <free_gens> + <torsion_gens> inside E(Q). Construction does not
/// certify anything; see certify_subgroup() in heights.hpp.
class Subgroup {
 public:
  explicit Subgroup(CurveQ curve, std::vector<PointQ> free_gens = {}, std::vector<PointQ> torsion_gens = {})
      : curve_(std::move(curve)), free_gens_(std::move(free_gens)), torsion_gens_(std::move(torsion_gens)) {
    for (const auto* list : {&free_gens_, &torsion_gens_}) {
      for (const auto& p : *list) {
        if (!on_curve(curve_, p)) throw NotOnCurve("generator " + p.str() + " is not on the curve");
      }
    }
  }

  static Subgroup trivial(CurveQ curve) { return Subgroup(std::move(curve)); }

  const CurveQ& curve() const { return curve_; }
  const std::vector<PointQ>& free_gens() const { return free_gens_; }
  const std::vector<PointQ>& torsion_gens() const { return torsion_gens_; }
  std::size_t rank() const { return free_gens_.size(); }

  /// All generators, free first.
  std::vector<PointQ> generators() const {
    std::vector<PointQ> all = free_gens_;
    all.insert(all.end(), torsion_gens_.begin(), torsion_gens_.end());
    return all;
  }

  /// The finite group generated by the torsion generators.
  std::vector<PointQ> torsion_part() const {
    std::vector<PointQ> out{PointQ::infinity()};
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& g : torsion_gens_) {
        PointQ r = add(curve_, out[i], g);
        if (std::find(out.begin(), out.end(), r) == out.end()) {
          out.push_back(std::move(r));
          if (out.size() > kMaxTorsionOrder) throw InvalidSubgroup("torsion generators generate an infinite group");
        }
      }
    }
    return out;
  }

 private:
  CurveQ curve_;
  std::vector<PointQ> free_gens_;
  std::vector<PointQ> torsion_gens_;
};

/// Reduction of P modulo a good prime: O when p | k in the canonical form.
inline PointFp reduce_point(const CurveQ& c, const PointQ& pt, u64 p) {
  if (!is_good_reduction(c, p)) {
    throw BadReduction("reduction modulo bad prime " + std::to_string(p));
  }
  if (pt.is_infinity()) return PointFp::infinity();
  const CanonicalForm f = canonical_form(pt);
  const u64 k = nt::mod(f.k, p);
  if (k == 0) return PointFp::infinity();
  const u64 kinv = *nt::invmod(k, p);
  const u64 kinv2 = nt::mulmod(kinv, kinv, p);
  return PointFp::affine(nt::mulmod(nt::mod(f.m, p), kinv2, p),
                         nt::mulmod(nt::mod(f.n, p), nt::mulmod(kinv2, kinv, p), p));
}

/// Gamma_p with its order T_p and the normal form used for membership.
struct ReducedSubgroup {
  u64 p = 0;
  CurveFp curve;
  GroupOrderFp group_order;  // N_p
  std::vector<PointFp> gens;
  std::vector<u64> gen_orders;
  SubgroupFp structure;
  u64 order = 1;  // T_p

  bool contains(const PointFp& q) const { return structure.contains(q); }
  bool cyclic() const { return structure.cyclic(); }
};

inline ReducedSubgroup reduced_subgroup(const Subgroup& g, u64 p) {
  const CurveFp cp = reduce_curve(g.curve(), p);
  GroupOrderFp ord = group_order(cp);
  ReducedSubgroup r{p, cp, ord, {}, {}, SubgroupFp(cp, ord), 1};
  for (const auto& gen : g.generators()) {
    PointFp q = reduce_point(g.curve(), gen, p);
    r.gen_orders.push_back(point_order(cp, q, ord));
    r.gens.push_back(q);
    r.structure.add_generator(q);
  }
  r.order = r.structure.size();
  if (ord.n % r.order != 0) throw std::logic_error("T_p does not divide N_p");
  return r;
}

inline bool member_mod_p(const ReducedSubgroup& gp, const CurveQ& c, const PointQ& q) {
  return gp.contains(reduce_point(c, q, gp.p));
}

inline bool member_mod_p(const Subgroup& g, const PointQ& q, u64 p) {
  return member_mod_p(reduced_subgroup(g, p), g.curve(), q);
}

}  // namespace pseudolin
