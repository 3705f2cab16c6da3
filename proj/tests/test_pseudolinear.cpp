#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "support.hpp"

using namespace pseudolin;
using namespace fixtures;

TEST(LcmExponent, TrivialGammaOn37aAtFive) {
  const LcmExponent l = lcm_exponent(Subgroup::trivial(curve_37a()), 5);
  EXPECT_EQ(l.value, 280);
  std::vector<u64> q;
  for (const auto& r : l.per_prime) q.push_back(r.quotient());
  EXPECT_EQ(q, (std::vector<u64>{5, 7, 8}));
}

TEST(LcmExponent, FullImageContributesOne) {
  // (0,0) generates E(F_p) for p = 2, 3, 5 on 37a (orders 5, 7, 8).
  const LcmExponent l = lcm_exponent(Subgroup(curve_37a(), {p37()}), 5);
  EXPECT_EQ(l.value, 1);
  for (const auto& r : l.per_prime) EXPECT_EQ(r.quotient(), 1u);
}

TEST(LcmExponent, BadPrimesContributeOne) {
  const LcmExponent l = lcm_exponent(Subgroup::trivial(curve_37a()), 40);
  const auto it = std::find_if(l.per_prime.begin(), l.per_prime.end(), [](const auto& r) { return r.p == 37; });
  ASSERT_NE(it, l.per_prime.end());
  EXPECT_FALSE(it->good);
  EXPECT_EQ(it->quotient(), 1u);
  EXPECT_THROW(lcm_exponent(Subgroup::trivial(curve_x3p1()), 3), NoGoodPrime);
}

TEST(LcmExponent, MonotoneAndOrderIndependent) {
  const Subgroup g(curve_389a(), {p389_1()});
  mpz_class prev = 1;
  for (double x : {10.0, 30.0, 60.0, 120.0}) {
    const LcmExponent l = lcm_exponent(g, x);
    EXPECT_EQ(l.value % prev, 0) << x;
    std::vector<PrimeQuotient> rows = l.per_prime;
    std::shuffle(rows.begin(), rows.end(), std::mt19937_64(static_cast<std::uint64_t>(x)));
    mpz_class again = 1;
    for (const auto& r : rows) again = lcm(again, mpz_class(static_cast<unsigned long>(r.quotient())));
    EXPECT_EQ(again, l.value);
    for (const auto& r : l.per_prime) {
      EXPECT_EQ(r.n_p % r.t_p, 0u);
      EXPECT_EQ(l.value % mpz_class(static_cast<unsigned long>(r.quotient())), 0);
    }
    prev = l.value;
  }
}

TEST(FindRmin, GeneratorOf37a) {
  const RMin r = find_rmin({p37()}, Subgroup::trivial(curve_37a()), 3);
  EXPECT_EQ(r.point, p37());
  EXPECT_EQ(r.coefficients, std::vector<long>{1});
  EXPECT_EQ(r.height.argument, 1);
}

TEST(FindRmin, RankExhaustedAndIndependence) {
  EXPECT_THROW(find_rmin({p37()}, Subgroup(curve_37a(), {p37()}), 3), RankExhausted);
  const Subgroup g(curve_389a(), {p389_1()});
  const RMin r = find_rmin({p389_1(), p389_2()}, g, 2);
  EXPECT_TRUE(independent_of(g, r.point));
  const Subgroup gt(curve_c5(), {}, {c5_torsion()});
  const RMin rt = find_rmin({c5_free()}, gt, 2);
  EXPECT_TRUE(independent_of(gt, rt.point));
  EXPECT_EQ(rt.height.argument, 1);
}

TEST(FindRmin, SearchWithoutBasisAgrees) {
  const RMin r = find_rmin_by_search(Subgroup::trivial(curve_37a()), 100);
  EXPECT_EQ(r.point, p37());
  const auto pts = search_points(curve_37a(), 4);
  // +-kP for k = 1..5 (brute-force count over the same box).
  EXPECT_EQ(pts.size(), 10u);
  EXPECT_EQ(pts.front(), p37());
}

TEST(ConstructQmin, ThirtySevenAAtFive) {
  const PseudoWitness w = construct_qmin(Subgroup::trivial(curve_37a()), 5, {p37()});
  EXPECT_EQ(w.l_x.value, 280);
  EXPECT_FALSE(w.symbolic);
  EXPECT_NEAR(w.qmin_height.mid(), 280.0 * 280.0 * 0.0511114082, 1e-3);
  // Integer scaling of the interval, exactly.
  const Interval scaled = w.rmin_height * mpz_class(280 * 280);
  EXPECT_TRUE(scaled.contains(w.qmin_height) && w.qmin_height.contains(scaled));
  EXPECT_THROW(construct_qmin(Subgroup::trivial(curve_x3p1()), 3, {}), NoGoodPrime);
}

TEST(ConstructQmin, ExplicitPointMatchesSymbolicChecks) {
  const Subgroup g = Subgroup::trivial(curve_37a());
  const PseudoWitness w = construct_qmin(g, 5, {p37()});
  const PointQ q = explicit_point(g.curve(), w);
  EXPECT_EQ(q, scalar_mul(g.curve(), mpz_class(280), p37()));
  const VerificationReport a = verify_pseudolinear(g, w, 5);
  const VerificationReport b = verify_pseudolinear(g, q, 5);
  EXPECT_TRUE(a.pass);
  EXPECT_TRUE(b.pass);
  EXPECT_EQ(a.rows.size(), b.rows.size());
}

TEST(ConstructQmin, LargeLxIsSymbolic) {
  const PseudoWitness w = construct_qmin(Subgroup::trivial(curve_37a()), 20000, {p37()});
  EXPECT_GT(w.lx_bits(), kSymbolicThresholdBits);
  EXPECT_TRUE(w.symbolic);
  EXPECT_THROW(explicit_point(curve_37a(), w), PrecisionOverflow);
}

TEST(ConstructQmin, TranslateOption) {
  const Subgroup g(curve_389a(), {p389_1()});
  ConstructOptions opts;
  opts.translate = scalar_mul(curve_389a(), 2L, p389_1());
  const PseudoWitness w = construct_qmin(g, 40, {p389_1(), p389_2()}, opts);
  EXPECT_TRUE(verify_pseudolinear(g, w, 40).pass);
  opts.translate = p389_2();
  EXPECT_THROW(construct_qmin(g, 40, {p389_1(), p389_2()}, opts), PreconditionViolated);
}

TEST(Verify, WitnessPassesAtItsOwnX) {
  for (double x : {20.0, 60.0}) {
    const Subgroup g(curve_389a(), {p389_1()});
    const PseudoWitness w = construct_qmin(g, x, {p389_1(), p389_2()});
    const VerificationReport r = verify_pseudolinear(g, w, x);
    EXPECT_TRUE(r.pass);
    EXPECT_TRUE(r.not_in_gamma);
    EXPECT_FALSE(r.first_failure);
  }
}

TEST(Verify, MemberOfGammaFails) {
  const Subgroup g(curve_389a(), {p389_1()});
  const VerificationReport r = verify_pseudolinear(g, scalar_mul(curve_389a(), 2L, p389_1()), 30);
  EXPECT_FALSE(r.pass);
  EXPECT_EQ(r.over_q, "member of Gamma");
}

TEST(Verify, NonMemberFailsAtWitnessPrime) {
  const CurveQ c = curve_37a();
  const Subgroup g(c, {scalar_mul(c, 3L, p37())});
  const VerificationReport r = verify_pseudolinear(g, p37(), 100);
  EXPECT_FALSE(r.pass);
  ASSERT_TRUE(r.first_failure);
  EXPECT_EQ(*r.first_failure, 7u);
  EXPECT_EQ(r.rows.back().p, 7u);
}

TEST(Verify, NonMultipleCandidatesAllFail) {
  // Gamma = <mP>, m | #E(Q)_p: nP with m not dividing n is caught at p.
  const CurveQ c = curve_37a();
  for (long m : {2L, 4L, 8L}) {
    const Subgroup g(c, {scalar_mul(c, m, p37())});
    for (long n = 1; n < 16; ++n) {
      if (n % m == 0) continue;
      EXPECT_FALSE(member_mod_p(g, scalar_mul(c, n, p37()), 5)) << "m=" << m << " n=" << n;
      EXPECT_FALSE(verify_pseudolinear(g, scalar_mul(c, n, p37()), 5).pass);
    }
  }
}

TEST(WitnessPrime, Examples) {
  const CurveQ c = curve_37a();
  const Subgroup g(c, {scalar_mul(c, 3L, p37())});
  const WitnessSearch s = find_witness_prime(g, p37(), 100);
  ASSERT_TRUE(s.prime);
  EXPECT_EQ(*s.prime, 7u);
  EXPECT_TRUE(is_good_reduction(c, *s.prime));
  EXPECT_FALSE(member_mod_p(g, p37(), *s.prime));
  EXPECT_EQ(s.transcript.back(), std::make_pair(u64{7}, false));
  // Members never have a witness.
  EXPECT_FALSE(find_witness_prime(g, scalar_mul(c, -6L, p37()), 2000).prime);
}

TEST(MultiplesOfP, Examples) {
  const CurveQ c = curve_37a();
  EXPECT_TRUE(check_proposition_34(c, p37(), 5, 1).holds());
  for (u64 m : {2u, 4u, 8u}) {
    const MultipleDependenceCheck r = check_proposition_34(c, p37(), 5, m);
    EXPECT_EQ(r.period, 8u);
    EXPECT_TRUE(r.holds());
  }
  EXPECT_THROW(check_proposition_34(c, p37(), 5, 3), PreconditionViolated);
}

TEST(MultiplesOfP, HoldsAcrossPrimes) {
  const CurveQ c = curve_37a();
  for (u64 p : nt::primes_upto(300)) {
    if (!is_good_reduction(c, p)) continue;
    const u64 ord = point_order(reduce_curve(c, p), reduce_point(c, p37(), p), group_order(reduce_curve(c, p)));
    for (u64 m : nt::divisors(nt::factor(ord))) EXPECT_TRUE(check_proposition_34(c, p37(), p, m).holds());
  }
}

TEST(Properties, LxTimesAnyPointLandsInGammaP) {
  auto g = rng(51);
  const Subgroup gamma(curve_c5(), {}, {c5_torsion()});
  const LcmExponent l = lcm_exponent(gamma, 80);
  for (int i = 0; i < 10; ++i) {
    const PointQ r = random_combination(gamma.curve(), {c5_free()}, torsion_subgroup(gamma.curve()).points, 3, g);
    for (u64 p : nt::primes_upto(80)) {
      if (!is_good_reduction(gamma.curve(), p)) continue;
      const ReducedSubgroup gp = reduced_subgroup(gamma, p);
      const PointFp rp = reduce_point(gamma.curve(), r, p);
      EXPECT_TRUE(gp.contains(scalar_mul(gp.curve, nt::mod(l.value, gp.group_order.n), rp))) << p;
    }
  }
}

TEST(Properties, FullRankGammaAdmitsNoPseudolinearPointsPastWitnesses) {
  // s = r = 1: Gamma = <3P>, Gamma~/Gamma = {0, P, 2P}. Past the largest
  // witness prime of the nonzero classes no box point verifies.
  const CurveQ c = curve_37a();
  const Subgroup g(c, {scalar_mul(c, 3L, p37())});
  u64 bound = 0;
  for (long k : {1L, 2L}) {
    const auto s = find_witness_prime(g, scalar_mul(c, k, p37()), 10000);
    ASSERT_TRUE(s.prime);
    bound = std::max(bound, *s.prime);
  }
  for (long n = -12; n <= 12; ++n) {
    if (n == 0) continue;
    EXPECT_FALSE(verify_pseudolinear(g, scalar_mul(c, n, p37()), static_cast<double>(bound)).pass) << n;
  }
}

TEST(Properties, VerifiedPointsPastWitnessesAreIndependent) {
  // Gamma = <3 P1> on 389a; Gamma~ contains P1, so the classes P1, 2P1 bound x.
  const CurveQ c = curve_389a();
  const Subgroup g(c, {scalar_mul(c, 3L, p389_1())});
  u64 bound = 0;
  for (long k : {1L, 2L}) {
    const auto s = find_witness_prime(g, scalar_mul(c, k, p389_1()), 10000);
    ASSERT_TRUE(s.prime);
    bound = std::max(bound, *s.prime);
  }
  const double x = static_cast<double>(bound);
  const PseudoWitness w = construct_qmin(g, x, {p389_1(), p389_2()});
  EXPECT_TRUE(verify_pseudolinear(g, w, x).pass);
  EXPECT_TRUE(independent_of(g, w.r_min.point));
  int verified = 0;
  for (long a = -3; a <= 3; ++a) {
    for (long b = -3; b <= 3; ++b) {
      const PointQ q = add(c, scalar_mul(c, a, p389_1()), scalar_mul(c, b, p389_2()));
      if (q.is_infinity() || !verify_pseudolinear(g, q, x).pass) continue;
      ++verified;
      EXPECT_TRUE(independent_of(g, q)) << a << ',' << b;
    }
  }
  RecordProperty("verified_box_points", verified);
}
