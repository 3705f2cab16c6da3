#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace pseudolin;
using namespace fixtures;

namespace {

CurveFp random_curve(u64 p, std::mt19937_64& g) {
  for (;;) {
    const long a1 = g() % p, a2 = g() % p, a3 = g() % p, a4 = g() % p, a6 = g() % p;
    try {
      const CurveQ c(a1, a2, a3, a4, a6);
      if (is_good_reduction(c, p)) return reduce_curve(c, p);
    } catch (const SingularCurve&) {
    }
  }
}

CurveFp short_curve(u64 p, u64 a, u64 b) { return reduce_curve(CurveQ(0, 0, 0, a, b), p); }

}  // namespace

TEST(EcFinite, SmallPointCounts) {
  const CurveQ c = curve_37a();
  EXPECT_EQ(group_order(reduce_curve(c, 2)).n, 5u);
  EXPECT_EQ(group_order(reduce_curve(c, 3)).n, 7u);
  EXPECT_EQ(group_order(reduce_curve(c, 5)).n, 8u);
  EXPECT_EQ(group_order(short_curve(5, 1, 1)).n, 9u);
  EXPECT_THROW(reduce_curve(c, 37), BadReduction);
}

TEST(EcFinite, PointOrdersOverF7) {
  const CurveFp c = short_curve(7, 1, 0);
  const GroupOrderFp ord = group_order(c);
  ASSERT_EQ(ord.n, 8u);
  std::multiset<u64> orders;
  for (const auto& q : all_points(c)) {
    if (!q.inf) orders.insert(point_order(c, q, ord));
  }
  EXPECT_EQ(orders, (std::multiset<u64>{2, 4, 4, 8, 8, 8, 8}));
}

TEST(EcFinite, GroupAxiomsOnRandomCurves) {
  auto g = rng(3);
  for (u64 p : {2ULL, 3ULL, 5ULL, 101ULL, 7919ULL}) {
    for (int i = 0; i < 4; ++i) {
      const CurveFp c = random_curve(p, g);
      const PointFp a = random_point(c, g), b = random_point(c, g), d = random_point(c, g);
      EXPECT_TRUE(on_curve(c, add(c, a, b)));
      EXPECT_EQ(add(c, a, b), add(c, b, a));
      EXPECT_EQ(add(c, add(c, a, b), d), add(c, a, add(c, b, d)));
      EXPECT_TRUE(add(c, a, negate(c, a)).inf);
      EXPECT_TRUE(scalar_mul(c, group_order(c).n, a).inf);
    }
  }
}

TEST(EcFinite, BsgsMatchesEnumerationAboveThreshold) {
  auto g = rng(4);
  for (u64 p : {10007ULL, 20011ULL, 65537ULL, 100003ULL}) {
    for (int i = 0; i < 3; ++i) {
      const CurveFp c = random_curve(p, g);
      const auto bsgs = count_points_bsgs(c, i);
      const u64 exact = count_points_enumeration(c);
      if (bsgs) {
        EXPECT_EQ(*bsgs, exact) << "p=" << p;
      }
      EXPECT_EQ(group_order(c).n, exact);
      const auto [lo, hi] = hasse_interval(p);
      EXPECT_LE(lo, exact);
      EXPECT_LE(exact, hi);
    }
  }
}

TEST(EcFinite, BsgsNeverDisagreesAtSmallPrimes) {
  auto g = rng(6);
  int answered = 0;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL}) {
    for (int i = 0; i < 8; ++i) {
      const CurveFp c = random_curve(p, g);
      if (const auto bsgs = count_points_bsgs(c, i)) {
        EXPECT_EQ(*bsgs, count_points_enumeration(c)) << "p=" << p;
        ++answered;
      }
    }
  }
  EXPECT_GT(answered, 24);
}

TEST(EcFinite, LargePrimeOrderSatisfiesHasseAndAnnihilates) {
  auto g = rng(5);
  for (u64 p : {1000003ULL, 1000000007ULL, 4294967291ULL}) {
    const CurveFp c = random_curve(p, g);
    const GroupOrderFp ord = group_order(c);
    const double dev = std::fabs(static_cast<double>(ord.n) - static_cast<double>(p + 1));
    EXPECT_LE(dev, 2 * std::sqrt(static_cast<double>(p)));
    for (int i = 0; i < 5; ++i) EXPECT_TRUE(scalar_mul(c, ord.n, random_point(c, g)).inf);
  }
}

TEST(EcFinite, QuadraticTwistOrdersSumTo2pPlus2) {
  auto g = rng(6);
  for (u64 p : {101ULL, 997ULL, 5003ULL}) {
    const CurveFp c = random_curve(p, g);
    EXPECT_EQ(count_points_enumeration(c) + count_points_enumeration(quadratic_twist(c)), 2 * p + 2);
  }
}

TEST(EcFinite, DiscreteLogRecoversExponent) {
  auto g = rng(7);
  for (u64 p : {1009ULL, 65537ULL, 1000003ULL}) {
    const CurveFp c = random_curve(p, g);
    const GroupOrderFp ord = group_order(c);
    for (int i = 0; i < 5; ++i) {
      const PointFp base = random_point(c, g);
      const u64 n = point_order(c, base, ord);
      const u64 k = g() % n;
      const auto got = discrete_log(c, base, scalar_mul(c, k, base), n);
      ASSERT_TRUE(got);
      EXPECT_EQ(*got, k);
    }
  }
}

TEST(EcFinite, GroupStructureInvariants) {
  auto g = rng(8);
  for (u64 p : nt::primes_upto(400)) {
    if (p < 5) continue;
    const CurveFp c = random_curve(p, g);
    const GroupOrderFp ord = group_order(c);
    const GroupStructureFp s = group_structure(c, ord);
    EXPECT_EQ(s.d1 * s.d2, ord.n);
    EXPECT_EQ(s.d2 % s.d1, 0u);
    EXPECT_EQ((p - 1) % s.d1, 0u);
    EXPECT_EQ(point_order(c, s.g2, ord), s.d2);
    EXPECT_EQ(enumerate_closure(c, {s.g1, s.g2}).size(), ord.n);
  }
}

TEST(EcFinite, SubgroupMembershipMatchesClosure) {
  auto g = rng(9);
  for (u64 p : {7ULL, 13ULL, 31ULL, 101ULL, 211ULL}) {
    for (int trial = 0; trial < 6; ++trial) {
      const CurveFp c = random_curve(p, g);
      const GroupOrderFp ord = group_order(c);
      std::vector<PointFp> gens;
      SubgroupFp h(c, ord);
      const int ngens = 1 + trial % 3;
      for (int i = 0; i < ngens; ++i) {
        PointFp q = scalar_mul(c, 1 + g() % 4, random_point(c, g));
        gens.push_back(q);
        h.add_generator(q);
      }
      const auto closure = enumerate_closure(c, gens);
      EXPECT_EQ(h.size(), closure.size());
      std::set<std::pair<u64, u64>> in;
      for (const auto& q : closure) in.insert({q.inf ? p : q.x, q.inf ? p : q.y});
      for (const auto& q : all_points(c)) {
        EXPECT_EQ(h.contains(q), in.count({q.inf ? p : q.x, q.inf ? p : q.y}) == 1);
      }
    }
  }
}
