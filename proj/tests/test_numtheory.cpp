#include <gtest/gtest.h>

#include <random>

#include "pseudolin/numtheory.hpp"

using namespace pseudolin;

namespace {

u64 slow_powmod(u64 b, u64 e, u64 m) {
  u64 r = 1 % m;
  for (u64 i = 0; i < e; ++i) r = static_cast<u64>(static_cast<u128>(r) * b % m);
  return r;
}

}  // namespace

TEST(NumTheory, ModularArithmeticNearWordLimit) {
  const u64 m = 0xffffffffffffffc5ULL;  // largest 64-bit prime
  EXPECT_EQ(nt::addmod(m - 1, m - 1, m), m - 2);
  EXPECT_EQ(nt::submod(0, 1, m), m - 1);
  EXPECT_EQ(nt::negmod(0, m), 0u);
  EXPECT_EQ(nt::mulmod(m - 1, m - 1, m), 1u);
  EXPECT_EQ(nt::powmod(3, m - 1, m), 1u);
}

TEST(NumTheory, PowmodMatchesRepeatedMultiplication) {
  auto g = std::mt19937_64(11);
  for (int i = 0; i < 200; ++i) {
    const u64 m = 2 + g() % 100000, b = g() % m, e = g() % 300;
    EXPECT_EQ(nt::powmod(b, e, m), slow_powmod(b, e, m));
  }
}

TEST(NumTheory, InverseRoundTrip) {
  auto g = std::mt19937_64(12);
  for (int i = 0; i < 500; ++i) {
    const u64 m = 2 + g() % 1000000007ULL, a = g() % m;
    auto inv = nt::invmod(a, m);
    if (nt::gcd(a, m) == 1) {
      ASSERT_TRUE(inv);
      EXPECT_EQ(nt::mulmod(a, *inv, m), 1 % m);
    } else {
      EXPECT_FALSE(inv);
    }
  }
}

TEST(NumTheory, PrimalityAgreesWithSieve) {
  const auto primes = nt::primes_upto(200000);
  std::vector<bool> is(200001, false);
  for (u64 p : primes) is[p] = true;
  for (u64 n = 0; n <= 200000; ++n) ASSERT_EQ(nt::is_prime(n), is[n]) << n;
  EXPECT_EQ(primes.size(), 17984u);
  EXPECT_TRUE(nt::is_prime(0xffffffffffffffc5ULL));
  EXPECT_FALSE(nt::is_prime(3215031751ULL));  // strong pseudoprime to bases 2,3,5,7
}

TEST(NumTheory, FactorizationMultipliesBack) {
  auto g = std::mt19937_64(13);
  for (int i = 0; i < 300; ++i) {
    const u64 n = 1 + (g() >> (g() % 40));
    const Factorization f = nt::factor(n);
    EXPECT_EQ(nt::expand(f), n);
    for (const auto& [q, e] : f) EXPECT_TRUE(nt::is_prime(q));
  }
  const Factorization semi = nt::factor(4294967291ULL * 4294967279ULL);
  ASSERT_EQ(semi.size(), 2u);
  EXPECT_EQ(semi[0].first, 4294967279ULL);
}

TEST(NumTheory, BigFactorization) {
  const mpz_class n = mpz_class("1000000007") * mpz_class("998244353") * 1024 * 27;
  const BigFactorization f = nt::factor(n);
  mpz_class back = 1;
  for (const auto& [q, e] : f) {
    for (unsigned i = 0; i < e; ++i) back *= q;
  }
  EXPECT_EQ(back, n);
  EXPECT_EQ(f.size(), 4u);
  EXPECT_EQ(nt::factor(mpz_class(-496)).front(), std::make_pair(mpz_class(2), 4u));
}

TEST(NumTheory, DivisorsAndSquarefree) {
  const auto d = nt::divisors(nt::factor(360));
  EXPECT_EQ(d.size(), 24u);
  EXPECT_EQ(d.front(), 1u);
  EXPECT_EQ(d.back(), 360u);
  EXPECT_TRUE(nt::squarefree(nt::factor(30)));
  EXPECT_FALSE(nt::squarefree(nt::factor(12)));
}

TEST(NumTheory, SquareRootsModPrime) {
  auto g = std::mt19937_64(14);
  for (u64 p : nt::primes_upto(3000)) {
    if (p == 2) continue;
    for (int i = 0; i < 5; ++i) {
      const u64 a = g() % p;
      auto r = nt::sqrt_mod(a, p);
      if (nt::legendre(a, p) >= 0) {
        ASSERT_TRUE(r);
        EXPECT_EQ(nt::mulmod(*r, *r, p), a);
      } else {
        EXPECT_FALSE(r);
      }
    }
  }
}

TEST(NumTheory, IntegerSquareRoot) {
  for (u64 n : {0ULL, 1ULL, 15ULL, 16ULL, 17ULL, 0xffffffffffffffffULL}) {
    const u64 r = nt::isqrt(n);
    EXPECT_LE(static_cast<u128>(r) * r, n);
    EXPECT_GT(static_cast<u128>(r + 1) * (r + 1), n);
  }
  EXPECT_EQ(nt::isqrt(mpz_class("1000000000000000000000000")), mpz_class("1000000000000"));
}
