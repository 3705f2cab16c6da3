#pragma once

// Word-size and GMP integer helpers: modular arithmetic, primality,
// factorization (trial division + Pollard-Brent rho), sieving, square roots.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pseudolin {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
using Factorization = std::vector<std::pair<u64, unsigned>>;
using BigFactorization = std::vector<std::pair<mpz_class, unsigned>>;

namespace nt {

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

inline u64 addmod(u64 a, u64 b, u64 m) {
  u64 s = a + b;
  if (s >= m || s < a) s -= m;
  return s;
}

inline u64 submod(u64 a, u64 b, u64 m) { return a >= b ? a - b : a + (m - b); }

inline u64 negmod(u64 a, u64 m) { return a == 0 ? 0 : m - a; }

inline u64 powmod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
inline std::optional<u64> invmod(u64 a, u64 m) {
  std::int64_t t = 0, new_t = 1;
  std::int64_t r = static_cast<std::int64_t>(m), new_r = static_cast<std::int64_t>(a % m);
  while (new_r != 0) {
    std::int64_t q = r / new_r;
    t = std::exchange(new_t, t - q * new_t);
    r = std::exchange(new_r, r - q * new_r);
  }
  if (r != 1) return std::nullopt;
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<u64>(t);
}

/// Residue of an arbitrary integer modulo m in [0, m).
inline u64 mod(const mpz_class& a, u64 m) { return mpz_fdiv_ui(a.get_mpz_t(), m); }

inline u64 isqrt(u64 n) {
  u64 r = static_cast<u64>(__builtin_sqrtl(static_cast<long double>(n)));
  if (r > 0xffffffffULL) r = 0xffffffffULL;
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

inline u64 gcd(u64 a, u64 b) { return std::gcd(a, b); }

inline u64 lcm(u64 a, u64 b) { return a / std::gcd(a, b) * b; }

inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic for all 64-bit n.
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return addmod(mulmod(v, v, n), c, n); };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

template <typename Int>
std::vector<std::pair<Int, unsigned>> collapse(std::vector<Int> primes) {
  std::sort(primes.begin(), primes.end());
  std::vector<std::pair<Int, unsigned>> out;
  for (const auto& q : primes) {
    if (!out.empty() && out.back().first == q) {
      ++out.back().second;
    } else {
      out.emplace_back(q, 1u);
    }
  }
  return out;
}

}  // namespace detail

/// Factorization of n >= 1: trial division to 10^4, then Pollard-Brent rho.
inline Factorization factor(u64 n) {
  if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
  std::vector<u64> primes;
  for (u64 q = 2; q < 10000 && q * q <= n; q += (q == 2 ? 1 : 2)) {
    while (n % q == 0) {
      primes.push_back(q);
      n /= q;
    }
  }
  detail::factor_into(n, primes);
  return detail::collapse(std::move(primes));
}

inline mpz_class pollard_brent(const mpz_class& n) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  for (unsigned long c = 1;; ++c) {
    mpz_class y = 2, x, ys, q = 1, g = 1, diff;
    unsigned long r = 1;
    const unsigned long m = 64;
    auto f = [&](mpz_class& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    do {
      x = y;
      for (unsigned long i = 0; i < r; ++i) f(y);
      unsigned long k = 0;
      do {
        ys = y;
        for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
          f(y);
          diff = abs(x - y);
          q = q * diff % n;
        }
        g = gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r <<= 1;
    } while (g == 1);
    if (g == n) {
      do {
        f(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

/// Factorization of |n| >= 1 for arbitrary-precision n (used for discriminants).
inline BigFactorization factor(const mpz_class& value) {
  mpz_class n = abs(value);
  if (n == 0) throw std::invalid_argument("factor: zero has no factorization");
  std::vector<mpz_class> primes;
  for (unsigned long q = 2; q < 100000; q += (q == 2 ? 1 : 2)) {
    if (mpz_cmp_ui(n.get_mpz_t(), q * q) < 0) break;
    while (mpz_divisible_ui_p(n.get_mpz_t(), q)) {
      primes.emplace_back(q);
      n /= q;
    }
  }
  std::vector<mpz_class> stack;
  if (n > 1) stack.push_back(n);
  while (!stack.empty()) {
    mpz_class m = stack.back();
    stack.pop_back();
    if (mpz_probab_prime_p(m.get_mpz_t(), 40) > 0) {
      primes.push_back(m);
      continue;
    }
    mpz_class d = pollard_brent(m);
    stack.push_back(d);
    stack.push_back(m / d);
  }
  return detail::collapse(std::move(primes));
}

inline bool squarefree(const Factorization& f) {
  return std::all_of(f.begin(), f.end(), [](const auto& pe) { return pe.second == 1; });
}

inline u64 expand(const Factorization& f) {
  u64 n = 1;
  for (const auto& [q, e] : f) {
    for (unsigned i = 0; i < e; ++i) n *= q;
  }
  return n;
}

/// All divisors in increasing order.
inline std::vector<u64> divisors(const Factorization& f) {
  std::vector<u64> out{1};
  for (const auto& [q, e] : f) {
    const std::size_t base = out.size();
    u64 qk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      qk *= q;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * qk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Primes <= n by the sieve of Eratosthenes.
inline std::vector<u64> primes_upto(u64 n) {
  std::vector<u64> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (u64 i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (u64 j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

/// Legendre symbol (a/p) for odd prime p, as -1, 0 or 1.
inline int legendre(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

/// Some square root of a modulo an odd prime p (Tonelli-Shanks).
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (legendre(a, p) != 1) return std::nullopt;
  if (p % 4 == 3) return powmod(a, (p + 1) / 4, p);
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (legendre(z, p) != -1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), r = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + 1 < m - i; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    r = mulmod(r, b, p);
  }
  return r;
}

/// Floor of the square root of an arbitrary non-negative integer.
inline mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

}  // namespace nt
}  // namespace pseudolin
