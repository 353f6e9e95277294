#pragma once

// Arithmetic in GF(p) for a runtime prime p < 2^31.
//
// The modulus is process-wide state (in the style of NTL's zz_p::init):
// install it with PrimeScope before creating any element, and keep it fixed
// while elements or matrices built under it are alive.

#include <cstdint>
#include <limits>
#include <ostream>
#include <random>

#include <Eigen/Core>

#include "dynrank/error.hpp"

namespace dynrank::gf {

inline constexpr std::uint32_t kDefaultPrime = 2147483647u;  // 2^31 - 1

namespace detail {

struct Modulus {
  std::uint64_t p = kDefaultPrime;
  // floor(2^64 / p), for Barrett reduction of products < p^2.
  std::uint64_t barrett = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(1) << 64) / kDefaultPrime);
};

inline Modulus g_modulus{};

inline std::uint32_t reduce_product(std::uint64_t x) noexcept {
  const auto q = static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(x) * g_modulus.barrett) >> 64);
  std::uint64_t r = x - q * g_modulus.p;
  if (r >= g_modulus.p) r -= g_modulus.p;
  return static_cast<std::uint32_t>(r);
}

}  // namespace detail

inline std::uint32_t prime() noexcept {
  return static_cast<std::uint32_t>(detail::g_modulus.p);
}

bool is_prime(std::uint64_t n) noexcept;

/// Sets the process-wide modulus. Throws Error(bad_prime) unless p is a prime
/// with 5 <= p < 2^31.
void set_prime(std::uint64_t p);

/// Installs a prime for the lifetime of the scope and restores the previous
/// one afterwards.
class PrimeScope {
 public:
  explicit PrimeScope(std::uint64_t p) : saved_(prime()) { set_prime(p); }
  ~PrimeScope() { set_prime(saved_); }
  PrimeScope(const PrimeScope&) = delete;
  PrimeScope& operator=(const PrimeScope&) = delete;

 private:
  std::uint32_t saved_;
};

/// Element of GF(p); the stored residue is always in [0, p).
class Fp {
 public:
  constexpr Fp() noexcept = default;

  /// Reduces an arbitrary signed integer mod p.
  explicit Fp(std::int64_t x) noexcept {
    const auto p = static_cast<std::int64_t>(detail::g_modulus.p);
    std::int64_t r = x % p;
    if (r < 0) r += p;
    v_ = static_cast<std::uint32_t>(r);
  }
  explicit Fp(int x) noexcept : Fp(static_cast<std::int64_t>(x)) {}
  explicit Fp(long long x) noexcept : Fp(static_cast<std::int64_t>(x)) {}
  explicit Fp(std::uint64_t x) noexcept
      : v_(static_cast<std::uint32_t>(x % detail::g_modulus.p)) {}

  /// Trusts that raw < p.
  static constexpr Fp from_raw(std::uint32_t raw) noexcept {
    Fp f;
    f.v_ = raw;
    return f;
  }

  constexpr std::uint32_t value() const noexcept { return v_; }
  constexpr bool is_zero() const noexcept { return v_ == 0; }

  friend Fp operator+(Fp a, Fp b) noexcept {
    std::uint32_t s = a.v_ + b.v_;  // < 2^32 since p < 2^31
    if (s >= prime()) s -= prime();
    return from_raw(s);
  }
  friend Fp operator-(Fp a, Fp b) noexcept {
    return from_raw(a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + prime() - b.v_);
  }
  friend Fp operator-(Fp a) noexcept {
    return from_raw(a.v_ == 0 ? 0 : prime() - a.v_);
  }
  friend Fp operator*(Fp a, Fp b) noexcept {
    return from_raw(detail::reduce_product(static_cast<std::uint64_t>(a.v_) * b.v_));
  }
  friend Fp operator/(Fp a, Fp b);

  Fp& operator+=(Fp b) noexcept { return *this = *this + b; }
  Fp& operator-=(Fp b) noexcept { return *this = *this - b; }
  Fp& operator*=(Fp b) noexcept { return *this = *this * b; }
  Fp& operator/=(Fp b) { return *this = *this / b; }

  friend constexpr bool operator==(Fp a, Fp b) noexcept { return a.v_ == b.v_; }
  friend constexpr bool operator!=(Fp a, Fp b) noexcept { return a.v_ != b.v_; }

  friend std::ostream& operator<<(std::ostream& os, Fp a) { return os << a.v_; }

 private:
  std::uint32_t v_ = 0;
};

inline Fp zero() noexcept { return Fp::from_raw(0); }
inline Fp one() noexcept { return Fp::from_raw(1); }

inline Fp add(Fp a, Fp b) noexcept { return a + b; }
inline Fp mul(Fp a, Fp b) noexcept { return a * b; }

/// Multiplicative inverse by the extended Euclidean algorithm.
/// Throws Error(zero_inverse) for a = 0.
Fp inv(Fp a);

inline Fp operator/(Fp a, Fp b) { return a * inv(b); }

Fp pow(Fp base, std::uint64_t exp) noexcept;

/// Counters for instrumented kernels. Hot loops add their multiplication
/// counts in bulk rather than per operation.
struct OpCounters {
  std::uint64_t mul = 0;
};

inline thread_local OpCounters t_counters{};

inline OpCounters& counters() noexcept { return t_counters; }
inline void count_mul(std::uint64_t n) noexcept { t_counters.mul += n; }

/// Deterministic generator: std::mt19937_64 (whose output sequence is fixed by
/// the standard) with explicit rejection sampling, so draws are identical on
/// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, bound); bound > 0.
  std::uint64_t uniform(std::uint64_t bound);

  /// Independent child generator; seed = mix(parent seed, index).
  Rng split(std::uint64_t index) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Uniform over [0, p).
Fp sample(Rng& rng);
/// Uniform over [1, p).
Fp sample_nonzero(Rng& rng);

}  // namespace dynrank::gf

namespace Eigen {

template <>
struct NumTraits<dynrank::gf::Fp> : GenericNumTraits<dynrank::gf::Fp> {
  using Real = dynrank::gf::Fp;
  using NonInteger = dynrank::gf::Fp;
  using Literal = dynrank::gf::Fp;
  using Nested = dynrank::gf::Fp;

  enum {
    IsComplex = 0,
    IsInteger = 1,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 1,
    AddCost = 2,
    MulCost = 4,
  };

  static inline int digits10() { return 10; }
  static inline dynrank::gf::Fp epsilon() { return dynrank::gf::zero(); }
  static inline dynrank::gf::Fp dummy_precision() { return dynrank::gf::zero(); }
};

}  // namespace Eigen
