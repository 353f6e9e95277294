#include "dynrank/gf.hpp"

#include <string>

namespace dynrank {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::zero_inverse: return "ZeroInverse";
    case Errc::bad_prime: return "BadPrime";
    case Errc::not_square: return "NotSquare";
    case Errc::index_out_of_range: return "IndexOutOfRange";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::k_too_small: return "KTooSmall";
    case Errc::already_active: return "AlreadyActive";
    case Errc::already_inactive: return "AlreadyInactive";
    case Errc::singular_init: return "SingularInit";
    case Errc::empty_log: return "EmptyLog";
    case Errc::bad_label: return "BadLabel";
    case Errc::self_loop: return "SelfLoop";
    case Errc::negative_weight: return "NegativeWeight";
    case Errc::duplicate_insert: return "DuplicateInsert";
    case Errc::missing_delete: return "MissingDelete";
    case Errc::not_bipartite: return "NotBipartite";
    case Errc::parse_error: return "ParseError";
    case Errc::dimension_error: return "DimensionError";
    case Errc::mode_mismatch: return "ModeMismatch";
    case Errc::verify_failure: return "VerifyFailure";
    case Errc::probabilistic_failure: return "ProbabilisticFailure";
  }
  return "Unknown";
}

}  // namespace dynrank

namespace dynrank::gf {

bool is_prime(std::uint64_t n) noexcept {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

void set_prime(std::uint64_t p) {
  if (p < 5 || p >= (std::uint64_t{1} << 31) || !is_prime(p)) {
    throw Error(Errc::bad_prime, "modulus must be a prime in [5, 2^31), got " + std::to_string(p));
  }
  detail::g_modulus.p = p;
  detail::g_modulus.barrett =
      static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << 64) / p);
}

Fp inv(Fp a) {
  if (a.is_zero()) throw Error(Errc::zero_inverse, "inverse of zero");
  std::int64_t r0 = prime(), r1 = a.value();
  std::int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::int64_t t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  return Fp(s0);
}

Fp pow(Fp base, std::uint64_t exp) noexcept {
  Fp result = one();
  while (exp > 0) {
    if (exp & 1u) result *= base;
    base *= base;
    exp >>= 1;
  }
  return result;
}

std::uint64_t Rng::uniform(std::uint64_t bound) {
  // Rejection from the largest multiple of bound below 2^64.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x = engine_();
  while (x >= limit) x = engine_();
  return x % bound;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  // splitmix64 finalizer over (seed, index)
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng Rng::split(std::uint64_t index) const { return Rng(mix_seed(seed_, index)); }

Fp sample(Rng& rng) { return Fp::from_raw(static_cast<std::uint32_t>(rng.uniform(prime()))); }

Fp sample_nonzero(Rng& rng) {
  return Fp::from_raw(static_cast<std::uint32_t>(1 + rng.uniform(prime() - 1)));
}

}  // namespace dynrank::gf
