#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <mutex>
#include <string>
#include <vector>

#include "primeset/error.hpp"

namespace primeset {

inline constexpr std::uint64_t kDefaultSieveBound = std::uint64_t{1} << 28;

/// Hard sieve bound, overridable through PRIMESET_SIEVE_LIMIT.
inline std::uint64_t sieve_bound_from_env() {
  if (const char* env = std::getenv("PRIMESET_SIEVE_LIMIT")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v >= 16) return v;
  }
  return kDefaultSieveBound;
}

namespace detail {

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b,
                             std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

}  // namespace detail

/// Deterministic Miller-Rabin; the fixed base set is exact for all 64-bit n.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  static constexpr std::uint64_t kBases[] = {2,  3,  5,  7,  11, 13,
                                             17, 19, 23, 29, 31, 37};
  for (std::uint64_t p : kBases) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : kBases) {
    std::uint64_t x = detail::pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = detail::mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

/// Incremental segmented sieve of Eratosthenes. The sieved range doubles
/// whenever more primes are requested, up to a hard bound.
class PrimeSieve {
 public:
  static constexpr std::uint64_t kSegmentSize = std::uint64_t{1} << 16;

  explicit PrimeSieve(std::uint64_t hard_bound = sieve_bound_from_env())
      : hard_bound_(std::max<std::uint64_t>(hard_bound, 16)) {
    // Seed with a plain sieve so every later segment has its base primes.
    constexpr std::uint64_t kSeed = 64;
    std::vector<bool> composite(kSeed, false);
    for (std::uint64_t i = 2; i < kSeed; ++i) {
      if (composite[i]) continue;
      primes_.push_back(i);
      for (std::uint64_t j = i * i; j < kSeed; j += i) composite[j] = true;
    }
    limit_ = kSeed;
  }

  /// The (i+1)-th prime: nth(0) == 2.
  std::uint64_t nth(std::size_t i) {
    while (primes_.size() <= i) grow();
    return primes_[i];
  }

  /// Ensures at least count primes are available.
  void reserve_primes(std::size_t count) {
    if (count > 0) nth(count - 1);
  }

  /// Every integer below limit() has been sieved.
  std::uint64_t limit() const noexcept { return limit_; }
  std::uint64_t hard_bound() const noexcept { return hard_bound_; }
  const std::vector<std::uint64_t>& primes() const noexcept { return primes_; }

 private:
  void grow() {
    if (limit_ >= hard_bound_) {
      throw Error(ErrorKind::resource_limit,
                  "prime sieve bound " + std::to_string(hard_bound_) +
                      " exhausted after " + std::to_string(primes_.size()) +
                      " primes");
    }
    extend_to(std::min(limit_ * 2, hard_bound_));
  }

  void extend_to(std::uint64_t new_limit) {
    std::vector<char> segment;
    for (std::uint64_t lo = limit_; lo < new_limit; lo += kSegmentSize) {
      const std::uint64_t hi = std::min(lo + kSegmentSize, new_limit);
      segment.assign(hi - lo, 0);
      for (std::uint64_t p : primes_) {
        if (p * p >= hi) break;
        std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
        for (std::uint64_t j = start; j < hi; j += p) segment[j - lo] = 1;
      }
      for (std::uint64_t n = lo; n < hi; ++n) {
        if (!segment[n - lo]) primes_.push_back(n);
      }
    }
    limit_ = new_limit;
  }

  std::vector<std::uint64_t> primes_;
  std::uint64_t limit_ = 0;
  std::uint64_t hard_bound_;
};

/// The (i+1)-th prime from a process-wide sieve.
inline std::uint64_t nth_prime(std::size_t i) {
  static std::mutex mutex;
  static PrimeSieve sieve;
  std::lock_guard lock(mutex);
  return sieve.nth(i);
}

}  // namespace primeset
