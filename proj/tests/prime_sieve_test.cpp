#include <gtest/gtest.h>

#include "oracles.hpp"
#include "primeset/prime_sieve.hpp"

using namespace primeset;

TEST(PrimeSieve, NthPrimeExamples) {
  EXPECT_EQ(nth_prime(0), 2u);
  EXPECT_EQ(nth_prime(4), 11u);
  EXPECT_EQ(nth_prime(999), 7919u);
}

TEST(PrimeSieve, FirstTenThousandMatchPlainSieve) {
  const auto expected = oracle::first_primes(10'000);
  PrimeSieve sieve;
  sieve.reserve_primes(10'000);
  for (std::size_t i = 0; i < expected.size(); ++i) {
    ASSERT_EQ(sieve.nth(i), expected[i]) << "index " << i;
  }
  EXPECT_EQ(expected.back(), 104729u);
}

TEST(PrimeSieve, StrictlyIncreasingAndPrime) {
  PrimeSieve sieve;
  for (std::size_t i = 1; i < 20'000; ++i) {
    ASSERT_LT(sieve.nth(i - 1), sieve.nth(i));
    ASSERT_TRUE(is_prime(sieve.nth(i)));
  }
}

TEST(PrimeSieve, GrowthAcrossSegmentsAgreesWithOracle) {
  // Enough primes to force several doublings past one 64 KiB segment.
  const auto expected = oracle::primes_below(1'000'000);
  PrimeSieve sieve;
  EXPECT_EQ(sieve.nth(expected.size() - 1), expected.back());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    ASSERT_EQ(sieve.primes()[i], expected[i]);
  }
}

TEST(PrimeSieve, HardBoundIsAResourceError) {
  PrimeSieve sieve(1000);
  EXPECT_EQ(sieve.nth(167), 997u);  // 168 primes below 1000
  try {
    sieve.nth(168);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::resource_limit);
  }
}

TEST(PrimeSieve, MillerRabinAgainstSieve) {
  const auto primes = oracle::primes_below(100'000);
  std::vector<bool> prime(100'000, false);
  for (auto p : primes) prime[p] = true;
  for (std::uint64_t n = 0; n < prime.size(); ++n) {
    ASSERT_EQ(is_prime(n), prime[n]) << n;
  }
  EXPECT_TRUE(is_prime(18446744073709551557ull));  // largest 64-bit prime
  EXPECT_FALSE(is_prime(3215031751ull));           // strong pseudoprime to 2,3,5,7
}
