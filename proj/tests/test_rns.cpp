#include <algorithm>
#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "polyntt/polymul.hpp"
#include "polyntt/rns.hpp"

namespace {

using namespace polyntt;

TEST(WorkloadSize, Examples) {
  EXPECT_EQ(workload_size(1240, 30), 42);
  EXPECT_EQ(workload_size(1240, 28), 45);
  EXPECT_EQ(workload_size(1, 1), 1);
  EXPECT_EQ(workload_size(60, 30), 2);
  EXPECT_NEAR(workload_increase_percent(1240, 30, 28), 7.142857, 1e-5);
  EXPECT_THROW(workload_size(0, 30), std::invalid_argument);
  EXPECT_THROW(workload_size(10, 0), std::invalid_argument);
}

TEST(WorkloadSize, NonIncreasingInPrimeBits) {
  for (int bits_q : {1, 59, 1240, 4096}) {
    for (int m = 1; m < 62; ++m) {
      EXPECT_GE(workload_size(bits_q, m), workload_size(bits_q, m + 1));
    }
  }
}

TEST(RnsBasis, ConstructionInvariants) {
  const RnsBasis basis = RnsBasis::generate(64, 4, 30, 0);
  EXPECT_EQ(basis.size(), 4u);
  BigInt product = 1;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const u64 q = basis.prime(i);
    EXPECT_EQ(q % 128, 1u);
    product *= q;
    EXPECT_EQ(static_cast<u64>((basis.big_q() / q) % q) * 1, static_cast<u64>(basis.cofactor(i) % q));
    EXPECT_EQ(oracle::mul(static_cast<u64>(basis.cofactor(i) % q), basis.cofactor_inverse(i), q), 1u);
    for (std::size_t j = 0; j < i; ++j) EXPECT_NE(basis.prime(j), q);
  }
  EXPECT_EQ(product, basis.big_q());
  EXPECT_GT(msb(basis.big_q()) + 1, 4u * 29);
  const std::string text = to_text(basis);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 4);
}

TEST(RnsBasis, RejectsDuplicatesAndMixedSizes) {
  EXPECT_THROW(RnsBasis::from_primes({13, 13}, 2), InvalidPlan);
  std::vector<NttPlan> mixed = {generate_plan(8, 30, 0), generate_plan(16, 30, 1)};
  EXPECT_THROW(RnsBasis(std::move(mixed)), InvalidPlan);
  EXPECT_THROW(RnsBasis(std::vector<NttPlan>{}), InvalidPlan);
}

TEST(Decompose, Examples) {
  const RnsBasis basis = RnsBasis::from_primes({13, 17}, 2);
  EXPECT_EQ(basis.big_q(), 221);
  const std::vector<BigInt> zero(2, 0);
  const auto r0 = decompose(zero, basis);
  EXPECT_EQ(r0, (std::vector<std::vector<u64>>{{0, 0}, {0, 0}}));
  const std::vector<BigInt> thirteen = {13, 0};
  const auto r13 = decompose(thirteen, basis);
  EXPECT_EQ(r13[0][0], 0u);
  EXPECT_EQ(r13[1][0], 13u);
  const std::vector<BigInt> too_big = {221, 0};
  EXPECT_THROW(decompose(too_big, basis), std::domain_error);
}

TEST(Reconstruct, Examples) {
  const RnsBasis basis = RnsBasis::from_primes({13, 17}, 2);
  EXPECT_EQ(reconstruct({{0, 0}, {0, 0}}, basis), (std::vector<BigInt>{0, 0}));
  EXPECT_EQ(reconstruct({{5, 0}, {5, 0}}, basis), (std::vector<BigInt>{5, 0}));
  EXPECT_THROW(reconstruct({{5, 0}}, basis), std::invalid_argument);
  EXPECT_THROW(reconstruct({{5, 0}, {5}}, basis), std::invalid_argument);
}

TEST(Reconstruct, RoundTrip) {
  std::mt19937_64 rng(1);
  for (std::size_t k : {1, 2, 5}) {
    const RnsBasis basis = RnsBasis::generate(32, k, 62, 3);
    const auto v = oracle::random_big_poly(rng, 32, basis.big_q());
    EXPECT_EQ(reconstruct(decompose(v, basis), basis), v);
  }
}

TEST(PolymulRns, MatchesBigIntegerOracle) {
  std::mt19937_64 rng(2);
  for (u64 n : {8, 64}) {
    for (std::size_t k : {2, 4}) {
      const RnsBasis basis = RnsBasis::generate(n, k, 30, 7);
      for (int rep = 0; rep < 5; ++rep) {
        const auto a = oracle::random_big_poly(rng, n, basis.big_q());
        const auto b = oracle::random_big_poly(rng, n, basis.big_q());
        ASSERT_EQ(polymul_rns(a, b, basis), oracle::negacyclic_big(a, b, basis.big_q()));
      }
    }
  }
}

TEST(PolymulRns, UnitAndSinglePrime) {
  std::mt19937_64 rng(3);
  const RnsBasis basis = RnsBasis::generate(16, 3, 30, 0);
  std::vector<BigInt> e0(16, 0);
  e0[0] = 1;
  const auto b = oracle::random_big_poly(rng, 16, basis.big_q());
  EXPECT_EQ(polymul_rns(e0, b, basis), b);

  const NttPlan plan = generate_plan(16, 30, 0);
  const RnsBasis single(std::vector<NttPlan>{plan});
  const auto a = oracle::random_poly(rng, 16, plan.q()), c = oracle::random_poly(rng, 16, plan.q());
  const std::vector<BigInt> ba(a.begin(), a.end()), bc(c.begin(), c.end());
  const auto got = polymul_rns(ba, bc, single);
  const auto want = polymul_fused(a, c, plan);
  for (int i = 0; i < 16; ++i) EXPECT_EQ(got[i], want[i]);
}

TEST(PolymulRns, IndependentOfPrimeOrderAndWorkers) {
  std::mt19937_64 rng(4);
  const RnsBasis basis = RnsBasis::generate(32, 4, 30, 11);
  auto plans = basis.plans();
  std::reverse(plans.begin(), plans.end());
  const RnsBasis reversed(std::move(plans));
  const auto a = oracle::random_big_poly(rng, 32, basis.big_q());
  const auto b = oracle::random_big_poly(rng, 32, basis.big_q());
  const auto want = polymul_rns(a, b, basis);
  EXPECT_EQ(polymul_rns(a, b, reversed), want);
  OpCounter c1, c4;
  EXPECT_EQ(polymul_rns(a, b, basis, &c1, 1), want);
  EXPECT_EQ(polymul_rns(a, b, basis, &c4, 4), want);
  EXPECT_EQ(c1, c4);
}

TEST(PolymulRns, TwoPointBasisFallsBackToUnfused) {
  const RnsBasis basis = RnsBasis::from_primes({13, 17}, 2);
  const std::vector<BigInt> a = {1, 1}, b = {1, 1};
  EXPECT_EQ(polymul_rns(a, b, basis), (std::vector<BigInt>{0, 2}));
}

}  // namespace
