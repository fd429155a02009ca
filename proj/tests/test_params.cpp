#include <algorithm>
#include <set>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "polyntt/params.hpp"

namespace {

using namespace polyntt;

TEST(IsPrime, SmallAndKnown) {
  const std::set<u64> small_primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  for (u64 i = 0; i < 50; ++i) EXPECT_EQ(is_prime(i), small_primes.count(i) == 1) << i;
  EXPECT_TRUE(is_prime(994705409));
  EXPECT_TRUE(is_prime((u64{1} << 62) - 57));
  EXPECT_FALSE(is_prime(3215031751ULL));         // strong pseudoprime to bases 2, 3, 5, 7
  EXPECT_FALSE(is_prime(3825123056546413051ULL));  // strong pseudoprime to bases up to 23
  EXPECT_FALSE(is_prime(u64{994705409} * 3));
}

TEST(BitReverse, Examples) {
  EXPECT_EQ(bit_reverse(0, 5), 0u);
  EXPECT_EQ(bit_reverse(1, 3), 4u);
  EXPECT_EQ(bit_reverse(6, 3), 3u);
  EXPECT_EQ(bit_reverse(0, 0), 0u);
  EXPECT_THROW(bit_reverse(8, 3), std::out_of_range);
}

TEST(BitReverse, Involution) {
  for (int bits = 0; bits <= 12; ++bits) {
    for (u64 i = 0; i < (u64{1} << bits); ++i) {
      ASSERT_EQ(bit_reverse(bit_reverse(i, bits), bits), i);
    }
  }
}

TEST(GeneratePrime, TinyCaseHasOneCandidate) {
  // 4-bit primes are {11, 13}; only 13 is 1 mod 4.
  for (u64 seed : {0, 1, 2, 99, 12345}) EXPECT_EQ(generate_prime(4, 2, seed), 13u);
}

TEST(GeneratePrime, CongruenceAndSize) {
  for (u64 seed : {0, 1, 7}) {
    const u64 q30 = generate_prime(30, u64{1} << 15, seed);
    EXPECT_EQ(bit_length(q30), 30);
    EXPECT_EQ(q30 % (u64{1} << 16), 1u);
    EXPECT_TRUE(is_prime(q30));

    const u64 q62 = generate_prime(62, u64{1} << 16, seed);
    EXPECT_EQ(q62 % (u64{1} << 17), 1u);
    EXPECT_GE(q62, u64{1} << 61);
    EXPECT_LT(q62, u64{1} << 62);
    EXPECT_TRUE(is_prime(q62));
  }
}

TEST(GeneratePrime, Reproducible) {
  EXPECT_EQ(generate_prime(30, 1024, 42), generate_prime(30, 1024, 42));
  std::set<u64> distinct;
  for (u64 seed = 0; seed < 8; ++seed) distinct.insert(generate_prime(30, 1024, seed));
  EXPECT_GT(distinct.size(), 4u);
}

TEST(GeneratePrime, RejectsBadArguments) {
  EXPECT_THROW(generate_prime(3, 2, 0), std::invalid_argument);
  EXPECT_THROW(generate_prime(63, 2, 0), std::invalid_argument);
  EXPECT_THROW(generate_prime(30, 3, 0), std::invalid_argument);
  EXPECT_THROW(generate_prime(10, 1024, 0), std::invalid_argument);
}

TEST(FindPrimitiveRoot, ExhaustiveScans) {
  for (u64 seed = 0; seed < 20; ++seed) {
    const u64 psi13 = find_primitive_root(13, 4, seed);
    EXPECT_TRUE(psi13 == 5 || psi13 == 8) << psi13;
    const std::set<u64> order16 = {3, 5, 6, 7, 10, 11, 12, 14};
    EXPECT_EQ(order16.count(find_primitive_root(17, 16, seed)), 1u);
  }
  const u64 q = 994705409;
  const u64 psi = find_primitive_root(q, 1 << 16, 3);
  EXPECT_EQ(pow_mod(psi, 1 << 15, q), q - 1);
  EXPECT_THROW(find_primitive_root(13, 8, 0), std::invalid_argument);
}

TEST(BuildPlan, SmallExample) {
  // 5 has order 4 mod 13, so it only serves n = 2.
  const NttPlan plan = build_plan_with_root(2, 13, 5);
  EXPECT_EQ(plan.omega, 12u);
  EXPECT_EQ(plan.tw_fwd, (std::vector<u64>{1, 5}));
  EXPECT_EQ(plan.tw_inv, (std::vector<u64>{1, 8}));
  EXPECT_EQ(plan.psi_inv, 8u);
  EXPECT_EQ(plan.n_inv, 7u);
  EXPECT_EQ(plan.twiddle_words(), 4u);

  // At n = 4 the table formula still gives [5^0, 5^2, 5^1, 5^3], but 8 does not divide 12.
  std::vector<u64> table;
  for (u64 i = 0; i < 4; ++i) table.push_back(oracle::power(5, oracle::reverse_bits(i, 2), 13));
  EXPECT_EQ(table, (std::vector<u64>{1, 12, 5, 8}));
  EXPECT_THROW(build_plan_with_root(4, 13, 5), InvalidPlan);
}

TEST(BuildPlan, InvariantsAcrossSizes) {
  for (int bits : {28, 30, 62}) {
    for (u64 n = 2; n <= 4096; n *= 4) {
      const NttPlan plan = generate_plan(n, bits, 1);
      const u64 q = plan.q();
      EXPECT_EQ(pow_mod(plan.psi, 2 * n, q), 1u);
      EXPECT_EQ(pow_mod(plan.psi, n, q), q - 1);
      EXPECT_EQ(plan.tw_fwd[0], 1u);
      EXPECT_EQ(plan.tw_inv[0], 1u);
      for (u64 i = 0; i < n; ++i) {
        ASSERT_EQ(oracle::mul(plan.tw_fwd[i], plan.tw_inv[i], q), 1u);
        ASSERT_EQ(plan.tw_fwd[i], oracle::power(plan.psi, oracle::reverse_bits(i, plan.log_n), q));
      }
    }
  }
}

TEST(BuildPlan, AcceptsPaperModulus) {
  const NttPlan plan = build_plan(u64{1} << 15, 994705409);
  EXPECT_NO_THROW(validate(plan));
}

TEST(BuildPlan, RejectsBadParameters) {
  EXPECT_THROW(build_plan(4, 15), InvalidPlan);       // composite
  EXPECT_THROW(build_plan(8, 13), InvalidPlan);       // 16 does not divide 12
  EXPECT_THROW(build_plan(6, 13), InvalidPlan);       // not a power of two
  EXPECT_THROW(build_plan_with_root(4, 13, 12), InvalidPlan);  // order 2, not 8
  EXPECT_THROW(build_plan(4, (u64{1} << 62) - 57 + 0, Reduction::dhem), InvalidPlan);
}

TEST(Validate, DetectsCorruptedTwiddle) {
  const NttPlan good = generate_plan(64, 30, 0);
  for (u64 idx : {0ull, 1ull, 17ull, 63ull}) {
    NttPlan bad = good;
    bad.tw_fwd[idx] = (bad.tw_fwd[idx] + 1) % bad.q();
    try {
      validate(bad);
      FAIL() << "corruption at " << idx << " went unnoticed";
    } catch (const InvalidPlan& e) {
      EXPECT_NE(std::string(e.what()).find("twiddle"), std::string::npos) << e.what();
    }
  }
  NttPlan bad_inv = good;
  bad_inv.n_inv ^= 1;
  EXPECT_THROW(validate(bad_inv), InvalidPlan);
}

TEST(PlanText, RoundTrip) {
  const NttPlan plan = generate_plan(256, 30, 5, Reduction::classical);
  const std::string line = to_text(plan);
  const NttPlan back = plan_from_text(line);
  EXPECT_EQ(back.q(), plan.q());
  EXPECT_EQ(back.psi, plan.psi);
  EXPECT_EQ(back.reduction, Reduction::classical);
  EXPECT_EQ(back.tw_fwd, plan.tw_fwd);
  EXPECT_THROW(plan_from_text("16 97 3"), InvalidPlan);
  EXPECT_THROW(plan_from_text("4 13 5 proposed extra"), InvalidPlan);
  EXPECT_THROW(plan_from_text("4 13 5 montgomery"), InvalidPlan);
}

}  // namespace
