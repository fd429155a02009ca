#include <random>

#include "gtest/gtest.h"
#include "oracles.hpp"
#include "polyntt/ntt.hpp"

namespace {

using namespace polyntt;
using oracle::random_poly;

std::vector<u64> unit(u64 n, u64 pos) {
  std::vector<u64> e(n, 0);
  e[pos] = 1;
  return e;
}

TEST(NttCt, SmallExample) {
  // 2 has order 8 mod 17; values frozen from direct summation.
  const NttPlan plan = build_plan_with_root(4, 17, 2);
  std::vector<u64> a = {1, 2, 3, 4};
  EXPECT_EQ(oracle::negacyclic_dft_bitrev(a, 17, 2), (std::vector<u64>{15, 11, 13, 16}));
  ntt_ct(a, plan);
  EXPECT_EQ(a, (std::vector<u64>{15, 11, 13, 16}));
  intt_gs_scaled(a, plan);
  EXPECT_EQ(a, (std::vector<u64>{1, 2, 3, 4}));
}

TEST(NttCt, OracleOnRootOfOrderFour) {
  // psi = 5 mod 13 has psi^4 = 1, not -1, so no plan exists; only the summation oracle applies.
  EXPECT_EQ(oracle::negacyclic_dft_bitrev({1, 2, 3, 4}, 13, 5), (std::vector<u64>{1, 1, 8, 8}));
}

TEST(NttCt, UnitImpulseGivesOnes) {
  const NttPlan plan = generate_plan(1024, 30, 0);
  auto a = unit(1024, 0);
  ntt_ct(a, plan);
  EXPECT_EQ(a, std::vector<u64>(1024, 1));
}

TEST(NttCt, MatchesBruteForceDft) {
  std::mt19937_64 rng(1);
  for (int bits : {28, 30, 62}) {
    for (u64 n = 2; n <= 64; n *= 2) {
      for (u64 seed : {0, 1}) {
        const NttPlan plan = generate_plan(n, bits, seed);
        auto a = random_poly(rng, n, plan.q());
        const auto want = oracle::negacyclic_dft_bitrev(a, plan.q(), plan.psi);
        ntt_ct(a, plan);
        ASSERT_EQ(a, want) << "n=" << n << " q=" << plan.q();
      }
    }
  }
}

TEST(NttCt, EveryReductionVariantAgrees) {
  std::mt19937_64 rng(2);
  const NttPlan base = generate_plan(256, 30, 0, Reduction::builtin);
  const auto a = random_poly(rng, 256, base.q());
  auto want = a;
  ntt_ct(want, base);
  for (Reduction v : {Reduction::classical, Reduction::dhem, Reduction::proposed}) {
    NttPlan plan = base;
    plan.reduction = v;
    auto got = a;
    ntt_ct(got, plan);
    EXPECT_EQ(got, want) << to_string(v);
  }
}

TEST(NttCt, OperationCounts) {
  const NttPlan plan = generate_plan(1024, 30, 0);
  std::vector<u64> a(1024, 3);
  OpCounter c;
  ntt_ct(a, plan, &c);
  EXPECT_EQ(c.modmul, 5120u);
  EXPECT_EQ(c.addsub, 10240u);
  EXPECT_EQ(c.half_scalings, 0u);
  EXPECT_EQ(c.twiddle_loads, 1023u);

  OpCounter ci;
  intt_gs(a, plan, &ci);
  EXPECT_EQ(ci.modmul, 5120u);

  OpCounter cs;
  intt_gs_scaled(a, plan, &cs);
  EXPECT_EQ(cs.modmul, 5120u);
  EXPECT_EQ(cs.half_scalings, 1024u * 10);
}

TEST(NttCt, LengthMismatchThrows) {
  const NttPlan plan = generate_plan(16, 30, 0);
  std::vector<u64> a(8);
  EXPECT_THROW(ntt_ct(a, plan), std::invalid_argument);
  EXPECT_THROW(intt_gs_scaled(a, plan), std::invalid_argument);
}

TEST(Inverse, UnscaledTimesNInvIsIdentity) {
  std::mt19937_64 rng(3);
  for (u64 n : {2, 8, 128, 2048}) {
    const NttPlan plan = generate_plan(n, 62, 4);
    const auto a = random_poly(rng, n, plan.q());
    auto x = a;
    ntt_ct(x, plan);
    intt_gs(x, plan);
    scale_by(x, plan.n_inv, plan);
    EXPECT_EQ(x, a);
  }
  const NttPlan plan = generate_plan(16, 30, 0);
  std::vector<u64> zero(16, 0);
  intt_gs(zero, plan);
  EXPECT_EQ(zero, std::vector<u64>(16, 0));
}

TEST(Inverse, ScaledRoundTripAndCrossCheck) {
  std::mt19937_64 rng(4);
  for (int bits : {28, 30, 62}) {
    for (u64 n = 2; n <= 4096; n *= 2) {
      const NttPlan plan = generate_plan(n, bits, 2);
      const auto a = random_poly(rng, n, plan.q());
      auto x = a;
      ntt_ct(x, plan);
      intt_gs_scaled(x, plan);
      ASSERT_EQ(x, a) << "n=" << n << " bits=" << bits;

      const auto spec = random_poly(rng, n, plan.q());
      auto s1 = spec, s2 = spec;
      intt_gs_scaled(s1, plan);
      intt_gs(s2, plan);
      scale_by(s2, plan.n_inv, plan);
      ASSERT_EQ(s1, s2);
    }
  }
}

TEST(Inverse, OnesSpectrumGivesImpulse) {
  const NttPlan plan = generate_plan(64, 28, 0);
  std::vector<u64> ones(64, 1);
  intt_gs_scaled(ones, plan);
  EXPECT_EQ(ones, unit(64, 0));
}

TEST(Ntt, Linearity) {
  std::mt19937_64 rng(5);
  const NttPlan plan = generate_plan(512, 62, 0);
  const u64 q = plan.q();
  for (int rep = 0; rep < 10; ++rep) {
    const auto a = random_poly(rng, 512, q), b = random_poly(rng, 512, q);
    const u64 alpha = rng() % q, beta = rng() % q;
    std::vector<u64> mix(512);
    for (u64 i = 0; i < 512; ++i) {
      mix[i] = (oracle::mul(alpha, a[i], q) + oracle::mul(beta, b[i], q)) % q;
    }
    auto ta = a, tb = b;
    ntt_ct(ta, plan);
    ntt_ct(tb, plan);
    ntt_ct(mix, plan);
    for (u64 i = 0; i < 512; ++i) {
      ASSERT_EQ(mix[i], (oracle::mul(alpha, ta[i], q) + oracle::mul(beta, tb[i], q)) % q);
    }
  }
}

TEST(Ntt, NegacyclicShiftMultipliesSpectrum) {
  std::mt19937_64 rng(6);
  for (u64 n : {4, 16, 64}) {
    const NttPlan plan = generate_plan(n, 30, 1);
    const u64 q = plan.q();
    const auto a = random_poly(rng, n, q);
    // x * a(x) mod x^n + 1
    std::vector<u64> shifted(n);
    shifted[0] = (q - a[n - 1]) % q;
    for (u64 i = 1; i < n; ++i) shifted[i] = a[i - 1];
    auto ta = a;
    ntt_ct(ta, plan);
    ntt_ct(shifted, plan);
    for (u64 p = 0; p < n; ++p) {
      const u64 root = oracle::power(plan.psi, 2 * oracle::reverse_bits(p, plan.log_n) + 1, q);
      ASSERT_EQ(shifted[p], oracle::mul(ta[p], root, q));
    }
  }
}

TEST(Truncated, ForwardComposesWithFinalStage) {
  std::mt19937_64 rng(7);
  for (u64 n = 4; n <= 4096; n *= 2) {
    const NttPlan plan = generate_plan(n, 30, 0);
    const auto a = random_poly(rng, n, plan.q());
    auto full = a, split = a;
    ntt_ct(full, plan);
    OpCounter c;
    ntt_ct_truncated(split, plan, &c);
    EXPECT_EQ(c.modmul, (n / 2) * (static_cast<u64>(plan.log_n) - 1));
    ntt_ct_final_stage(split, plan);
    ASSERT_EQ(split, full) << n;
  }
  const NttPlan p1024 = generate_plan(1024, 30, 0);
  std::vector<u64> a(1024, 1);
  OpCounter c;
  ntt_ct_truncated(a, p1024, &c);
  EXPECT_EQ(c.modmul, 4608u);
}

TEST(Truncated, InverseComposesWithFirstStage) {
  std::mt19937_64 rng(8);
  for (u64 n = 4; n <= 4096; n *= 2) {
    const NttPlan plan = generate_plan(n, 62, 0);
    const auto x = random_poly(rng, n, plan.q());
    auto full = x, split = x;
    intt_gs_scaled(full, plan);
    intt_gs_first_stage_scaled(split, plan);
    OpCounter c;
    intt_gs_truncated(split, plan, &c);
    EXPECT_EQ(c.half_scalings, n * (static_cast<u64>(plan.log_n) - 1));
    ASSERT_EQ(split, full) << n;
  }
  const NttPlan plan = generate_plan(16, 30, 0);
  std::vector<u64> zero(16, 0);
  intt_gs_truncated(zero, plan);
  EXPECT_EQ(zero, std::vector<u64>(16, 0));
}

TEST(Truncated, NeedsFourPoints) {
  const NttPlan plan = generate_plan(2, 30, 0);
  std::vector<u64> a(2, 1);
  EXPECT_THROW(ntt_ct_truncated(a, plan), UnsupportedSize);
  EXPECT_THROW(intt_gs_truncated(a, plan), UnsupportedSize);
  const NttPlan p4 = generate_plan(4, 30, 0);
  std::vector<u64> b(4, 1);
  OpCounter c;
  ntt_ct_truncated(b, p4, &c);
  EXPECT_EQ(c.modmul, 2u);  // a single stage
}

TEST(PolynomialTags, TransitionAndCheck) {
  const NttPlan plan = generate_plan(8, 30, 0);
  Polynomial p{{1, 2, 3, 4, 5, 6, 7, 0}, Ordering::normal};
  ntt_ct(p, plan);
  EXPECT_EQ(p.ordering, Ordering::bit_reversed);
  EXPECT_THROW(ntt_ct(p, plan), std::invalid_argument);
  intt_gs_scaled(p, plan);
  EXPECT_EQ(p.ordering, Ordering::normal);
  EXPECT_EQ(p.coeffs, (std::vector<u64>{1, 2, 3, 4, 5, 6, 7, 0}));
  EXPECT_THROW(intt_gs_scaled(p, plan), std::invalid_argument);
}

TEST(Radix4, MatchesRadix2Exactly) {
  std::mt19937_64 rng(9);
  for (int bits : {28, 62}) {
    for (u64 n = 4; n <= 4096; n *= 4) {
      const NttPlan plan = generate_plan(n, bits, 0);
      const Radix4Plan r4 = make_radix4_plan(plan);
      const auto a = random_poly(rng, n, plan.q());
      auto x2 = a, x4 = a;
      ntt_ct(x2, plan);
      ntt_radix4(x4, r4);
      ASSERT_EQ(x4, x2);
      intt_radix4(x4, r4);
      ASSERT_EQ(x4, a);
    }
  }
}

TEST(Radix4, ImpulseAndCounts) {
  for (u64 n : {16, 256, 4096}) {
    const NttPlan plan = generate_plan(n, 30, 0);
    const Radix4Plan r4 = make_radix4_plan(plan);
    auto e = unit(n, 0);
    OpCounter c4, c2;
    ntt_radix4(e, r4, &c4);
    EXPECT_EQ(e, std::vector<u64>(n, 1));
    auto e2 = unit(n, 0);
    ntt_ct(e2, plan, &c2);
    EXPECT_LE(c4.modmul, c2.modmul);
    EXPECT_LT(c4.twiddle_loads, c2.twiddle_loads + n);
  }
}

TEST(Radix4, OddLogRejectedButMixedRadixWorks) {
  std::mt19937_64 rng(10);
  for (u64 n : {2, 8, 32, 2048}) {
    const NttPlan plan = generate_plan(n, 30, 3);
    const Radix4Plan r4 = make_radix4_plan(plan);
    std::vector<u64> a = random_poly(rng, n, plan.q());
    EXPECT_THROW(ntt_radix4(a, r4), UnsupportedSize);
    EXPECT_THROW(intt_radix4(a, r4), UnsupportedSize);
    auto x2 = a, xm = a;
    ntt_ct(x2, plan);
    ntt_mixed_radix(xm, r4);
    ASSERT_EQ(xm, x2);
    intt_mixed_radix(xm, r4);
    ASSERT_EQ(xm, a);
  }
}

TEST(TwoD, MatchesRadix2UnderPositionMap) {
  std::mt19937_64 rng(11);
  for (int bits : {28, 30, 62}) {
    for (u64 n = 2; n <= 4096; n *= 2) {
      const NttPlan plan = generate_plan(n, bits, 1);
      const Ntt2dPlan p2 = make_2d_plan(plan);
      EXPECT_EQ(p2.rows * p2.cols, n);
      const auto a = random_poly(rng, n, plan.q());
      auto x2 = a, xd = a;
      ntt_ct(x2, plan);
      ntt_2d(xd, p2);
      for (u64 i = 0; i < n; ++i) ASSERT_EQ(xd[i], x2[ntt_2d_position(i, p2)]) << n;
      ntt_2d_inv(xd, p2);
      ASSERT_EQ(xd, a) << n;
    }
  }
}

TEST(TwoD, BruteForceAt16Over97) {
  // 97 - 1 = 96 = 3 * 32, so 2n = 32 divides q - 1.
  const NttPlan plan = build_plan(16, 97, Reduction::proposed, 0);
  const Ntt2dPlan p2 = make_2d_plan(plan);
  EXPECT_EQ(p2.rows, 4u);
  EXPECT_EQ(p2.cols, 4u);
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_poly(rng, 16, 97);
    const auto want = oracle::negacyclic_dft_bitrev(a, 97, plan.psi);
    ntt_2d(a, p2);
    for (u64 i = 0; i < 16; ++i) ASSERT_EQ(a[i], want[ntt_2d_position(i, p2)]);
  }
}

TEST(TwoD, PositionMapIsABijection) {
  const NttPlan plan = generate_plan(512, 30, 0);
  const Ntt2dPlan p2 = make_2d_plan(plan);
  std::vector<bool> hit(512, false);
  for (u64 i = 0; i < 512; ++i) {
    const u64 j = ntt_2d_position(i, p2);
    ASSERT_FALSE(hit[j]);
    hit[j] = true;
  }
  EXPECT_THROW(ntt_2d_position(512, p2), std::out_of_range);
}

TEST(Batch, SingleRowEqualsNttCt) {
  std::mt19937_64 rng(13);
  const NttPlan plan = generate_plan(256, 30, 0);
  std::vector<std::vector<u64>> rows = {random_poly(rng, 256, plan.q())};
  auto want = rows[0];
  ntt_ct(want, plan);
  batch_ntt(rows, plan, 1);
  EXPECT_EQ(rows[0], want);
}

TEST(Batch, DeterministicAcrossWorkers) {
  std::mt19937_64 rng(14);
  const NttPlan plan = generate_plan(4096, 62, 0);
  std::vector<std::vector<u64>> input(64);
  for (auto& r : input) r = random_poly(rng, 4096, plan.q());
  auto one = input;
  OpCounter c1;
  batch_ntt(one, plan, 1, &c1);
  for (unsigned w : {2u, 3u, 8u, 100u}) {
    auto many = input;
    OpCounter cw;
    batch_ntt(many, plan, w, &cw);
    EXPECT_EQ(many, one) << w;
    EXPECT_EQ(cw, c1);
  }
  EXPECT_EQ(c1.modmul, 64u * 2048 * 12);
}

TEST(Batch, ShapeErrors) {
  const NttPlan plan = generate_plan(16, 30, 0);
  std::vector<std::vector<u64>> ragged = {std::vector<u64>(16), std::vector<u64>(8)};
  EXPECT_THROW(batch_ntt(ragged, plan, 2), std::invalid_argument);
  std::vector<std::vector<u64>> ok = {std::vector<u64>(16)};
  EXPECT_THROW(batch_ntt(ok, plan, 0), std::invalid_argument);
  std::vector<std::vector<u64>> empty;
  EXPECT_NO_THROW(batch_ntt(empty, plan, 4));
}

}  // namespace
