#include "polyntt/polymul.hpp"

#include <optional>
#include <string>
#include <thread>

#include "kernels.hpp"

namespace polyntt {

using kernels::ct_stages;
using kernels::dispatch;
using kernels::gs_stages;
using kernels::Tally;

namespace {

void check_pair(std::span<const u64> a, std::span<const u64> b, u64 n) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("operand lengths differ: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  if (a.size() != n) {
    throw std::invalid_argument("operands have " + std::to_string(a.size()) +
                                " coefficients, plan expects " + std::to_string(n));
  }
}

template <Reduction V, bool On>
void hadamard_in_place(std::span<u64> a, std::span<const u64> b, const Modulus& mod, Tally<On> t) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = mulmod<V>(a[i], b[i], mod);
  t.modmul(a.size());
}

// One fused component. With Negate the twiddle product enters with a minus
// sign (the bit-reversed twiddle is -alpha^2 for odd pairs).
template <Reduction V, bool Negate, bool On>
inline std::pair<u64, u64> fused_pair(u64 a0, u64 a1, u64 b0, u64 b1, u64 alpha_sq,
                                      const Modulus& mod, Tally<On> t) {
  const u64 prod1 = mulmod<V>(a0, b0, mod);
  const u64 prod2 = mulmod<V>(a1, b1, mod);
  const u64 sum1 = mod_add(a0, a1, mod);
  const u64 sum2 = mod_add(b0, b1, mod);
  const u64 prod3 = mulmod<V>(sum1, sum2, mod);
  u64 prod4 = mulmod<V>(prod2, alpha_sq, mod);
  if constexpr (Negate) {
    prod4 = mod_neg(prod4, mod);
    t.negation();
  }
  const u64 sum3 = mod_add(prod1, prod4, mod);
  const u64 sum4 = mod_sub(prod3, prod1, mod);
  const u64 sum5 = mod_sub(sum4, prod2, mod);
  t.modmul(4);
  t.addsub(5);
  return {sum3, sum5};
}

template <Reduction V, bool On>
void fused_middle(std::span<u64> ahat, std::span<const u64> bhat, const FusedPlan& plan,
                  Tally<On> t) {
  const u64 quarter = plan.n / 4;
  for (u64 i = 0; i < plan.n / 2; ++i) {
    const u64 tw = plan.tw_fwd_half[quarter + i / 2];
    t.twiddle();
    const u64 a0 = ahat[2 * i], a1 = ahat[2 * i + 1];
    const u64 b0 = bhat[2 * i], b1 = bhat[2 * i + 1];
    const auto [c0, c1] = (i & 1) ? fused_pair<V, true>(a0, a1, b0, b1, tw, plan.mod, t)
                                  : fused_pair<V, false>(a0, a1, b0, b1, tw, plan.mod, t);
    ahat[2 * i] = c0;
    ahat[2 * i + 1] = c1;
  }
}

}  // namespace

std::vector<u64> negacyclic_naive(std::span<const u64> a, std::span<const u64> b, u64 q,
                                  OpCounter* ctr) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("operand lengths differ: " + std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  std::vector<u64> c(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const u64 prod = reduce_builtin(static_cast<u128>(a[i]) * b[j], q);
      const std::size_t k = i + j;
      if (k < n) {
        c[k] = reduce_builtin(static_cast<u128>(c[k]) + prod, q);
      } else {
        c[k - n] = reduce_builtin(static_cast<u128>(c[k - n]) + q - prod, q);
      }
    }
  }
  if (ctr) {
    ctr->modmul += n * n;
    ctr->addsub += n * n;
  }
  return c;
}

std::vector<u64> hadamard(std::span<const u64> a, std::span<const u64> b, const Modulus& mod,
                          Reduction variant, OpCounter* ctr) {
  check_pair(a, b, a.size());
  if (!mod.supports(variant)) (void)mod.mu_dhem();
  std::vector<u64> c(a.begin(), a.end());
  dispatch(variant, ctr, [&](auto v, auto t) {
    hadamard_in_place<decltype(v)::value>(std::span<u64>(c), b, mod, t);
  });
  return c;
}

std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b, const NttPlan& plan,
                             OpCounter* ctr) {
  check_pair(a, b, plan.n);
  std::vector<u64> ahat(a.begin(), a.end());
  std::vector<u64> bhat(b.begin(), b.end());
  ntt_ct(ahat, plan, ctr);
  ntt_ct(bhat, plan, ctr);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    hadamard_in_place<decltype(v)::value>(std::span<u64>(ahat), bhat, plan.mod, t);
  });
  intt_gs_scaled(ahat, plan, ctr);
  return ahat;
}

std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b,
                             const Radix4Plan& plan, OpCounter* ctr) {
  check_pair(a, b, plan.base.n);
  std::vector<u64> ahat(a.begin(), a.end());
  std::vector<u64> bhat(b.begin(), b.end());
  ntt_mixed_radix(ahat, plan, ctr);
  ntt_mixed_radix(bhat, plan, ctr);
  dispatch(plan.base.reduction, ctr, [&](auto v, auto t) {
    hadamard_in_place<decltype(v)::value>(std::span<u64>(ahat), bhat, plan.base.mod, t);
  });
  intt_mixed_radix(ahat, plan, ctr);
  return ahat;
}

std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b,
                             const Ntt2dPlan& plan, OpCounter* ctr) {
  check_pair(a, b, plan.n);
  std::vector<u64> ahat(a.begin(), a.end());
  std::vector<u64> bhat(b.begin(), b.end());
  ntt_2d(ahat, plan, ctr);
  ntt_2d(bhat, plan, ctr);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    hadamard_in_place<decltype(v)::value>(std::span<u64>(ahat), bhat, plan.mod, t);
  });
  ntt_2d_inv(ahat, plan, ctr);
  return ahat;
}

std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b, const NttPlan& plan,
                             Backend backend, OpCounter* ctr) {
  switch (backend) {
    case Backend::radix2:
      return polymul_ntt(a, b, plan, ctr);
    case Backend::radix4:
      return polymul_ntt(a, b, make_radix4_plan(plan), ctr);
    case Backend::two_d:
      return polymul_ntt(a, b, make_2d_plan(plan), ctr);
  }
  return polymul_ntt(a, b, plan, ctr);
}

std::pair<u64, u64> fused_butterfly(u64 a0, u64 a1, u64 b0, u64 b1, u64 alpha_sq,
                                    const Modulus& mod, Reduction variant, OpCounter* ctr) {
  if (!mod.supports(variant)) (void)mod.mu_dhem();
  std::pair<u64, u64> out;
  dispatch(variant, ctr, [&](auto v, auto t) {
    out = fused_pair<decltype(v)::value, false>(a0, a1, b0, b1, alpha_sq, mod, t);
  });
  return out;
}

FusedPlan make_fused_plan(const NttPlan& plan) {
  if (plan.n < 4) throw UnsupportedSize("fused multiplication needs n >= 4");
  const auto half = static_cast<std::ptrdiff_t>(plan.n / 2);
  FusedPlan f;
  f.n = plan.n;
  f.log_n = plan.log_n;
  f.mod = plan.mod;
  f.reduction = plan.reduction;
  f.tw_fwd_half.assign(plan.tw_fwd.begin(), plan.tw_fwd.begin() + half);
  f.tw_inv_half.assign(plan.tw_inv.begin(), plan.tw_inv.begin() + half);
  return f;
}

void ntt_ct_truncated(std::span<u64> a, const FusedPlan& plan, OpCounter* ctr) {
  if (a.size() != plan.n) throw std::invalid_argument("length does not match fused plan");
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    ct_stages<decltype(v)::value>(a, plan.tw_fwd_half, plan.mod, 1, plan.n / 2, t);
  });
}

void intt_gs_truncated(std::span<u64> a, const FusedPlan& plan, OpCounter* ctr) {
  if (a.size() != plan.n) throw std::invalid_argument("length does not match fused plan");
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    gs_stages<decltype(v)::value, true>(a, plan.tw_inv_half, plan.mod, plan.n / 4, 1, t);
  });
}

std::vector<u64> polymul_fused(std::span<const u64> a, std::span<const u64> b,
                               const FusedPlan& plan, OpCounter* ctr) {
  check_pair(a, b, plan.n);
  std::vector<u64> ahat(a.begin(), a.end());
  std::vector<u64> bhat(b.begin(), b.end());
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    constexpr Reduction V = decltype(v)::value;
    ct_stages<V>(std::span<u64>(ahat), plan.tw_fwd_half, plan.mod, 1, plan.n / 2, t);
    ct_stages<V>(std::span<u64>(bhat), plan.tw_fwd_half, plan.mod, 1, plan.n / 2, t);
    fused_middle<V>(std::span<u64>(ahat), bhat, plan, t);
    gs_stages<V, true>(std::span<u64>(ahat), plan.tw_inv_half, plan.mod, plan.n / 4, 1, t);
  });
  return ahat;
}

std::vector<u64> polymul_fused(std::span<const u64> a, std::span<const u64> b,
                               const NttPlan& plan, OpCounter* ctr) {
  if (plan.n < 4) return polymul_ntt(a, b, plan, ctr);
  return polymul_fused(a, b, make_fused_plan(plan), ctr);
}

std::vector<std::vector<u64>> polymul_batch(const std::vector<PolyPair>& pairs,
                                            const NttPlan& plan, unsigned workers,
                                            OpCounter* ctr) {
  if (workers == 0) throw std::invalid_argument("polymul_batch needs at least one worker");
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].first.size() != plan.n || pairs[p].second.size() != plan.n) {
      throw std::invalid_argument("pair " + std::to_string(p) + " does not have length " +
                                  std::to_string(plan.n));
    }
  }
  std::optional<FusedPlan> fused;
  if (plan.n >= 4) fused = make_fused_plan(plan);
  const std::size_t count = pairs.size();
  const std::size_t used = std::min<std::size_t>(workers, std::max<std::size_t>(count, 1));
  std::vector<std::vector<u64>> out(count);
  std::vector<OpCounter> partial(used);
  const auto run = [&](std::size_t w) {
    OpCounter* c = ctr ? &partial[w] : nullptr;
    for (std::size_t p = count * w / used; p < count * (w + 1) / used; ++p) {
      out[p] = fused ? polymul_fused(pairs[p].first, pairs[p].second, *fused, c)
                     : polymul_ntt(pairs[p].first, pairs[p].second, plan, c);
    }
  };
  if (used == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(used - 1);
    for (std::size_t w = 1; w < used; ++w) pool.emplace_back(run, w);
    run(0);
  }
  if (ctr) {
    for (const auto& c : partial) *ctr += c;
  }
  return out;
}

}  // namespace polyntt
