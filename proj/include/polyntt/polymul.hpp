// Negacyclic polynomial multiplication in Z_q[x] / (x^n + 1).

#pragma once

#include <span>
#include <utility>
#include <vector>

#include "polyntt/modarith.hpp"
#include "polyntt/ntt.hpp"
#include "polyntt/params.hpp"

namespace polyntt {

/// Schoolbook product mod x^n + 1 using reduce_builtin only; any n >= 1.
/// Counts n^2 modmuls when a counter is given.
std::vector<u64> negacyclic_naive(std::span<const u64> a, std::span<const u64> b, u64 q,
                                  OpCounter* ctr = nullptr);

/// Entry-wise product.
std::vector<u64> hadamard(std::span<const u64> a, std::span<const u64> b, const Modulus& mod,
                          Reduction variant = Reduction::proposed, OpCounter* ctr = nullptr);

/// Transform backend used by polymul_ntt.
enum class Backend { radix2, radix4, two_d };

/// intt_gs_scaled(ntt_ct(a) . ntt_ct(b)).
std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b, const NttPlan& plan,
                             OpCounter* ctr = nullptr);
/// Same product through the mixed-radix (radix-4) transforms.
std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b,
                             const Radix4Plan& plan, OpCounter* ctr = nullptr);
/// Same product through the four-step transforms.
std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b,
                             const Ntt2dPlan& plan, OpCounter* ctr = nullptr);
/// Builds the backend's auxiliary plan on the fly.
std::vector<u64> polymul_ntt(std::span<const u64> a, std::span<const u64> b, const NttPlan& plan,
                             Backend backend, OpCounter* ctr = nullptr);

/// Last CT stage, Hadamard product and first scaled GS stage of a single
/// butterfly pair, fused:
///   c0 = a0 b0 + alpha_sq a1 b1,   c1 = a0 b1 + a1 b0   (mod q)
/// with 4 products and 5 additions/subtractions, c1 via
/// (a0 + a1)(b0 + b1) - a0 b0 - a1 b1.
std::pair<u64, u64> fused_butterfly(u64 a0, u64 a1, u64 b0, u64 b1, u64 alpha_sq,
                                    const Modulus& mod, Reduction variant = Reduction::proposed,
                                    OpCounter* ctr = nullptr);

/// The parameters fused multiplication needs: the first n/2 entries of each
/// twiddle table. Only those are read by the truncated transforms and the
/// fused middle loop.
struct FusedPlan {
  u64 n = 0;
  int log_n = 0;
  Modulus mod{3};
  Reduction reduction = Reduction::proposed;
  std::vector<u64> tw_fwd_half;
  std::vector<u64> tw_inv_half;

  std::size_t twiddle_words() const noexcept { return tw_fwd_half.size() + tw_inv_half.size(); }
};

/// Throws UnsupportedSize for n < 4.
FusedPlan make_fused_plan(const NttPlan& plan);

/// Truncated transforms on a FusedPlan; same results as the NttPlan forms.
void ntt_ct_truncated(std::span<u64> a, const FusedPlan& plan, OpCounter* ctr = nullptr);
void intt_gs_truncated(std::span<u64> a, const FusedPlan& plan, OpCounter* ctr = nullptr);

/// Truncated forward transforms, fused middle loop, truncated inverse.
std::vector<u64> polymul_fused(std::span<const u64> a, std::span<const u64> b,
                               const FusedPlan& plan, OpCounter* ctr = nullptr);

/// polymul_fused for n >= 4, polymul_ntt for n = 2.
std::vector<u64> polymul_fused(std::span<const u64> a, std::span<const u64> b,
                               const NttPlan& plan, OpCounter* ctr = nullptr);

using PolyPair = std::pair<std::vector<u64>, std::vector<u64>>;

/// Independent fused products, statically split across `workers` threads.
/// Output does not depend on `workers`.
std::vector<std::vector<u64>> polymul_batch(const std::vector<PolyPair>& pairs,
                                            const NttPlan& plan, unsigned workers,
                                            OpCounter* ctr = nullptr);

}  // namespace polyntt
