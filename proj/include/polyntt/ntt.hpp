// Negacyclic number theoretic transforms.
//
// ntt_ct is the merged Cooley-Tukey transform: it consumes coefficients in
// normal order and produces, at position p, the evaluation
//     sum_i a[i] * psi^{(2 br(p) + 1) i}
// i.e. the spectrum in bit-reversed order. intt_gs / intt_gs_scaled are the
// merged Gentleman-Sande inverses (bit-reversed in, normal out). All
// transforms work in place.
//
// Every function takes an optional OpCounter. A null counter selects an
// uninstrumented instantiation of the kernel.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "polyntt/modarith.hpp"
#include "polyntt/params.hpp"

namespace polyntt {

/// Operation tallies for transforms and multiplications.
struct OpCounter {
  u64 modmul = 0;
  u64 addsub = 0;
  u64 half_scalings = 0;
  u64 twiddle_loads = 0;
  u64 negations = 0;

  OpCounter& operator+=(const OpCounter& o) noexcept {
    modmul += o.modmul;
    addsub += o.addsub;
    half_scalings += o.half_scalings;
    twiddle_loads += o.twiddle_loads;
    negations += o.negations;
    return *this;
  }
  friend OpCounter operator+(OpCounter a, const OpCounter& b) noexcept { return a += b; }
  friend bool operator==(const OpCounter&, const OpCounter&) = default;
};

/// Raised for transform sizes a kernel does not handle.
class UnsupportedSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Ordering { normal, bit_reversed };

/// Coefficient vector tagged with its current ordering.
struct Polynomial {
  std::vector<u64> coeffs;
  Ordering ordering = Ordering::normal;
};

// --- Radix-2 merged transforms ----------------------------------------------

void ntt_ct(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// Unscaled inverse: the result is n times the true inverse.
void intt_gs(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// Full inverse. Both outputs of every butterfly are halved, which folds the
/// 1/n factor into the log2(n) stages.
void intt_gs_scaled(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// a[i] *= factor for all i.
void scale_by(std::span<u64> a, u64 factor, const NttPlan& plan, OpCounter* ctr = nullptr);

/// ntt_ct without its final (k = 1) stage. Requires n >= 4.
void ntt_ct_truncated(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// The stage omitted by ntt_ct_truncated.
void ntt_ct_final_stage(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// The first (k = 1) stage of intt_gs_scaled on its own.
void intt_gs_first_stage_scaled(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// intt_gs_scaled without its first stage. Requires n >= 4.
void intt_gs_truncated(std::span<u64> a, const NttPlan& plan, OpCounter* ctr = nullptr);

/// Tag-checked forms: normal -> bit_reversed and back.
void ntt_ct(Polynomial& a, const NttPlan& plan, OpCounter* ctr = nullptr);
void intt_gs_scaled(Polynomial& a, const NttPlan& plan, OpCounter* ctr = nullptr);

// --- Radix-4 ------------------------------------------------------------------

/// Twiddles for radix-4 butterflies. pair_fwd[j] = tw_fwd[j] * tw_fwd[2j] and
/// pair_inv[j] = tw_inv[j] * tw_inv[2j] for 1 <= j < n/2.
struct Radix4Plan {
  NttPlan base;
  std::vector<u64> pair_fwd;
  std::vector<u64> pair_inv;
};

Radix4Plan make_radix4_plan(const NttPlan& plan);

/// Radix-4 merged forward transform; needs an even log2(n), otherwise throws
/// UnsupportedSize. Each butterfly takes 3 twiddle products plus one product
/// by the fourth root of unity psi^{n/2}. The output is identical to ntt_ct.
void ntt_radix4(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr = nullptr);

/// Scaled inverse paired with ntt_radix4 (bit-reversed in, normal out).
void intt_radix4(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr = nullptr);

/// Mixed radix: one radix-2 stage when log2(n) is odd, radix-4 elsewhere.
void ntt_mixed_radix(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr = nullptr);
void intt_mixed_radix(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr = nullptr);

// --- Four-step (2D) -----------------------------------------------------------

/// Four-step decomposition n = rows * cols with rows = 2^ceil(log2(n)/2).
///
/// The input a[cols * r + c] is viewed as a rows x cols matrix. Forward:
///  1. each column is transformed by a merged CT NTT of length `rows` whose
///     root is psi^cols (this absorbs the psi pre-scaling);
///  2. entry (p, c) is multiplied by psi^{(2 br(p) + 1) c};
///  3. each row is transformed by a cyclic CT NTT of length `cols` with root
///     psi^{2 rows}.
/// Output position p * cols + s holds the evaluation at psi^{2k+1} with
/// k = br_rows(p) + rows * br_cols(s), which is exactly the ntt_ct position
/// of that evaluation: the 2D order coincides with ntt_ct's bit-reversed order
/// (see ntt_2d_position).
struct Ntt2dPlan {
  u64 n = 0;
  u64 rows = 0;
  u64 cols = 0;
  Modulus mod{3};
  Reduction reduction = Reduction::proposed;
  NttPlan column;                 // length-`rows` negacyclic plan, root psi^cols
  std::vector<u64> row_fwd;       // cyclic CT twiddles, length cols
  std::vector<u64> row_inv;
  std::vector<u64> correct_fwd;   // n correction factors
  std::vector<u64> correct_inv;
};

Ntt2dPlan make_2d_plan(const NttPlan& plan);

void ntt_2d(std::span<u64> a, const Ntt2dPlan& plan, OpCounter* ctr = nullptr);
/// Full (scaled) inverse of ntt_2d.
void ntt_2d_inv(std::span<u64> a, const Ntt2dPlan& plan, OpCounter* ctr = nullptr);

/// Index in ntt_ct output holding the value ntt_2d writes at `index`.
u64 ntt_2d_position(u64 index, const Ntt2dPlan& plan);

// --- Batch -------------------------------------------------------------------

/// ntt_ct on every row, rows statically split across at most `workers`
/// threads. Results and counters do not depend on `workers`. Throws
/// std::invalid_argument for ragged rows or workers == 0.
void batch_ntt(std::vector<std::vector<u64>>& rows, const NttPlan& plan, unsigned workers,
               OpCounter* ctr = nullptr);

/// Closed-form radix-2 modmul count (n/2) log2(n).
constexpr u64 radix2_modmuls(u64 n, int log_n) { return (n / 2) * static_cast<u64>(log_n); }

}  // namespace polyntt
