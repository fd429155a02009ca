// NTT-friendly primes, primitive roots of unity, bit reversal and the
// precomputed plan shared by every transform.

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyntt/modarith.hpp"

namespace polyntt {

/// Raised when a plan or its parameters violate an invariant.
class InvalidPlan : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when the prime search range is exhausted.
class PrimeNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
bool is_prime(u64 n);

/// Reverses the low `bits` bits of i. Throws std::out_of_range if i >= 2^bits.
u64 bit_reverse(u64 i, int bits);

bool is_power_of_two(u64 n) noexcept;
int log2_exact(u64 n);  // throws std::invalid_argument unless n is a power of two

/// A prime q with exactly `bits` bits and q = 1 (mod 2n).
///
/// Candidates are q = 2n*k + 1 for k descending from floor((2^bits - 1) / 2n);
/// a nonzero seed rotates the starting k within the admissible range so that
/// different seeds land on different primes. The result depends only on
/// (bits, n, seed).
u64 generate_prime(int bits, u64 n, u64 seed);

/// A primitive `order`-th root of unity mod q, `order` a power of two dividing
/// q - 1. Candidates g are drawn from a PRNG seeded with `seed`;
/// psi = g^{(q-1)/order} is accepted iff psi^{order/2} = q - 1.
u64 find_primitive_root(u64 q, u64 order, u64 seed);

/// Precomputed context for negacyclic transforms of length n over Z_q.
///
/// tw_fwd[i] = psi^{br(i)} and tw_inv[i] = psi^{-br(i)}, br being the
/// log2(n)-bit reversal. Built by build_plan; the fields are public so that
/// validate() can be exercised on deliberately corrupted copies.
struct NttPlan {
  u64 n = 0;
  int log_n = 0;
  Modulus mod{3};
  u64 psi = 0;
  u64 psi_inv = 0;
  u64 omega = 0;
  u64 n_inv = 0;
  std::vector<u64> tw_fwd;
  std::vector<u64> tw_inv;
  Reduction reduction = Reduction::proposed;

  u64 q() const noexcept { return mod.value(); }
  std::size_t twiddle_words() const noexcept { return tw_fwd.size() + tw_inv.size(); }
};

/// Plan for (n, q) with a root found by find_primitive_root(q, 2n, seed).
NttPlan build_plan(u64 n, u64 q, Reduction reduction = Reduction::proposed, u64 seed = 0);

/// Plan for (n, q) using the given primitive 2n-th root psi.
NttPlan build_plan_with_root(u64 n, u64 q, u64 psi, Reduction reduction = Reduction::proposed);

/// Plan with a freshly generated `bits`-bit prime.
NttPlan generate_plan(u64 n, int bits, u64 seed, Reduction reduction = Reduction::proposed);

/// Checks every plan invariant; throws InvalidPlan naming the first violation.
void validate(const NttPlan& plan);

/// One-line text form `n q psi variant`.
std::string to_text(const NttPlan& plan);

/// Parses and validates a line produced by to_text. Throws InvalidPlan.
NttPlan plan_from_text(std::string_view line);

}  // namespace polyntt
