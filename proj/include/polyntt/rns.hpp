// Residue number system: a product of word-size NTT primes standing in for a
// large modulus Q, with CRT reconstruction. Multi-word integers appear only
// in this module.

#pragma once

#include <span>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "polyntt/ntt.hpp"
#include "polyntt/params.hpp"

namespace polyntt {

using BigInt = boost::multiprecision::cpp_int;

/// ceil(bits_q / prime_bits): how many prime-sized multiplications a
/// modulus of bits_q bits splits into. Throws std::invalid_argument unless
/// both arguments are positive.
int workload_size(int bits_q, int prime_bits);

/// Relative increase of the workload when primes shrink from `from_bits`
/// to `to_bits`, in percent.
double workload_increase_percent(int bits_q, int from_bits, int to_bits);

/// Distinct NTT primes q_0..q_{k-1} sharing one transform size, the product
/// Q and the CRT constants Q/q_i and (Q/q_i)^{-1} mod q_i.
class RnsBasis {
 public:
  /// Throws InvalidPlan for an empty list, mismatched n or repeated primes.
  explicit RnsBasis(std::vector<NttPlan> plans);

  /// Plans for the given primes, roots found with seed 0.
  static RnsBasis from_primes(const std::vector<u64>& primes, u64 n,
                              Reduction reduction = Reduction::proposed);

  /// k distinct `bits`-bit primes from generate_prime with successive seeds.
  static RnsBasis generate(u64 n, std::size_t k, int bits, u64 seed = 0,
                           Reduction reduction = Reduction::proposed);

  std::size_t size() const noexcept { return plans_.size(); }
  u64 n() const noexcept { return plans_.front().n; }
  const std::vector<NttPlan>& plans() const noexcept { return plans_; }
  u64 prime(std::size_t i) const { return plans_.at(i).q(); }
  const BigInt& big_q() const noexcept { return big_q_; }
  const BigInt& cofactor(std::size_t i) const { return cofactor_.at(i); }
  u64 cofactor_inverse(std::size_t i) const { return cofactor_inv_.at(i); }

 private:
  std::vector<NttPlan> plans_;
  BigInt big_q_;
  std::vector<BigInt> cofactor_;   // Q / q_i
  std::vector<u64> cofactor_inv_;  // (Q / q_i)^{-1} mod q_i
};

/// Residue polynomial i holds coeffs mod q_i. Throws std::domain_error for a
/// coefficient outside [0, Q).
std::vector<std::vector<u64>> decompose(std::span<const BigInt> coeffs, const RnsBasis& basis);

/// The unique vector in [0, Q)^n matching every residue polynomial.
std::vector<BigInt> reconstruct(const std::vector<std::vector<u64>>& residues,
                                const RnsBasis& basis);

/// decompose, per-prime fused multiplication, reconstruct. The per-prime
/// products run on up to `workers` threads.
std::vector<BigInt> polymul_rns(std::span<const BigInt> a, std::span<const BigInt> b,
                                const RnsBasis& basis, OpCounter* ctr = nullptr,
                                unsigned workers = 1);

/// Basis as plan lines, one `n q psi variant` per prime.
std::string to_text(const RnsBasis& basis);

}  // namespace polyntt
