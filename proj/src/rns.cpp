#include "polyntt/rns.hpp"

#include <algorithm>
#include <thread>

#include "polyntt/polymul.hpp"

namespace polyntt {

int workload_size(int bits_q, int prime_bits) {
  if (bits_q < 1 || prime_bits < 1) {
    throw std::invalid_argument("workload_size needs positive bit counts");
  }
  return (bits_q + prime_bits - 1) / prime_bits;
}

double workload_increase_percent(int bits_q, int from_bits, int to_bits) {
  const double before = workload_size(bits_q, from_bits);
  const double after = workload_size(bits_q, to_bits);
  return (after - before) / before * 100.0;
}

RnsBasis::RnsBasis(std::vector<NttPlan> plans) : plans_(std::move(plans)) {
  if (plans_.empty()) throw InvalidPlan("RNS basis needs at least one prime");
  const u64 n = plans_.front().n;
  for (std::size_t i = 0; i < plans_.size(); ++i) {
    if (plans_[i].n != n) throw InvalidPlan("all basis plans must share the same n");
    for (std::size_t j = 0; j < i; ++j) {
      if (plans_[i].q() == plans_[j].q()) {
        throw InvalidPlan("prime " + std::to_string(plans_[i].q()) + " appears twice in basis");
      }
    }
  }
  big_q_ = 1;
  for (const auto& p : plans_) big_q_ *= p.q();
  for (const auto& p : plans_) {
    const u64 q = p.q();
    BigInt cof = big_q_ / q;
    const u64 cof_mod = static_cast<u64>(cof % q);
    cofactor_.push_back(std::move(cof));
    cofactor_inv_.push_back(pow_mod(cof_mod, q - 2, q));
  }
}

RnsBasis RnsBasis::from_primes(const std::vector<u64>& primes, u64 n, Reduction reduction) {
  std::vector<NttPlan> plans;
  plans.reserve(primes.size());
  for (u64 q : primes) plans.push_back(build_plan(n, q, reduction, 0));
  return RnsBasis(std::move(plans));
}

RnsBasis RnsBasis::generate(u64 n, std::size_t k, int bits, u64 seed, Reduction reduction) {
  std::vector<u64> primes;
  // Duplicate primes from nearby seeds are skipped.
  for (u64 s = seed; primes.size() < k; ++s) {
    if (s - seed > 64 * k + 64) throw PrimeNotFound("could not find enough distinct primes");
    const u64 q = generate_prime(bits, n, s);
    if (std::find(primes.begin(), primes.end(), q) == primes.end()) primes.push_back(q);
  }
  return from_primes(primes, n, reduction);
}

std::vector<std::vector<u64>> decompose(std::span<const BigInt> coeffs, const RnsBasis& basis) {
  std::vector<std::vector<u64>> out(basis.size(), std::vector<u64>(coeffs.size()));
  for (std::size_t j = 0; j < coeffs.size(); ++j) {
    if (coeffs[j] < 0 || coeffs[j] >= basis.big_q()) {
      throw std::domain_error("coefficient " + std::to_string(j) + " outside [0, Q)");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      out[i][j] = static_cast<u64>(coeffs[j] % basis.prime(i));
    }
  }
  return out;
}

std::vector<BigInt> reconstruct(const std::vector<std::vector<u64>>& residues,
                                const RnsBasis& basis) {
  if (residues.size() != basis.size()) {
    throw std::invalid_argument("expected " + std::to_string(basis.size()) +
                                " residue polynomials, got " + std::to_string(residues.size()));
  }
  const std::size_t n = residues.front().size();
  for (const auto& r : residues) {
    if (r.size() != n) throw std::invalid_argument("residue polynomials differ in length");
  }
  std::vector<BigInt> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    BigInt acc = 0;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const u64 q = basis.prime(i);
      if (residues[i][j] >= q) throw std::domain_error("residue not reduced");
      const u64 t = static_cast<u64>(static_cast<u128>(residues[i][j]) * basis.cofactor_inverse(i) % q);
      acc += basis.cofactor(i) * t;
      acc %= basis.big_q();
    }
    out[j] = std::move(acc);
  }
  return out;
}

std::vector<BigInt> polymul_rns(std::span<const BigInt> a, std::span<const BigInt> b,
                                const RnsBasis& basis, OpCounter* ctr, unsigned workers) {
  if (a.size() != b.size() || a.size() != basis.n()) {
    throw std::invalid_argument("operand lengths must equal basis n = " +
                                std::to_string(basis.n()));
  }
  if (workers == 0) throw std::invalid_argument("polymul_rns needs at least one worker");
  const auto ra = decompose(a, basis);
  const auto rb = decompose(b, basis);
  const std::size_t k = basis.size();
  std::vector<std::vector<u64>> rc(k);
  std::vector<OpCounter> partial(k);
  const auto run = [&](std::size_t i) {
    rc[i] = polymul_fused(ra[i], rb[i], basis.plans()[i], ctr ? &partial[i] : nullptr);
  };
  const std::size_t used = std::min<std::size_t>(workers, k);
  if (used <= 1) {
    for (std::size_t i = 0; i < k; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < used; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < k; i += used) run(i);
      });
    }
  }
  if (ctr) {
    for (const auto& c : partial) *ctr += c;
  }
  return reconstruct(rc, basis);
}

std::string to_text(const RnsBasis& basis) {
  std::string out;
  for (const auto& p : basis.plans()) {
    out += to_text(p);
    out += '\n';
  }
  return out;
}

}  // namespace polyntt
