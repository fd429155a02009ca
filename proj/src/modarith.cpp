#include "polyntt/modarith.hpp"

#include <string>

namespace polyntt {

std::string_view to_string(Reduction r) {
  switch (r) {
    case Reduction::builtin:
      return "builtin";
    case Reduction::classical:
      return "classical";
    case Reduction::dhem:
      return "dhem";
    case Reduction::proposed:
      return "proposed";
  }
  return "unknown";
}

Reduction parse_reduction(std::string_view name) {
  if (name == "builtin") return Reduction::builtin;
  if (name == "classical") return Reduction::classical;
  if (name == "dhem") return Reduction::dhem;
  if (name == "proposed") return Reduction::proposed;
  throw std::invalid_argument("unknown reduction variant '" + std::string(name) + "'");
}

int bit_length(u128 a) {
  if (a == 0) throw std::domain_error("bit_length: argument must be positive");
  const u64 hi = static_cast<u64>(a >> 64);
  if (hi != 0) return 128 - __builtin_clzll(hi);
  return 64 - __builtin_clzll(static_cast<u64>(a));
}

Modulus::Modulus(u64 q) : q_(q), bits_(0) {
  if (q < 3) throw std::invalid_argument("modulus must be at least 3");
  if ((q & 1) == 0) throw std::invalid_argument("modulus must be odd");
  bits_ = bit_length(q);
  if (bits_ > kMaxModulusBits) {
    throw std::invalid_argument("modulus of " + std::to_string(bits_) + " bits exceeds " +
                                std::to_string(kMaxModulusBits));
  }
  const u128 one = 1;
  mu_classical_ = static_cast<u64>((one << (2 * bits_)) / q);
  mu_proposed_ = static_cast<u64>((one << (2 * bits_ + 1)) / q);
  if (bits_ <= kMaxDhemBits) {
    mu_dhem_ = static_cast<u64>((one << (2 * bits_ + 3)) / q);
    has_mu_dhem_ = true;
  }
  half_q_ceil_ = (q + 1) >> 1;

  const auto align = [](u64 mu, int shift) {
    return shift <= 64 ? AlignedMu{mu << (64 - shift), 0} : AlignedMu{mu, shift - 64};
  };
  al_classical_ = align(mu_classical_, bits_ + 1);
  al_proposed_ = align(mu_proposed_, bits_ + 3);
  if (has_mu_dhem_) al_dhem_ = align(mu_dhem_, bits_ + 5);
}

u64 Modulus::mu_dhem() const {
  if (!has_mu_dhem_) {
    throw ModulusTooLarge("Dhem-Quisquater reduction needs a modulus of at most " +
                          std::to_string(kMaxDhemBits) + " bits, got " + std::to_string(bits_));
  }
  return mu_dhem_;
}

u64 reduce_builtin(u128 x, u64 q) {
  if (q == 0) throw std::domain_error("reduce_builtin: modulus is zero");
  return static_cast<u64>(x % q);
}

u64 mulmod(u64 a, u64 b, const Modulus& mod, Reduction variant) {
  const u128 x = static_cast<u128>(a) * b;
  switch (variant) {
    case Reduction::builtin:
      return reduce_builtin(x, mod.value());
    case Reduction::classical:
      return barrett_classical(x, mod);
    case Reduction::dhem:
      return barrett_dhem(x, mod);
    case Reduction::proposed:
      return barrett_proposed(x, mod);
  }
  return barrett_proposed(x, mod);
}

u64 mulmod(u64 a, u64 b, const Modulus& mod, Reduction variant, ReductionStats& stats) {
  const u128 x = static_cast<u128>(a) * b;
  switch (variant) {
    case Reduction::builtin:
      stats.record(0);
      return reduce_builtin(x, mod.value());
    case Reduction::classical:
      return barrett_classical(x, mod, stats);
    case Reduction::dhem:
      return barrett_dhem(x, mod, stats);
    case Reduction::proposed:
      return barrett_proposed(x, mod, stats);
  }
  return barrett_proposed(x, mod, stats);
}

u64 pow_mod(u64 base, u64 exp, u64 q) {
  if (q == 0) throw std::domain_error("pow_mod: modulus is zero");
  u64 result = 1 % q;
  base %= q;
  while (exp != 0) {
    if (exp & 1) result = static_cast<u64>(static_cast<u128>(result) * base % q);
    base = static_cast<u64>(static_cast<u128>(base) * base % q);
    exp >>= 1;
  }
  return result;
}

}  // namespace polyntt
