// Word-size modular arithmetic: addition, subtraction, Barrett reduction
// variants, division-based reduction and halving modulo an odd q.
//
// All products are formed as 128-bit values (unsigned __int128) and every
// reduction works on explicit high/low word pieces of that product; no
// arbitrary-precision arithmetic is used here.

#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>

#if defined(NDEBUG) && !defined(POLYNTT_ENABLE_ASSERTS)
#define POLYNTT_ASSERT(cond) ((void)0)
#else
#define POLYNTT_ASSERT(cond) assert(cond)
#endif

namespace polyntt {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Bits per machine word. Only 64-bit words are supported.
inline constexpr int kWordBits = 64;

/// Largest admissible modulus bit length (classical and proposed Barrett).
inline constexpr int kMaxModulusBits = kWordBits - 2;

/// Largest modulus bit length for which the Dhem-Quisquater constant fits a word.
inline constexpr int kMaxDhemBits = kWordBits - 4;

/// Reduction algorithm used for modular products.
enum class Reduction { builtin, classical, dhem, proposed };

std::string_view to_string(Reduction r);
/// Throws std::invalid_argument for unknown names.
Reduction parse_reduction(std::string_view name);

/// Thrown when a reduction variant is requested for a modulus it cannot handle.
class ModulusTooLarge : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// floor(log2(a)) + 1. Throws std::domain_error for a == 0.
int bit_length(u128 a);

/// mu << pre with pre = max(0, 64 - s), post = max(0, s - 64), so that
/// floor(c * mu / 2^s) = hi64(c * mu_aligned) >> post.
struct AlignedMu {
  u64 mu = 0;
  int post = 0;
};

/// An odd modulus 3 <= q < 2^62 together with its Barrett constants.
class Modulus {
 public:
  /// Throws std::invalid_argument if q < 3, q is even or q has more than 62 bits.
  explicit Modulus(u64 q);

  u64 value() const noexcept { return q_; }
  int bits() const noexcept { return bits_; }
  u64 mu_classical() const noexcept { return mu_classical_; }
  u64 mu_proposed() const noexcept { return mu_proposed_; }
  bool has_mu_dhem() const noexcept { return has_mu_dhem_; }
  /// Throws ModulusTooLarge when bits() > 60.
  u64 mu_dhem() const;
  u64 mu_dhem_unchecked() const noexcept { return mu_dhem_; }
  u64 half_q_ceil() const noexcept { return half_q_ceil_; }

  const AlignedMu& aligned_classical() const noexcept { return al_classical_; }
  const AlignedMu& aligned_dhem() const noexcept { return al_dhem_; }
  const AlignedMu& aligned_proposed() const noexcept { return al_proposed_; }

  bool supports(Reduction r) const noexcept {
    return r != Reduction::dhem || has_mu_dhem_;
  }

  friend bool operator==(const Modulus& a, const Modulus& b) noexcept {
    return a.q_ == b.q_;
  }

 private:
  u64 q_;
  int bits_;
  u64 mu_classical_;
  u64 mu_dhem_ = 0;
  bool has_mu_dhem_ = false;
  u64 mu_proposed_;
  u64 half_q_ceil_;
  AlignedMu al_classical_, al_dhem_, al_proposed_;
};

/// Tally of correctional subtractions taken by counted reductions.
struct ReductionStats {
  u64 calls = 0;
  std::array<u64, 3> subtractions{};  // index = subtractions taken by a call

  void record(int subs) noexcept {
    ++calls;
    ++subtractions[static_cast<std::size_t>(subs)];
  }
  ReductionStats& operator+=(const ReductionStats& o) noexcept {
    calls += o.calls;
    for (std::size_t i = 0; i < subtractions.size(); ++i) subtractions[i] += o.subtractions[i];
    return *this;
  }
  bool consistent() const noexcept {
    return calls == subtractions[0] + subtractions[1] + subtractions[2];
  }
};

// ---------------------------------------------------------------------------
// Addition, subtraction, negation, halving.

inline u64 mod_add(u64 a, u64 b, const Modulus& mod) noexcept {
  POLYNTT_ASSERT(a < mod.value() && b < mod.value());
  u64 sum = a + b;
  if (sum >= mod.value()) sum -= mod.value();
  return sum;
}

inline u64 mod_sub(u64 a, u64 b, const Modulus& mod) noexcept {
  POLYNTT_ASSERT(a < mod.value() && b < mod.value());
  const u64 diff = a - b;
  // a < b wraps around; add q back in that case.
  return diff + (mod.value() & (0 - static_cast<u64>(a < b)));
}

inline u64 mod_neg(u64 a, const Modulus& mod) noexcept {
  POLYNTT_ASSERT(a < mod.value());
  return a == 0 ? 0 : mod.value() - a;
}

/// x * 2^{-1} mod q as (x >> 1) + (x & 1) * ((q + 1) >> 1).
inline u64 half_mod(u64 x, const Modulus& mod) noexcept {
  POLYNTT_ASSERT(x < mod.value());
  return (x >> 1) + (x & 1) * mod.half_q_ceil();
}

// ---------------------------------------------------------------------------
// Reductions of a double-word value x.

/// x mod q by native 128-bit division. Throws std::domain_error for q == 0.
u64 reduce_builtin(u128 x, u64 q);

namespace detail {

struct NoStats {
  void record(int) noexcept {}
};

// Low word of x >> s for 0 <= s < 64, without the generic 128-bit shift.
inline u64 shift_right_low(u128 x, int s) noexcept {
  const u64 lo = static_cast<u64>(x), hi = static_cast<u64>(x >> 64);
  return (lo >> s) | ((hi << 1) << (63 - s));
}

inline u64 high_shifted(u64 c, const AlignedMu& a) noexcept {
  return static_cast<u64>((static_cast<u128>(c) * a.mu) >> 64) >> (a.post & 63);
}

template <typename Stats>
inline u64 classical(u128 x, const Modulus& mod, Stats& stats) noexcept {
  const int m = mod.bits();
  const u64 q = mod.value();
  POLYNTT_ASSERT(m <= kMaxModulusBits);
  POLYNTT_ASSERT(x < (static_cast<u128>(1) << (2 * m)));
  const u64 c = shift_right_low(x, m - 1);
  const u64 quot = high_shifted(c, mod.aligned_classical());  // (c * mu) >> (m + 1)
  // The true remainder is below 3q < 2^64, so the low words suffice.
  u64 rem = static_cast<u64>(x) - quot * q;
  int subs = 0;
  if (rem >= q) {
    rem -= q;
    ++subs;
  }
  if (rem >= q) {
    rem -= q;
    ++subs;
  }
  stats.record(subs);
  return rem;
}

template <typename Stats>
inline u64 dhem(u128 x, const Modulus& mod, Stats& stats) noexcept {
  const int m = mod.bits();
  const u64 q = mod.value();
  POLYNTT_ASSERT(mod.has_mu_dhem());
  POLYNTT_ASSERT(x < (static_cast<u128>(1) << (2 * m)));
  const u64 c = shift_right_low(x, m - 2);
  const u64 quot = high_shifted(c, mod.aligned_dhem());  // (c * mu) >> (m + 5)
  u64 rem = static_cast<u64>(x) - quot * q;
  int subs = 0;
  if (rem >= q) {
    rem -= q;
    ++subs;
  }
  stats.record(subs);
  return rem;
}

template <typename Stats>
inline u64 proposed(u128 x, const Modulus& mod, Stats& stats) noexcept {
  const int m = mod.bits();
  const u64 q = mod.value();
  POLYNTT_ASSERT(m <= kMaxModulusBits);
  POLYNTT_ASSERT(x < (static_cast<u128>(1) << (2 * m)));
  // c < 2^{m+2} and mu < 2^{m+2}; both fit a word for m <= 62.
  const u64 c = shift_right_low(x, m - 2);
  const u64 quot = high_shifted(c, mod.aligned_proposed());  // (c * mu) >> (m + 3)
  u64 rem = static_cast<u64>(x) - quot * q;
  int subs = 0;
  if (rem >= q) {
    rem -= q;
    ++subs;
  }
  stats.record(subs);
  return rem;
}

template <typename Stats>
inline u64 builtin(u128 x, const Modulus& mod, Stats& stats) noexcept {
  stats.record(0);
  return static_cast<u64>(x % mod.value());
}

}  // namespace detail

inline u64 barrett_classical(u128 x, const Modulus& mod) noexcept {
  detail::NoStats none;
  return detail::classical(x, mod, none);
}
inline u64 barrett_classical(u128 x, const Modulus& mod, ReductionStats& stats) noexcept {
  return detail::classical(x, mod, stats);
}

/// Throws ModulusTooLarge when the modulus has more than 60 bits.
inline u64 barrett_dhem(u128 x, const Modulus& mod) {
  if (!mod.has_mu_dhem()) (void)mod.mu_dhem();
  detail::NoStats none;
  return detail::dhem(x, mod, none);
}
inline u64 barrett_dhem(u128 x, const Modulus& mod, ReductionStats& stats) {
  if (!mod.has_mu_dhem()) (void)mod.mu_dhem();
  return detail::dhem(x, mod, stats);
}

inline u64 barrett_proposed(u128 x, const Modulus& mod) noexcept {
  detail::NoStats none;
  return detail::proposed(x, mod, none);
}
inline u64 barrett_proposed(u128 x, const Modulus& mod, ReductionStats& stats) noexcept {
  return detail::proposed(x, mod, stats);
}

/// Reduction selected at compile time. Used by the transform kernels.
template <Reduction V>
inline u64 reduce(u128 x, const Modulus& mod) noexcept {
  detail::NoStats none;
  if constexpr (V == Reduction::builtin) {
    return detail::builtin(x, mod, none);
  } else if constexpr (V == Reduction::classical) {
    return detail::classical(x, mod, none);
  } else if constexpr (V == Reduction::dhem) {
    return detail::dhem(x, mod, none);
  } else {
    return detail::proposed(x, mod, none);
  }
}

template <Reduction V>
inline u64 mulmod(u64 a, u64 b, const Modulus& mod) noexcept {
  POLYNTT_ASSERT(a < mod.value() && b < mod.value());
  return reduce<V>(static_cast<u128>(a) * b, mod);
}

/// a * b mod q with the selected reduction. Throws ModulusTooLarge for
/// Reduction::dhem on moduli wider than 60 bits.
u64 mulmod(u64 a, u64 b, const Modulus& mod, Reduction variant);
u64 mulmod(u64 a, u64 b, const Modulus& mod, Reduction variant, ReductionStats& stats);

/// base^exp mod q by square-and-multiply over native division.
u64 pow_mod(u64 base, u64 exp, u64 q);

/// Calls fn with a std::integral_constant<Reduction, v> matching the runtime value.
template <typename Fn>
decltype(auto) dispatch_reduction(Reduction v, Fn&& fn) {
  switch (v) {
    case Reduction::builtin:
      return fn(std::integral_constant<Reduction, Reduction::builtin>{});
    case Reduction::classical:
      return fn(std::integral_constant<Reduction, Reduction::classical>{});
    case Reduction::dhem:
      return fn(std::integral_constant<Reduction, Reduction::dhem>{});
    case Reduction::proposed:
      break;
  }
  return fn(std::integral_constant<Reduction, Reduction::proposed>{});
}

}  // namespace polyntt
