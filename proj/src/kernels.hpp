// Stage loops shared by the transform and multiplication kernels. Private to
// the library.

#pragma once

#include <span>

#include "polyntt/modarith.hpp"
#include "polyntt/ntt.hpp"

namespace polyntt::kernels {

/// Counter hooks. Tally<false> compiles to nothing.
template <bool On>
struct Tally {
  OpCounter* c = nullptr;
  void modmul(u64 k = 1) const noexcept {
    if constexpr (On) c->modmul += k;
  }
  void addsub(u64 k = 1) const noexcept {
    if constexpr (On) c->addsub += k;
  }
  void half(u64 k = 1) const noexcept {
    if constexpr (On) c->half_scalings += k;
  }
  void twiddle(u64 k = 1) const noexcept {
    if constexpr (On) c->twiddle_loads += k;
  }
  void negation(u64 k = 1) const noexcept {
    if constexpr (On) c->negations += k;
  }
};

/// Calls fn(integral_constant<Reduction>, Tally<bool>) for the runtime choice.
template <typename Fn>
void dispatch(Reduction v, OpCounter* ctr, Fn&& fn) {
  dispatch_reduction(v, [&](auto variant) {
    if (ctr != nullptr) {
      fn(variant, Tally<true>{ctr});
    } else {
      fn(variant, Tally<false>{});
    }
  });
}

/// Merged CT stages m = m_begin, 2 m_begin, ... while m < m_end.
/// Stage m has m groups of 2k entries, k = n / (2m), twiddle tw[m + i].
template <Reduction V, bool On>
void ct_stages(std::span<u64> a, std::span<const u64> tw, const Modulus& mod, u64 m_begin,
               u64 m_end, Tally<On> t) {
  const u64 n = a.size();
  for (u64 m = m_begin; m < m_end; m *= 2) {
    const u64 k = n / (2 * m);
    for (u64 i = 0; i < m; ++i) {
      const u64 first = 2 * i * k;
      const u64 xi = tw[m + i];
      t.twiddle();
      for (u64 j = first; j < first + k; ++j) {
        const u64 u = a[j];
        const u64 v = mulmod<V>(a[j + k], xi, mod);
        a[j] = mod_add(u, v, mod);
        a[j + k] = mod_sub(u, v, mod);
      }
      t.modmul(k);
      t.addsub(2 * k);
    }
  }
}

/// Merged GS stages m = m_begin, m_begin / 2, ... while m >= m_last.
/// With Scaled, both butterfly outputs are halved.
template <Reduction V, bool Scaled, bool On>
void gs_stages(std::span<u64> a, std::span<const u64> tw, const Modulus& mod, u64 m_begin,
               u64 m_last, Tally<On> t) {
  const u64 n = a.size();
  for (u64 m = m_begin; m >= m_last && m >= 1; m /= 2) {
    const u64 k = n / (2 * m);
    for (u64 i = 0; i < m; ++i) {
      const u64 first = 2 * i * k;
      const u64 xi = tw[m + i];
      t.twiddle();
      for (u64 j = first; j < first + k; ++j) {
        const u64 u = a[j];
        const u64 v = a[j + k];
        u64 sum = mod_add(u, v, mod);
        u64 prod = mulmod<V>(mod_sub(u, v, mod), xi, mod);
        if constexpr (Scaled) {
          sum = half_mod(sum, mod);
          prod = half_mod(prod, mod);
        }
        a[j] = sum;
        a[j + k] = prod;
      }
      t.modmul(k);
      t.addsub(2 * k);
      if constexpr (Scaled) t.half(2 * k);
    }
    if (m == 1) break;
  }
}

}  // namespace polyntt::kernels
