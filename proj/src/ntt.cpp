#include "polyntt/ntt.hpp"

#include <string>
#include <thread>

#include "kernels.hpp"

namespace polyntt {

using kernels::ct_stages;
using kernels::dispatch;
using kernels::gs_stages;
using kernels::Tally;

namespace {

void check_length(std::span<const u64> a, u64 n) {
  if (a.size() != n) {
    throw std::invalid_argument("polynomial has " + std::to_string(a.size()) +
                                " coefficients, plan expects " + std::to_string(n));
  }
}

void require_truncatable(const NttPlan& plan) {
  if (plan.n < 4) throw UnsupportedSize("truncated transforms need n >= 4");
}

}  // namespace

void ntt_ct(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    ct_stages<decltype(v)::value>(a, plan.tw_fwd, plan.mod, 1, plan.n, t);
  });
}

void intt_gs(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    gs_stages<decltype(v)::value, false>(a, plan.tw_inv, plan.mod, plan.n / 2, 1, t);
  });
}

void intt_gs_scaled(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    gs_stages<decltype(v)::value, true>(a, plan.tw_inv, plan.mod, plan.n / 2, 1, t);
  });
}

void scale_by(std::span<u64> a, u64 factor, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    for (auto& x : a) x = mulmod<decltype(v)::value>(x, factor, plan.mod);
    t.modmul(a.size());
  });
}

void ntt_ct_truncated(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  require_truncatable(plan);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    ct_stages<decltype(v)::value>(a, plan.tw_fwd, plan.mod, 1, plan.n / 2, t);
  });
}

void ntt_ct_final_stage(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    ct_stages<decltype(v)::value>(a, plan.tw_fwd, plan.mod, plan.n / 2, plan.n, t);
  });
}

void intt_gs_first_stage_scaled(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    gs_stages<decltype(v)::value, true>(a, plan.tw_inv, plan.mod, plan.n / 2, plan.n / 2, t);
  });
}

void intt_gs_truncated(std::span<u64> a, const NttPlan& plan, OpCounter* ctr) {
  check_length(a, plan.n);
  require_truncatable(plan);
  dispatch(plan.reduction, ctr, [&](auto v, auto t) {
    gs_stages<decltype(v)::value, true>(a, plan.tw_inv, plan.mod, plan.n / 4, 1, t);
  });
}

void ntt_ct(Polynomial& a, const NttPlan& plan, OpCounter* ctr) {
  if (a.ordering != Ordering::normal) {
    throw std::invalid_argument("forward transform expects normal-order input");
  }
  ntt_ct(std::span<u64>(a.coeffs), plan, ctr);
  a.ordering = Ordering::bit_reversed;
}

void intt_gs_scaled(Polynomial& a, const NttPlan& plan, OpCounter* ctr) {
  if (a.ordering != Ordering::bit_reversed) {
    throw std::invalid_argument("inverse transform expects bit-reversed input");
  }
  intt_gs_scaled(std::span<u64>(a.coeffs), plan, ctr);
  a.ordering = Ordering::normal;
}

// --- Radix-4 ----------------------------------------------------------------

Radix4Plan make_radix4_plan(const NttPlan& plan) {
  Radix4Plan r4{plan, {}, {}};
  const u64 half = plan.n / 2;
  const u64 q = plan.q();
  r4.pair_fwd.assign(half, 1);
  r4.pair_inv.assign(half, 1);
  for (u64 j = 1; j < half; ++j) {
    r4.pair_fwd[j] = static_cast<u64>(static_cast<u128>(plan.tw_fwd[j]) * plan.tw_fwd[2 * j] % q);
    r4.pair_inv[j] = static_cast<u64>(static_cast<u128>(plan.tw_inv[j]) * plan.tw_inv[2 * j] % q);
  }
  return r4;
}

namespace {

// Radix-2 stages m and 2m merged; k = n / (2m) >= 2.
template <Reduction V, bool On>
void radix4_forward_stage(std::span<u64> a, const Radix4Plan& p, u64 m, Tally<On> t) {
  const Modulus& mod = p.base.mod;
  const auto& tw = p.base.tw_fwd;
  const u64 k = a.size() / (2 * m);
  const u64 h = k / 2;
  const u64 root4 = tw[1];  // psi^{n/2}
  t.twiddle();
  for (u64 i = 0; i < m; ++i) {
    const u64 first = 2 * i * k;
    const u64 w1 = tw[m + i];
    const u64 w2 = tw[2 * (m + i)];
    const u64 w12 = p.pair_fwd[m + i];
    t.twiddle(3);
    for (u64 j = first; j < first + h; ++j) {
      const u64 x0 = a[j], x1 = a[j + h], x2 = a[j + k], x3 = a[j + k + h];
      const u64 t1 = mulmod<V>(x2, w1, mod);
      const u64 t2 = mulmod<V>(x1, w2, mod);
      const u64 t3 = mulmod<V>(x3, w12, mod);
      const u64 s = mod_add(t2, t3, mod);
      const u64 d = mulmod<V>(mod_sub(t2, t3, mod), root4, mod);
      const u64 e = mod_add(x0, t1, mod);
      const u64 f = mod_sub(x0, t1, mod);
      a[j] = mod_add(e, s, mod);
      a[j + h] = mod_sub(e, s, mod);
      a[j + k] = mod_add(f, d, mod);
      a[j + k + h] = mod_sub(f, d, mod);
    }
    t.modmul(4 * h);
    t.addsub(8 * h);
  }
}

// Scaled GS stages 2m and m merged; k = n / (4m).
template <Reduction V, bool On>
void radix4_inverse_stage(std::span<u64> a, const Radix4Plan& p, u64 m, Tally<On> t) {
  const Modulus& mod = p.base.mod;
  const auto& tw = p.base.tw_inv;
  const u64 k = a.size() / (4 * m);
  const u64 root4_inv = tw[1];
  const auto quarter = [&mod](u64 x) { return half_mod(half_mod(x, mod), mod); };
  t.twiddle();
  for (u64 i = 0; i < m; ++i) {
    const u64 first = 4 * i * k;
    const u64 v1 = tw[m + i];
    const u64 v2 = tw[2 * (m + i)];
    const u64 v12 = p.pair_inv[m + i];
    t.twiddle(3);
    for (u64 j = first; j < first + k; ++j) {
      const u64 x0 = a[j], x1 = a[j + k], x2 = a[j + 2 * k], x3 = a[j + 3 * k];
      const u64 s01 = mod_add(x0, x1, mod);
      const u64 d01 = mod_sub(x0, x1, mod);
      const u64 s23 = mod_add(x2, x3, mod);
      const u64 d23 = mulmod<V>(mod_sub(x2, x3, mod), root4_inv, mod);
      const u64 p0 = mod_add(d01, d23, mod);
      const u64 p1 = mod_sub(d01, d23, mod);
      a[j] = quarter(mod_add(s01, s23, mod));
      a[j + 2 * k] = quarter(mulmod<V>(mod_sub(s01, s23, mod), v1, mod));
      a[j + k] = quarter(mulmod<V>(p0, v2, mod));
      a[j + 3 * k] = quarter(mulmod<V>(p1, v12, mod));
    }
    t.modmul(4 * k);
    t.addsub(8 * k);
    t.half(8 * k);
  }
}

}  // namespace

void ntt_mixed_radix(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr) {
  check_length(a, plan.base.n);
  const u64 n = plan.base.n;
  dispatch(plan.base.reduction, ctr, [&](auto v, auto t) {
    constexpr Reduction V = decltype(v)::value;
    u64 m = 1;
    if (plan.base.log_n % 2 == 1) {
      ct_stages<V>(a, plan.base.tw_fwd, plan.base.mod, 1, 2, t);
      m = 2;
    }
    for (; m < n; m *= 4) radix4_forward_stage<V>(a, plan, m, t);
  });
}

void intt_mixed_radix(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr) {
  check_length(a, plan.base.n);
  const u64 n = plan.base.n;
  const bool odd = plan.base.log_n % 2 == 1;
  dispatch(plan.base.reduction, ctr, [&](auto v, auto t) {
    constexpr Reduction V = decltype(v)::value;
    const u64 m_last = odd ? 2 : 1;
    for (u64 m = n / 4; m >= m_last; m /= 4) radix4_inverse_stage<V>(a, plan, m, t);
    if (odd) gs_stages<V, true>(a, plan.base.tw_inv, plan.base.mod, 1, 1, t);
  });
}

void ntt_radix4(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr) {
  if (plan.base.log_n % 2 != 0) {
    throw UnsupportedSize("radix-4 transform needs an even log2(n), got n = " +
                          std::to_string(plan.base.n));
  }
  ntt_mixed_radix(a, plan, ctr);
}

void intt_radix4(std::span<u64> a, const Radix4Plan& plan, OpCounter* ctr) {
  if (plan.base.log_n % 2 != 0) {
    throw UnsupportedSize("radix-4 transform needs an even log2(n), got n = " +
                          std::to_string(plan.base.n));
  }
  intt_mixed_radix(a, plan, ctr);
}

// --- Four-step ----------------------------------------------------------------

namespace {

// Cyclic CT twiddles for length `len` with primitive len-th root `root`:
// table[m + i] = root^{(len / 2m) br_s(i)}, m = 2^s. The ct_stages loop then
// leaves sum_i x[i] root^{br(p) i} at position p.
std::vector<u64> cyclic_table(u64 len, u64 root, u64 q) {
  std::vector<u64> table(len == 1 ? 1 : len, 1);
  for (u64 m = 1, s = 0; m < len; m *= 2, ++s) {
    for (u64 i = 0; i < m; ++i) {
      const u64 e = (len / (2 * m)) * bit_reverse(i, static_cast<int>(s));
      table[m + i] = pow_mod(root, e, q);
    }
  }
  return table;
}

}  // namespace

Ntt2dPlan make_2d_plan(const NttPlan& plan) {
  Ntt2dPlan p;
  const int log_rows = (plan.log_n + 1) / 2;
  const int log_cols = plan.log_n / 2;
  const u64 q = plan.q();
  p.n = plan.n;
  p.rows = u64{1} << log_rows;
  p.cols = u64{1} << log_cols;
  p.mod = plan.mod;
  p.reduction = plan.reduction;
  p.column = build_plan_with_root(p.rows, q, pow_mod(plan.psi, p.cols, q), plan.reduction);

  const u64 row_root = pow_mod(plan.psi, 2 * p.rows, q);
  p.row_fwd = cyclic_table(p.cols, row_root, q);
  p.row_inv = cyclic_table(p.cols, pow_mod(row_root, q - 2, q), q);

  p.correct_fwd.resize(p.n);
  p.correct_inv.resize(p.n);
  for (u64 r = 0; r < p.rows; ++r) {
    const u64 k1 = bit_reverse(r, log_rows);
    const u64 step = pow_mod(plan.psi, 2 * k1 + 1, q);
    const u64 step_inv = pow_mod(step, q - 2, q);
    u64 f = 1, g = 1;
    for (u64 c = 0; c < p.cols; ++c) {
      p.correct_fwd[r * p.cols + c] = f;
      p.correct_inv[r * p.cols + c] = g;
      f = static_cast<u64>(static_cast<u128>(f) * step % q);
      g = static_cast<u64>(static_cast<u128>(g) * step_inv % q);
    }
  }
  return p;
}

void ntt_2d(std::span<u64> a, const Ntt2dPlan& p, OpCounter* ctr) {
  check_length(a, p.n);
  dispatch(p.reduction, ctr, [&](auto v, auto t) {
    constexpr Reduction V = decltype(v)::value;
    std::vector<u64> column(p.rows);
    for (u64 c = 0; c < p.cols; ++c) {
      for (u64 r = 0; r < p.rows; ++r) column[r] = a[r * p.cols + c];
      ct_stages<V>(std::span<u64>(column), p.column.tw_fwd, p.mod, 1, p.rows, t);
      for (u64 r = 0; r < p.rows; ++r) a[r * p.cols + c] = column[r];
    }
    for (u64 i = 0; i < p.n; ++i) a[i] = mulmod<V>(a[i], p.correct_fwd[i], p.mod);
    t.modmul(p.n);
    t.twiddle(p.n);
    for (u64 r = 0; r < p.rows; ++r) {
      ct_stages<V>(a.subspan(r * p.cols, p.cols), p.row_fwd, p.mod, 1, p.cols, t);
    }
  });
}

void ntt_2d_inv(std::span<u64> a, const Ntt2dPlan& p, OpCounter* ctr) {
  check_length(a, p.n);
  dispatch(p.reduction, ctr, [&](auto v, auto t) {
    constexpr Reduction V = decltype(v)::value;
    if (p.cols > 1) {
      for (u64 r = 0; r < p.rows; ++r) {
        gs_stages<V, true>(a.subspan(r * p.cols, p.cols), p.row_inv, p.mod, p.cols / 2, 1, t);
      }
    }
    for (u64 i = 0; i < p.n; ++i) a[i] = mulmod<V>(a[i], p.correct_inv[i], p.mod);
    t.modmul(p.n);
    t.twiddle(p.n);
    std::vector<u64> column(p.rows);
    for (u64 c = 0; c < p.cols; ++c) {
      for (u64 r = 0; r < p.rows; ++r) column[r] = a[r * p.cols + c];
      gs_stages<V, true>(std::span<u64>(column), p.column.tw_inv, p.mod, p.rows / 2, 1, t);
      for (u64 r = 0; r < p.rows; ++r) a[r * p.cols + c] = column[r];
    }
  });
}

u64 ntt_2d_position(u64 index, const Ntt2dPlan& plan) {
  if (index >= plan.n) throw std::out_of_range("index outside the transform");
  const int log_rows = __builtin_ctzll(plan.rows);
  const int log_cols = __builtin_ctzll(plan.cols);
  const u64 k1 = bit_reverse(index / plan.cols, log_rows);
  const u64 k2 = bit_reverse(index % plan.cols, log_cols);
  return bit_reverse(k1 + plan.rows * k2, log_rows + log_cols);
}

// --- Batch --------------------------------------------------------------------

void batch_ntt(std::vector<std::vector<u64>>& rows, const NttPlan& plan, unsigned workers,
               OpCounter* ctr) {
  if (workers == 0) throw std::invalid_argument("batch_ntt needs at least one worker");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != plan.n) {
      throw std::invalid_argument("row " + std::to_string(r) + " has " +
                                  std::to_string(rows[r].size()) + " entries, expected " +
                                  std::to_string(plan.n));
    }
  }
  const std::size_t count = rows.size();
  const std::size_t used = std::min<std::size_t>(workers, std::max<std::size_t>(count, 1));
  std::vector<OpCounter> partial(used);
  const auto run = [&](std::size_t w) {
    const std::size_t begin = count * w / used;
    const std::size_t end = count * (w + 1) / used;
    for (std::size_t r = begin; r < end; ++r) {
      ntt_ct(std::span<u64>(rows[r]), plan, ctr ? &partial[w] : nullptr);
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
}

}  // namespace polyntt
