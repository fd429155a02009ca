#include <algorithm>
#include <chrono>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "polyntt/cli.hpp"
#include "polyntt/polymul.hpp"

namespace polyntt::cli {

namespace {

using Clock = std::chrono::steady_clock;

// Mulmods per timed block for the scalar kernels.
constexpr u64 kBlock = 1000;

struct Samples {
  std::vector<double> ns;

  void fill(BenchRecord& r) {
    std::sort(ns.begin(), ns.end());
    r.min_ns = ns.front();
    r.mean_ns = std::accumulate(ns.begin(), ns.end(), 0.0) / static_cast<double>(ns.size());
    const std::size_t mid = ns.size() / 2;
    r.median_ns = ns.size() % 2 ? ns[mid] : (ns[mid - 1] + ns[mid]) / 2;
  }
};

template <typename Fn>
Samples time_calls(u64 reps, u64 warmup, Fn&& fn) {
  for (u64 i = 0; i < warmup; ++i) fn();
  Samples s;
  s.ns.reserve(reps);
  for (u64 i = 0; i < reps; ++i) {
    const auto t0 = Clock::now();
    fn();
    const auto t1 = Clock::now();
    s.ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
  }
  return s;
}

std::vector<u64> random_vec(std::mt19937_64& rng, u64 n, u64 q) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng() % q;
  return v;
}

std::optional<Reduction> scalar_variant(const std::string& kernel) {
  if (kernel == "reduce-builtin") return Reduction::builtin;
  if (kernel == "barrett-classical") return Reduction::classical;
  if (kernel == "barrett-dhem") return Reduction::dhem;
  if (kernel == "barrett-proposed") return Reduction::proposed;
  return std::nullopt;
}

template <Reduction V>
Samples time_mulmods(const Modulus& mod, const std::vector<u64>& xs, const std::vector<u64>& ys,
                     const BenchConfig& cfg) {
  std::vector<u64> z(xs.size());
  u64 acc = xs[0];
  auto block = [&](u64 len) {
    if (cfg.dependent) {
      for (u64 i = 0; i < len; ++i) acc = mulmod<V>(acc, ys[i], mod);
    } else {
      for (u64 i = 0; i < len; ++i) z[i] = mulmod<V>(xs[i], ys[i], mod);
    }
  };
  for (u64 i = 0; i < cfg.warmup; ++i) block(kBlock);
  Samples s;
  for (u64 done = 0; done < cfg.reps;) {
    const u64 len = std::min(kBlock, cfg.reps - done);
    const auto t0 = Clock::now();
    block(len);
    const auto t1 = Clock::now();
    s.ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count() /
                   static_cast<double>(len));
    done += len;
  }
  volatile u64 sink = acc ^ z[0];
  (void)sink;
  return s;
}

BenchRecord bench_scalar(const BenchConfig& cfg, Reduction v, const NttPlan& plan,
                         std::mt19937_64& rng) {
  if (!plan.mod.supports(v)) {
    throw UsageError("barrett-dhem needs a modulus of at most 60 bits");
  }
  BenchRecord r{cfg.kernel, cfg.n, cfg.bits, v, cfg.reps, 0, 0, 0, {}};
  const std::vector<u64> xs = random_vec(rng, kBlock, plan.q());
  std::vector<u64> ys = random_vec(rng, kBlock, plan.q());
  for (auto& y : ys) y = y ? y : 1;
  Samples s = dispatch_reduction(v, [&](auto tag) {
    return time_mulmods<decltype(tag)::value>(plan.mod, xs, ys, cfg);
  });
  s.fill(r);
  r.ops.modmul = 1;
  return r;
}

}  // namespace

const std::vector<std::string>& bench_kernels() {
  static const std::vector<std::string> names = {
      "reduce-builtin", "barrett-classical", "barrett-dhem", "barrett-proposed",
      "ntt",            "intt",              "ntt-radix4",   "ntt-2d",
      "polymul",        "polymul-fused",     "batch-ntt"};
  return names;
}

BenchRecord run_bench(const BenchConfig& cfg) {
  const auto& names = bench_kernels();
  if (std::find(names.begin(), names.end(), cfg.kernel) == names.end()) {
    throw UsageError("unknown kernel '" + cfg.kernel + "'");
  }
  if (cfg.reps == 0) throw UsageError("--reps must be at least 1");
  if (cfg.workers == 0) throw UsageError("--workers must be at least 1");

  std::mt19937_64 rng(cfg.seed);
  if (const auto v = scalar_variant(cfg.kernel)) {
    const NttPlan plan = generate_plan(cfg.n, cfg.bits, cfg.seed, Reduction::builtin);
    return bench_scalar(cfg, *v, plan, rng);
  }

  const NttPlan plan = generate_plan(cfg.n, cfg.bits, cfg.seed, cfg.variant);
  const u64 n = plan.n, q = plan.q();
  BenchRecord r{cfg.kernel, cfg.n, cfg.bits, cfg.variant, cfg.reps, 0, 0, 0, {}};
  std::vector<u64> a = random_vec(rng, n, q);
  const std::vector<u64> b = random_vec(rng, n, q);
  Samples s;

  if (cfg.kernel == "ntt") {
    s = time_calls(cfg.reps, cfg.warmup, [&] { ntt_ct(a, plan); });
    ntt_ct(a, plan, &r.ops);
  } else if (cfg.kernel == "intt") {
    s = time_calls(cfg.reps, cfg.warmup, [&] { intt_gs_scaled(a, plan); });
    intt_gs_scaled(a, plan, &r.ops);
  } else if (cfg.kernel == "ntt-radix4") {
    const Radix4Plan p4 = make_radix4_plan(plan);
    s = time_calls(cfg.reps, cfg.warmup, [&] { ntt_mixed_radix(a, p4); });
    ntt_mixed_radix(a, p4, &r.ops);
  } else if (cfg.kernel == "ntt-2d") {
    const Ntt2dPlan p2 = make_2d_plan(plan);
    s = time_calls(cfg.reps, cfg.warmup, [&] { ntt_2d(a, p2); });
    ntt_2d(a, p2, &r.ops);
  } else if (cfg.kernel == "polymul") {
    s = time_calls(cfg.reps, cfg.warmup, [&] { a = polymul_ntt(a, b, plan); });
    (void)polymul_ntt(a, b, plan, &r.ops);
  } else if (cfg.kernel == "polymul-fused") {
    if (n >= 4) {
      const FusedPlan fp = make_fused_plan(plan);
      s = time_calls(cfg.reps, cfg.warmup, [&] { a = polymul_fused(a, b, fp); });
      (void)polymul_fused(a, b, fp, &r.ops);
    } else {
      s = time_calls(cfg.reps, cfg.warmup, [&] { a = polymul_fused(a, b, plan); });
      (void)polymul_fused(a, b, plan, &r.ops);
    }
  } else {  // batch-ntt
    if (cfg.batch == 0) throw UsageError("--batch must be at least 1");
    std::vector<std::vector<u64>> rows(cfg.batch);
    for (auto& row : rows) row = random_vec(rng, n, q);
    s = time_calls(cfg.reps, cfg.warmup, [&] { batch_ntt(rows, plan, cfg.workers); });
    batch_ntt(rows, plan, cfg.workers, &r.ops);
  }
  s.fill(r);
  return r;
}

std::string csv_row(const BenchRecord& r) {
  std::ostringstream os;
  os.precision(3);
  os << std::fixed << r.kernel << ',' << r.n << ',' << r.bits << ',' << to_string(r.variant) << ','
     << r.reps << ',' << r.min_ns << ',' << r.mean_ns << ',' << r.median_ns << ',' << r.ops.modmul
     << ',' << r.ops.addsub << ',' << r.ops.half_scalings << ',' << r.ops.twiddle_loads;
  return os.str();
}

void append_csv(const std::string& path, const std::vector<BenchRecord>& rows) {
  bool fresh = true;
  {
    std::ifstream probe(path, std::ios::binary | std::ios::ate);
    fresh = !probe || probe.tellg() == 0;
  }
  std::ofstream out(path, std::ios::app);
  if (!out) throw UsageError("cannot write " + path);
  if (fresh) out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

}  // namespace polyntt::cli
