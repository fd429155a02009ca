#include <fstream>
#include <random>
#include <sstream>

#include "polyntt/cli.hpp"
#include "polyntt/polymul.hpp"

namespace polyntt::cli {

namespace {

using Status = SuiteResult::Status;

// Largest n for which the quadratic oracle is run.
constexpr u64 kNaiveLimit = 4096;

std::string cell_tag(u64 n, u64 q, u64 seed, u64 index) {
  std::ostringstream os;
  os << "n=" << n << " q=" << q << " seed=" << seed << " index=" << index;
  return os.str();
}

std::mt19937_64 cell_rng(u64 seed, u64 n, int bits) {
  std::seed_seq seq{seed, n, static_cast<u64>(bits)};
  return std::mt19937_64(seq);
}

std::vector<u64> random_vec(std::mt19937_64& rng, u64 n, u64 q) {
  std::vector<u64> v(n);
  for (auto& x : v) x = rng() % q;
  return v;
}

// Index of the first differing entry, if any.
std::optional<u64> first_diff(const std::vector<u64>& x, const std::vector<u64>& y) {
  if (x.size() != y.size()) return 0;
  for (u64 i = 0; i < x.size(); ++i) {
    if (x[i] != y[i]) return i;
  }
  return std::nullopt;
}

SuiteResult exhaustive_reduction() {
  SuiteResult r{"modarith-exhaustive", Status::passed, {}};
  ReductionStats sc, sd, sp;
  u64 checked = 0;
  for (u64 q = 3; q <= 255; q += 2) {
    const Modulus mod(q);
    for (u64 x = 0; x < q * q; ++x) {
      const u64 want = x % q;
      if (barrett_classical(x, mod, sc) != want || barrett_dhem(x, mod, sd) != want ||
          barrett_proposed(x, mod, sp) != want) {
        r.status = Status::failed;
        r.detail = "q=" + std::to_string(q) + " x=" + std::to_string(x);
        return r;
      }
      ++checked;
    }
  }
  if (sd.subtractions[2] != 0 || sp.subtractions[2] != 0) {
    r.status = Status::failed;
    r.detail = "a one-subtraction variant needed two";
    return r;
  }
  r.detail = std::to_string(checked) + " inputs";
  return r;
}

SuiteResult random_reduction(u64 samples, u64 seed) {
  SuiteResult r{"modarith-random", Status::passed, {}};
  if (samples == 0) return {r.name, Status::skipped, "no samples requested"};
  const u64 per_bits = samples * 10000;
  std::mt19937_64 rng(seed);
  for (int bits : {28, 29, 30, 62}) {
    std::uniform_int_distribution<u64> pick(u64{1} << (bits - 1), (u64{1} << bits) - 1);
    for (u64 i = 0; i < per_bits; ++i) {
      const Modulus mod(pick(rng) | 1);
      const u64 q = mod.value();
      const u64 a = rng() % q, b = rng() % q;
      const u128 x = static_cast<u128>(a) * b;
      const u64 want = reduce_builtin(x, q);
      const bool dhem_ok = !mod.has_mu_dhem() || barrett_dhem(x, mod) == want;
      if (barrett_classical(x, mod) != want || barrett_proposed(x, mod) != want || !dhem_ok) {
        return {r.name, Status::failed,
                "q=" + std::to_string(q) + " a=" + std::to_string(a) + " b=" + std::to_string(b)};
      }
    }
  }
  r.detail = std::to_string(4 * per_bits) + " products";
  return r;
}

std::vector<NttPlan> grid_plans(const VerifyOptions& opt) {
  std::vector<NttPlan> plans;
  plans.reserve(opt.grid.size());
  for (const auto& cell : opt.grid) plans.push_back(generate_plan(cell.n, cell.bits, opt.seed));
  return plans;
}

SuiteResult plan_validation(std::vector<NttPlan>& plans, const VerifyOptions& opt) {
  SuiteResult r{"plan-validation", Status::passed, {}};
  if (opt.corrupt_twiddle && !plans.empty()) {
    NttPlan& victim = plans.front();
    const u64 idx = *opt.corrupt_twiddle % victim.n;
    victim.tw_fwd[idx] = (victim.tw_fwd[idx] + 1) % victim.q();
  }
  for (const NttPlan& plan : plans) {
    try {
      validate(plan);
    } catch (const InvalidPlan& e) {
      return {r.name, Status::failed,
              "n=" + std::to_string(plan.n) + " q=" + std::to_string(plan.q()) + ": " + e.what()};
    }
  }
  r.detail = std::to_string(plans.size()) + " plans";
  return r;
}

SuiteResult roundtrip(const std::vector<NttPlan>& plans, const VerifyOptions& opt) {
  SuiteResult r{"ntt-roundtrip", Status::passed, {}};
  if (opt.samples == 0) return {r.name, Status::skipped, "no samples requested"};
  for (const NttPlan& plan : plans) {
    auto rng = cell_rng(opt.seed, plan.n, plan.mod.bits());
    for (u64 s = 0; s < opt.samples; ++s) {
      const auto a = random_vec(rng, plan.n, plan.q());
      auto x = a;
      ntt_ct(x, plan);
      intt_gs_scaled(x, plan);
      if (const auto i = first_diff(x, a)) {
        return {r.name, Status::failed, cell_tag(plan.n, plan.q(), opt.seed, *i)};
      }
    }
  }
  return r;
}

SuiteResult polymul_equality(const std::vector<NttPlan>& plans, const VerifyOptions& opt) {
  SuiteResult r{"polymul-equality", Status::passed, {}};
  if (opt.samples == 0) return {r.name, Status::skipped, "no samples requested"};
  for (const NttPlan& plan : plans) {
    auto rng = cell_rng(opt.seed ^ 0x9e3779b97f4a7c15ULL, plan.n, plan.mod.bits());
    for (u64 s = 0; s < opt.samples; ++s) {
      const auto a = random_vec(rng, plan.n, plan.q());
      const auto b = random_vec(rng, plan.n, plan.q());
      const auto ref = polymul_fused(a, b, plan);
      std::vector<std::vector<u64>> others = {polymul_ntt(a, b, plan, Backend::radix2),
                                              polymul_ntt(a, b, plan, Backend::radix4),
                                              polymul_ntt(a, b, plan, Backend::two_d)};
      if (plan.n <= kNaiveLimit) others.push_back(negacyclic_naive(a, b, plan.q()));
      for (const auto& other : others) {
        if (const auto i = first_diff(other, ref)) {
          return {r.name, Status::failed, cell_tag(plan.n, plan.q(), opt.seed, *i)};
        }
      }
    }
  }
  return r;
}

SuiteResult op_counts(const std::vector<NttPlan>& plans) {
  SuiteResult r{"op-counts", Status::passed, {}};
  for (const NttPlan& plan : plans) {
    const u64 n = plan.n;
    std::vector<u64> z(n, 0);
    OpCounter fwd;
    ntt_ct(z, plan, &fwd);
    if (fwd.modmul != radix2_modmuls(n, plan.log_n)) {
      return {r.name, Status::failed, "n=" + std::to_string(n) + ": ntt_ct modmul count"};
    }
    if (n < 4) continue;
    OpCounter unfused, fused;
    (void)polymul_ntt(z, z, plan, &unfused);
    (void)polymul_fused(z, z, plan, &fused);
    const bool ok = unfused.modmul - fused.modmul == n / 2 &&
                    unfused.addsub - fused.addsub == n / 2 &&
                    unfused.half_scalings - fused.half_scalings == n &&
                    fused.negations - unfused.negations == n / 4;
    if (!ok) return {r.name, Status::failed, "n=" + std::to_string(n) + ": fused deltas"};
  }
  return r;
}

SuiteResult rns_roundtrip(const VerifyOptions& opt) {
  SuiteResult r{"rns-roundtrip", Status::passed, {}};
  if (opt.samples == 0) return {r.name, Status::skipped, "no samples requested"};
  for (const auto& cell : opt.grid) {
    if (cell.n > 256) continue;
    const RnsBasis basis = RnsBasis::generate(cell.n, 3, 30, opt.seed);
    auto rng = cell_rng(opt.seed, cell.n, 0);
    for (u64 s = 0; s < opt.samples; ++s) {
      std::vector<std::vector<u64>> ra, rb;
      for (const NttPlan& p : basis.plans()) {
        ra.push_back(random_vec(rng, cell.n, p.q()));
        rb.push_back(random_vec(rng, cell.n, p.q()));
      }
      const auto a = reconstruct(ra, basis), b = reconstruct(rb, basis);
      if (decompose(a, basis) != ra) {
        return {r.name, Status::failed, "n=" + std::to_string(cell.n) + ": decompose/reconstruct"};
      }
      const auto prod = decompose(polymul_rns(a, b, basis), basis);
      for (std::size_t k = 0; k < basis.size(); ++k) {
        const auto want = negacyclic_naive(ra[k], rb[k], basis.prime(k));
        if (const auto i = first_diff(prod[k], want)) {
          return {r.name, Status::failed, cell_tag(cell.n, basis.prime(k), opt.seed, *i)};
        }
      }
    }
  }
  return r;
}

}  // namespace

std::vector<GridCell> default_grid() {
  std::vector<GridCell> grid;
  for (int bits : {28, 30, 62}) {
    for (u64 n = 2; n <= 1024; n *= 2) grid.push_back({n, bits});
  }
  return grid;
}

std::vector<GridCell> read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  std::vector<GridCell> grid;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    raw = raw.substr(0, raw.find('#'));
    std::istringstream ls(raw);
    GridCell cell;
    std::string extra;
    if (!(ls >> cell.n)) {
      if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw UsageError(path + ":" + std::to_string(line) + ": expected 'n bits'");
    }
    if (!(ls >> cell.bits) || (ls >> extra)) {
      throw UsageError(path + ":" + std::to_string(line) + ": expected 'n bits'");
    }
    grid.push_back(cell);
  }
  if (grid.empty()) throw UsageError(path + ": empty grid");
  return grid;
}

std::vector<SuiteResult> run_verify(const VerifyOptions& opt) {
  std::vector<SuiteResult> out;
  out.push_back(exhaustive_reduction());
  out.push_back(random_reduction(opt.samples, opt.seed));
  std::vector<NttPlan> plans = grid_plans(opt);
  out.push_back(plan_validation(plans, opt));
  if (out.back().status == Status::failed) {
    // Later suites would only echo the bad plan.
    for (const char* name : {"ntt-roundtrip", "polymul-equality", "op-counts", "rns-roundtrip"}) {
      out.push_back({name, Status::skipped, "plan validation failed"});
    }
    return out;
  }
  out.push_back(roundtrip(plans, opt));
  out.push_back(polymul_equality(plans, opt));
  out.push_back(op_counts(plans));
  out.push_back(rns_roundtrip(opt));
  return out;
}

}  // namespace polyntt::cli
