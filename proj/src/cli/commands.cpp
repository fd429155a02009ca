#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>

#include "CLI11.hpp"
#include "polyntt/cli.hpp"
#include "polyntt/polymul.hpp"

namespace polyntt::cli {

namespace {

Reduction variant_flag(const std::string& name) {
  try {
    return parse_reduction(name);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---- params ----

struct ParamsArgs {
  u64 n = 0;
  int bits = 30;
  u64 seed = 0;
  u64 count = 1;
  std::string variant = "proposed";
  std::string out;
};

int cmd_params(const ParamsArgs& a, std::ostream& out) {
  if (a.count == 0) throw UsageError("--count must be at least 1");
  const Reduction v = variant_flag(a.variant);
  std::vector<NttPlan> plans;
  if (a.count == 1) {
    plans.push_back(generate_plan(a.n, a.bits, a.seed, v));
  } else {
    plans = RnsBasis::generate(a.n, a.count, a.bits, a.seed, v).plans();
  }
  std::string text;
  for (const NttPlan& p : plans) text += to_text(p) + "\n";
  if (a.out.empty()) {
    out << text;
    return kOk;
  }
  std::ofstream f(a.out, std::ios::trunc);
  if (!f || !(f << text)) throw UsageError("cannot write " + a.out);
  for (const NttPlan& p : plans) out << "q " << p.q() << " psi " << p.psi << '\n';
  return kOk;
}

// ---- convolve ----

struct ConvolveArgs {
  std::string plan, a, b, out;
  std::string method = "fused";
  bool binary = false;
};

std::vector<u64> narrow(const PolyFile& p) {
  std::vector<u64> v;
  v.reserve(p.coeffs.size());
  for (const BigInt& c : p.coeffs) v.push_back(static_cast<u64>(c));
  return v;
}

void check_shape(const PolyFile& p, const std::string& name, u64 n, const BigInt& q) {
  if (p.n != n) {
    throw UsageError(name + ": has n = " + std::to_string(p.n) + ", plan has n = " + std::to_string(n));
  }
  if (p.q != q) throw UsageError(name + ": modulus does not match the plan");
}

int cmd_convolve(const ConvolveArgs& args) {
  const std::vector<NttPlan> plans = read_plan_file(args.plan);
  const PolyFile a = read_poly_file(args.a);
  const PolyFile b = read_poly_file(args.b);

  PolyFile c;
  if (args.method == "rns") {
    const RnsBasis basis(plans);
    check_shape(a, args.a, basis.n(), basis.big_q());
    check_shape(b, args.b, basis.n(), basis.big_q());
    c = {basis.n(), basis.big_q(), polymul_rns(a.coeffs, b.coeffs, basis)};
  } else {
    if (plans.size() != 1) throw UsageError(args.plan + ": method " + args.method + " takes one plan line");
    const NttPlan& plan = plans.front();
    check_shape(a, args.a, plan.n, plan.q());
    check_shape(b, args.b, plan.n, plan.q());
    const auto va = narrow(a), vb = narrow(b);
    std::vector<u64> prod;
    if (args.method == "naive") {
      prod = negacyclic_naive(va, vb, plan.q());
    } else if (args.method == "ntt") {
      prod = polymul_ntt(va, vb, plan);
    } else {
      prod = polymul_fused(va, vb, plan);
    }
    c = {plan.n, plan.q(), {prod.begin(), prod.end()}};
  }
  write_poly_file(args.out, c, args.binary);
  return kOk;
}

// ---- verify ----

struct VerifyArgs {
  std::string grid = "default";
  u64 samples = 5;
  u64 seed = 0;
  std::optional<u64> corrupt;
};

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
  VerifyOptions opt;
  if (a.grid != "default") opt.grid = read_grid_file(a.grid);
  opt.samples = a.samples;
  opt.seed = a.seed;
  opt.corrupt_twiddle = a.corrupt;
  bool ok = true;
  for (const SuiteResult& r : run_verify(opt)) {
    const char* tag = r.status == SuiteResult::Status::passed   ? "PASS"
                      : r.status == SuiteResult::Status::failed ? "FAIL"
                                                                : "SKIP";
    out << tag << ' ' << r.name;
    if (!r.detail.empty()) out << ": " << r.detail;
    out << '\n';
    ok = ok && r.status != SuiteResult::Status::failed;
  }
  return ok ? kOk : kVerifyFailed;
}

// ---- bench ----

struct BenchArgs {
  std::vector<std::string> kernels;
  std::vector<u64> sizes = {1024};
  int bits = 30;
  std::string variant = "proposed";
  u64 reps = 1000;
  u64 warmup = 10;
  unsigned workers = 1;
  u64 batch = 64;
  u64 seed = 0;
  bool dependent = false;
  std::string csv;
};

int cmd_bench(const BenchArgs& a, std::ostream& out) {
  std::vector<BenchRecord> rows;
  for (const std::string& kernel : a.kernels) {
    for (u64 n : a.sizes) {
      BenchConfig cfg{kernel, n, a.bits, variant_flag(a.variant), a.reps, a.warmup,
                      a.workers, a.batch, a.seed, a.dependent};
      rows.push_back(run_bench(cfg));
    }
  }
  if (a.csv.empty()) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
  } else {
    append_csv(a.csv, rows);
  }
  return kOk;
}

// ---- count-ops ----

struct CountArgs {
  std::string plan;
  std::string method = "all";
};

int cmd_count_ops(const CountArgs& a, std::ostream& out) {
  const std::vector<NttPlan> plans = read_plan_file(a.plan);
  if (plans.size() != 1) throw UsageError(a.plan + ": count-ops takes one plan line");
  const NttPlan& plan = plans.front();
  const u64 n = plan.n;
  const std::vector<u64> z(n, 0);

  std::vector<std::string> methods;
  if (a.method == "all") {
    if (n <= 4096) methods.push_back("naive");
    methods.insert(methods.end(), {"ntt", "radix4", "2d", "fused"});
  } else {
    methods.push_back(a.method);
  }

  std::map<std::string, OpCounter> counts;
  out << std::left << std::setw(8) << "method" << std::right << std::setw(14) << "modmul"
      << std::setw(14) << "addsub" << std::setw(14) << "half" << std::setw(14) << "twiddles"
      << std::setw(12) << "negations" << '\n';
  for (const std::string& m : methods) {
    OpCounter c;
    if (m == "naive") {
      (void)negacyclic_naive(z, z, plan.q(), &c);
    } else if (m == "ntt") {
      (void)polymul_ntt(z, z, plan, &c);
    } else if (m == "radix4") {
      (void)polymul_ntt(z, z, plan, Backend::radix4, &c);
    } else if (m == "2d") {
      (void)polymul_ntt(z, z, plan, Backend::two_d, &c);
    } else {
      (void)polymul_fused(z, z, plan, &c);
    }
    counts[m] = c;
    out << std::left << std::setw(8) << m << std::right << std::setw(14) << c.modmul
        << std::setw(14) << c.addsub << std::setw(14) << c.half_scalings << std::setw(14)
        << c.twiddle_loads << std::setw(12) << c.negations << '\n';
  }

  if (!counts.count("ntt") || !counts.count("fused") || n < 4) return kOk;
  const OpCounter& u = counts["ntt"];
  const OpCounter& f = counts["fused"];
  auto delta = [](u64 to, u64 from) { return static_cast<long long>(to) - static_cast<long long>(from); };
  const long long dm = delta(f.modmul, u.modmul), da = delta(f.addsub, u.addsub),
                  dh = delta(f.half_scalings, u.half_scalings), dn = delta(f.negations, u.negations);
  out << std::showpos << "fused - ntt: modmul " << dm << " addsub " << da << " half " << dh
      << " negations " << dn << std::noshowpos << '\n';
  const long long h = static_cast<long long>(n);
  const bool ok = dm == -h / 2 && da == -h / 2 && dh == -h && dn == h / 4;
  out << (ok ? "closed forms hold" : "closed forms VIOLATED") << '\n';
  return ok ? kOk : kVerifyFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"NTT polynomial multiplication toolkit", "polyntt"};
  app.require_subcommand(1);

  ParamsArgs pa;
  auto* params = app.add_subcommand("params", "generate an NTT plan (prime, root, variant)");
  params->add_option("--n", pa.n, "transform size, a power of two")->required();
  params->add_option("--bits", pa.bits, "modulus bit length (4..62)");
  params->add_option("--seed", pa.seed, "prime and root search seed");
  params->add_option("--count", pa.count, "number of distinct primes (RNS basis)");
  params->add_option("--variant", pa.variant, "builtin|classical|dhem|proposed");
  params->add_option("--out", pa.out, "plan file; stdout when omitted");

  ConvolveArgs ca;
  auto* convolve = app.add_subcommand("convolve", "negacyclic product of two polynomial files");
  convolve->add_option("--plan", ca.plan)->required();
  convolve->add_option("--a", ca.a)->required();
  convolve->add_option("--b", ca.b)->required();
  convolve->add_option("--out", ca.out)->required();
  convolve->add_option("--method", ca.method)
      ->check(CLI::IsMember({"naive", "ntt", "fused", "rns"}));
  convolve->add_flag("--binary", ca.binary, "write the binary format");

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "run the oracle and counter suites");
  verify->add_option("--grid", va.grid, "'default' or a file of 'n bits' lines");
  verify->add_option("--samples", va.samples, "random cases per grid cell");
  verify->add_option("--seed", va.seed);
  verify->add_option("--corrupt-twiddle", va.corrupt, "flip one twiddle of the first plan")
      ->group("");

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "time kernels, emit CSV");
  bench->add_option("--kernel", ba.kernels)->required()->check(CLI::IsMember(bench_kernels()));
  bench->add_option("--n", ba.sizes);
  bench->add_option("--bits", ba.bits);
  bench->add_option("--variant", ba.variant);
  bench->add_option("--reps", ba.reps);
  bench->add_option("--warmup", ba.warmup);
  bench->add_option("--workers", ba.workers);
  bench->add_option("--batch", ba.batch, "rows for batch-ntt");
  bench->add_option("--seed", ba.seed);
  bench->add_option("--csv", ba.csv, "append rows to this file");
  bench->add_flag("--dependent", ba.dependent, "reduction kernels: time a dependent chain");

  CountArgs oa;
  auto* count = app.add_subcommand("count-ops", "operation counts per multiplication method");
  count->add_option("--plan", oa.plan)->required();
  count->add_option("--method", oa.method)
      ->check(CLI::IsMember({"all", "naive", "ntt", "radix4", "2d", "fused"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*params) return cmd_params(pa, out);
    if (*convolve) return cmd_convolve(ca);
    if (*verify) return cmd_verify(va, out);
    if (*bench) return cmd_bench(ba, out);
    return cmd_count_ops(oa, out);
  } catch (const std::exception& e) {
    // Everything reaching here is bad input: flags, files or plan parameters.
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace polyntt::cli
