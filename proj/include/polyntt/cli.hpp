#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "polyntt/ntt.hpp"
#include "polyntt/params.hpp"
#include "polyntt/rns.hpp"

namespace polyntt::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2 };

/// Bad flags or malformed input. Always reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---- file formats ----

/// Coefficients are kept as big integers so one format covers both single
/// primes and RNS products.
struct PolyFile {
  u64 n = 0;
  BigInt q;
  std::vector<BigInt> coeffs;
};

/// Text ("n q" then n lines) or binary ("NTTP" magic), picked by sniffing.
PolyFile read_poly(std::istream& in, const std::string& name);
PolyFile read_poly_file(const std::string& path);
void write_poly_text(std::ostream& out, const PolyFile& p);
/// Layout: "NTTP", version byte 1, n, q, then n words, all little-endian u64.
void write_poly_binary(std::ostream& out, const PolyFile& p);
void write_poly_file(const std::string& path, const PolyFile& p, bool binary);

/// One plan per non-blank line; several lines describe an RNS basis.
std::vector<NttPlan> read_plans(std::istream& in, const std::string& name);
std::vector<NttPlan> read_plan_file(const std::string& path);

// ---- benchmarks ----

inline constexpr std::string_view kCsvHeader =
    "kernel,n,bits,variant,reps,min_ns,mean_ns,median_ns,modmul,addsub,half,twiddle_loads";

struct BenchConfig {
  std::string kernel;
  u64 n = 1024;
  int bits = 30;
  Reduction variant = Reduction::proposed;
  u64 reps = 1000;
  u64 warmup = 10;
  unsigned workers = 1;
  u64 batch = 64;
  u64 seed = 0;
  bool dependent = false;  // scalar kernels: chain each product into the next
};

struct BenchRecord {
  std::string kernel;
  u64 n = 0;
  int bits = 0;
  Reduction variant = Reduction::proposed;
  u64 reps = 0;
  double min_ns = 0, mean_ns = 0, median_ns = 0;
  OpCounter ops;  // one invocation of the kernel
};

const std::vector<std::string>& bench_kernels();

/// Scalar reduction kernels time blocks of mulmods and report the time per
/// operation: independent products by default, a dependent chain when
/// cfg.dependent is set. The other kernels time one call per repetition.
BenchRecord run_bench(const BenchConfig& cfg);
std::string csv_row(const BenchRecord& r);
/// Writes the header only when the file is new or empty.
void append_csv(const std::string& path, const std::vector<BenchRecord>& rows);

// ---- verification ----

struct GridCell {
  u64 n = 0;
  int bits = 0;
};

std::vector<GridCell> default_grid();
/// "n bits" per line, '#' starts a comment.
std::vector<GridCell> read_grid_file(const std::string& path);

struct SuiteResult {
  enum class Status { passed, failed, skipped };
  std::string name;
  Status status = Status::passed;
  std::string detail;
};

struct VerifyOptions {
  std::vector<GridCell> grid = default_grid();
  u64 samples = 5;
  u64 seed = 0;
  std::optional<u64> corrupt_twiddle;  // mutation test hook
};

std::vector<SuiteResult> run_verify(const VerifyOptions& opt);

// ---- entry point ----

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace polyntt::cli
