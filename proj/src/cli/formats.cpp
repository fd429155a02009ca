#include <array>
#include <fstream>
#include <sstream>

#include "polyntt/cli.hpp"

namespace polyntt::cli {

namespace {

constexpr std::array<char, 4> kMagic = {'N', 'T', 'T', 'P'};
constexpr unsigned char kVersion = 1;

[[noreturn]] void fail_at(const std::string& name, std::size_t line, const std::string& what) {
  throw UsageError(name + ":" + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

BigInt parse_big(std::string_view tok, const std::string& name, std::size_t line) {
  if (!all_digits(tok)) fail_at(name, line, "expected an unsigned integer, got '" + std::string(tok) + "'");
  return BigInt(std::string(tok));
}

u64 read_le64(std::istream& in, const std::string& name, const char* what) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), 8)) {
    throw UsageError(name + ": truncated binary file while reading " + what);
  }
  u64 v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

void write_le64(std::ostream& out, u64 v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), 8);
}

PolyFile read_binary(std::istream& in, const std::string& name) {
  in.ignore(4);
  const int version = in.get();
  if (version != kVersion) {
    throw UsageError(name + ": unsupported binary version " + std::to_string(version));
  }
  PolyFile p;
  p.n = read_le64(in, name, "n");
  p.q = read_le64(in, name, "q");
  if (p.n == 0) throw UsageError(name + ": n must be positive");
  p.coeffs.reserve(p.n);
  for (u64 i = 0; i < p.n; ++i) {
    const u64 c = read_le64(in, name, "coefficients");
    if (c >= p.q) {
      throw UsageError(name + ": coefficient " + std::to_string(i) + " is not below q");
    }
    p.coeffs.emplace_back(c);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw UsageError(name + ": trailing bytes");
  return p;
}

PolyFile read_text(std::istream& in, const std::string& name) {
  PolyFile p;
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty()) continue;
    if (!have_header) {
      std::istringstream hs{std::string(s)};
      std::string tn, tq, extra;
      if (!(hs >> tn >> tq) || (hs >> extra)) fail_at(name, line, "header must be 'n q'");
      const BigInt n = parse_big(tn, name, line);
      if (n == 0 || n > BigInt(u64{1} << 32)) fail_at(name, line, "n out of range");
      p.n = static_cast<u64>(n);
      p.q = parse_big(tq, name, line);
      if (p.q < 2) fail_at(name, line, "q must be at least 2");
      have_header = true;
      continue;
    }
    if (p.coeffs.size() == p.n) fail_at(name, line, "more than n = " + std::to_string(p.n) + " coefficients");
    BigInt c = parse_big(s, name, line);
    if (c >= p.q) fail_at(name, line, "coefficient is not below q");
    p.coeffs.push_back(std::move(c));
  }
  if (!have_header) throw UsageError(name + ": empty polynomial file");
  if (p.coeffs.size() != p.n) {
    fail_at(name, line, "expected " + std::to_string(p.n) + " coefficients, found " +
                            std::to_string(p.coeffs.size()));
  }
  return p;
}

}  // namespace

PolyFile read_poly(std::istream& in, const std::string& name) {
  std::array<char, 4> head{};
  const auto start = in.tellg();
  in.read(head.data(), 4);
  const bool binary = in.gcount() == 4 && head == kMagic;
  in.clear();
  in.seekg(start);
  return binary ? read_binary(in, name) : read_text(in, name);
}

PolyFile read_poly_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path);
  return read_poly(in, path);
}

void write_poly_text(std::ostream& out, const PolyFile& p) {
  out << p.n << ' ' << p.q << '\n';
  for (const BigInt& c : p.coeffs) out << c << '\n';
}

void write_poly_binary(std::ostream& out, const PolyFile& p) {
  if (p.q > BigInt(~u64{0})) throw UsageError("binary format holds 64-bit words only; q is too large");
  out.write(kMagic.data(), 4);
  out.put(static_cast<char>(kVersion));
  write_le64(out, p.n);
  write_le64(out, static_cast<u64>(p.q));
  for (const BigInt& c : p.coeffs) write_le64(out, static_cast<u64>(c));
}

void write_poly_file(const std::string& path, const PolyFile& p, bool binary) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path);
  if (binary) {
    write_poly_binary(out, p);
  } else {
    write_poly_text(out, p);
  }
}

std::vector<NttPlan> read_plans(std::istream& in, const std::string& name) {
  std::vector<NttPlan> plans;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(raw);
    if (s.empty() || s.front() == '#') continue;
    try {
      plans.push_back(plan_from_text(s));
    } catch (const std::exception& e) {
      fail_at(name, line, e.what());
    }
  }
  if (plans.empty()) throw UsageError(name + ": no plan found");
  return plans;
}

std::vector<NttPlan> read_plan_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path);
  return read_plans(in, path);
}

}  // namespace polyntt::cli
