#include "polyntt/params.hpp"

#include <array>
#include <random>
#include <sstream>

namespace polyntt {

namespace {

u64 mul_builtin(u64 a, u64 b, u64 q) { return static_cast<u64>(static_cast<u128>(a) * b % q); }

u64 splitmix64(u64 x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

[[noreturn]] void fail(const std::string& what) { throw InvalidPlan(what); }

}  // namespace

bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr std::array<u64, 12> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 p : kWitnesses) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : kWitnesses) {
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mul_builtin(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_power_of_two(u64 n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

int log2_exact(u64 n) {
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("transform size " + std::to_string(n) + " is not a power of two");
  }
  return __builtin_ctzll(n);
}

u64 bit_reverse(u64 i, int bits) {
  if (bits < 0 || bits > 63 || i >= (u64{1} << bits)) {
    throw std::out_of_range("bit_reverse: index " + std::to_string(i) + " does not fit in " +
                            std::to_string(bits) + " bits");
  }
  u64 r = 0;
  for (int b = 0; b < bits; ++b) {
    r = (r << 1) | ((i >> b) & 1);
  }
  return r;
}

u64 generate_prime(int bits, u64 n, u64 seed) {
  if (bits < 4 || bits > kMaxModulusBits) {
    throw std::invalid_argument("prime size must be between 4 and " +
                                std::to_string(kMaxModulusBits) + " bits, got " +
                                std::to_string(bits));
  }
  (void)log2_exact(n);
  const u64 step = 2 * n;
  const u64 top = (u64{1} << bits) - 1;
  const u64 bottom = u64{1} << (bits - 1);
  if (step >= top) {
    throw std::invalid_argument("2n = " + std::to_string(step) + " does not fit below 2^" +
                                std::to_string(bits));
  }
  const u64 k_max = top / step;
  u64 k_min = (bottom - 1 + step - 1) / step;
  if (k_min == 0) k_min = 1;
  if (k_min > k_max) {
    throw PrimeNotFound("no candidate 2n*k+1 has " + std::to_string(bits) + " bits");
  }
  const u64 range = k_max - k_min + 1;
  const u64 offset = seed == 0 ? 0 : splitmix64(seed) % range;
  u64 k = k_max - offset;
  for (u64 tried = 0; tried < range; ++tried) {
    const u64 q = step * k + 1;
    if (is_prime(q)) return q;
    k = (k == k_min) ? k_max : k - 1;
  }
  throw PrimeNotFound("no " + std::to_string(bits) + "-bit prime congruent to 1 mod " +
                      std::to_string(step));
}

u64 find_primitive_root(u64 q, u64 order, u64 seed) {
  if (!is_power_of_two(order) || order < 2) {
    throw std::invalid_argument("root order must be a power of two >= 2");
  }
  if (q < 3 || (q - 1) % order != 0) {
    throw std::invalid_argument("order " + std::to_string(order) + " does not divide q - 1");
  }
  if (!is_prime(q)) throw std::invalid_argument(std::to_string(q) + " is not prime");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<u64> pick(2, q - 1);
  const u64 cofactor = (q - 1) / order;
  // Half of all residues are non-squares, each of which yields a primitive root.
  for (int attempt = 0; attempt < 4096; ++attempt) {
    const u64 psi = pow_mod(pick(rng), cofactor, q);
    if (pow_mod(psi, order / 2, q) == q - 1) return psi;
  }
  throw std::runtime_error("primitive root search did not converge");
}

NttPlan build_plan_with_root(u64 n, u64 q, u64 psi, Reduction reduction) {
  NttPlan plan;
  plan.n = n;
  try {
    plan.log_n = log2_exact(n);
    plan.mod = Modulus(q);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (n < 2) fail("transform size must be at least 2");
  if (!is_prime(q)) fail(std::to_string(q) + " is not prime");
  if ((q - 1) % (2 * n) != 0) {
    fail("2n = " + std::to_string(2 * n) + " does not divide q - 1 for q = " + std::to_string(q));
  }
  if (psi == 0 || psi >= q) fail("root out of range");
  plan.psi = psi;
  plan.psi_inv = pow_mod(psi, q - 2, q);
  plan.omega = mul_builtin(psi, psi, q);
  plan.n_inv = pow_mod(n % q, q - 2, q);
  plan.reduction = reduction;

  std::vector<u64> pw(n), pw_inv(n);
  pw[0] = pw_inv[0] = 1;
  for (u64 i = 1; i < n; ++i) {
    pw[i] = mul_builtin(pw[i - 1], psi, q);
    pw_inv[i] = mul_builtin(pw_inv[i - 1], plan.psi_inv, q);
  }
  plan.tw_fwd.resize(n);
  plan.tw_inv.resize(n);
  for (u64 i = 0; i < n; ++i) {
    const u64 r = bit_reverse(i, plan.log_n);
    plan.tw_fwd[i] = pw[r];
    plan.tw_inv[i] = pw_inv[r];
  }
  validate(plan);
  return plan;
}

NttPlan build_plan(u64 n, u64 q, Reduction reduction, u64 seed) {
  try {
    (void)log2_exact(n);
    if (!is_prime(q)) fail(std::to_string(q) + " is not prime");
    return build_plan_with_root(n, q, find_primitive_root(q, 2 * n, seed), reduction);
  } catch (const InvalidPlan&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
}

NttPlan generate_plan(u64 n, int bits, u64 seed, Reduction reduction) {
  return build_plan(n, generate_prime(bits, n, seed), reduction, seed);
}

void validate(const NttPlan& plan) {
  const u64 n = plan.n;
  const u64 q = plan.q();
  if (n < 2 || !is_power_of_two(n)) fail("n = " + std::to_string(n) + " is not a power of two >= 2");
  if (plan.log_n != log2_exact(n)) fail("log_n does not match n");
  if (!is_prime(q)) fail("q = " + std::to_string(q) + " is not prime");
  if ((q - 1) % (2 * n) != 0) fail("2n does not divide q - 1");
  if (!plan.mod.supports(plan.reduction)) {
    fail("reduction '" + std::string(to_string(plan.reduction)) + "' cannot handle a " +
         std::to_string(plan.mod.bits()) + "-bit modulus");
  }
  if (plan.psi == 0 || plan.psi >= q) fail("psi out of range");
  if (pow_mod(plan.psi, 2 * n, q) != 1) fail("psi^(2n) != 1");
  if (pow_mod(plan.psi, n, q) != q - 1) fail("psi^n != -1: psi is not a primitive 2n-th root");
  if (mul_builtin(plan.psi, plan.psi_inv, q) != 1) fail("psi * psi_inv != 1");
  if (plan.omega != mul_builtin(plan.psi, plan.psi, q)) fail("omega != psi^2");
  if (mul_builtin(n % q, plan.n_inv, q) != 1) fail("n * n_inv != 1");
  if (plan.tw_fwd.size() != n || plan.tw_inv.size() != n) fail("twiddle tables must hold n entries");
  if (plan.tw_fwd[0] != 1 || plan.tw_inv[0] != 1) fail("twiddle tables must start with 1");
  for (u64 i = 0; i < n; ++i) {
    if (plan.tw_fwd[i] >= q || plan.tw_inv[i] >= q ||
        mul_builtin(plan.tw_fwd[i], plan.tw_inv[i], q) != 1) {
      fail("twiddle inverse-pair check failed at index " + std::to_string(i));
    }
  }
  // Inverse pairs alone miss a consistent corruption of both tables.
  u64 power = 1;
  std::vector<u64> pw(n);
  for (u64 i = 0; i < n; ++i) {
    pw[i] = power;
    power = mul_builtin(power, plan.psi, q);
  }
  for (u64 i = 0; i < n; ++i) {
    if (plan.tw_fwd[i] != pw[bit_reverse(i, plan.log_n)]) {
      fail("tw_fwd[" + std::to_string(i) + "] is not psi^br(i)");
    }
  }
}

std::string to_text(const NttPlan& plan) {
  std::ostringstream os;
  os << plan.n << ' ' << plan.q() << ' ' << plan.psi << ' ' << to_string(plan.reduction);
  return os.str();
}

NttPlan plan_from_text(std::string_view line) {
  std::istringstream is{std::string(line)};
  u64 n = 0, q = 0, psi = 0;
  std::string variant, extra;
  if (!(is >> n >> q >> psi >> variant)) fail("plan line must read 'n q psi variant'");
  if (is >> extra) fail("trailing data after plan line: '" + extra + "'");
  Reduction r;
  try {
    r = parse_reduction(variant);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return build_plan_with_root(n, q, psi, r);
}

}  // namespace polyntt
