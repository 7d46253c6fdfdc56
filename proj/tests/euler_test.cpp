#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "halnum/euler.hpp"

using namespace halnum;

namespace {
const PrimeTables& tables() {
  static const PrimeTables t = build_tables(2'000'000);
  return t;
}

// Replicates the documented window scan so compute_L can be re-derived
// independently from the same grid: windows N = -n_max..n_max, window N
// covering |t - N| <= 1/2 with half-integer endpoints included.
LxResult recheck_L(const EulerGrid& grid) {
  LxResult out;
  out.x = grid.x;
  out.grid_step = grid.grid_step;
  out.n_max = static_cast<int>(
      std::floor(std::log(grid.x) * std::log(grid.x) + 1.0 + 1e-12));
  double sum = 0.0;
  for (int N = -out.n_max; N <= out.n_max; ++N) {
    const double t0 = grid.t_values.front();
    const auto lo = static_cast<std::size_t>(
        std::ceil((N - 0.5 - t0) / grid.grid_step - 1e-9));
    const auto hi = static_cast<std::size_t>(
        std::floor((N + 0.5 - t0) / grid.grid_step + 1e-9));
    double sup = 0.0;
    for (std::size_t j = lo; j <= hi; ++j)
      sup = std::max(sup, std::abs(grid.F_values[j]));
    out.window_sups.push_back(sup);
    sum += sup * sup / (1.0 + static_cast<double>(N) * N);
  }
  out.L = std::sqrt(sum);
  return out;
}
}  // namespace

TEST_CASE("factor truncation depth follows the 1e-14 tail rule") {
  CHECK(euler_k_max(2) == 47);
  CHECK(euler_k_max(3) == 29);
  // Depth drops to 1 just above 1e7 where p^-2/(1-1/p) crosses 1e-14.
  CHECK(euler_k_max(9999991) == 2);
  CHECK(euler_k_max(10000019) == 1);
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 101ULL, 65537ULL}) {
    const int k = euler_k_max(p);
    const double dp = static_cast<double>(p);
    CHECK(std::pow(dp, -(k + 1)) / (1.0 - 1.0 / dp) < 1e-14);
    if (k > 1) CHECK(std::pow(dp, -k) / (1.0 - 1.0 / dp) >= 1e-14);
  }
}

TEST_CASE("f = 1 at x = 10, t = 0 gives the exact rational product 35/8") {
  const Multiplicative f(MultSpec::one(), tables());
  const cplx F = truncated_euler_product(f, 10.0, 0.0);
  CHECK(std::abs(F - cplx{4.375, 0.0}) <= 1e-12);
}

TEST_CASE("a factor below the near-zero threshold multiplies exactly") {
  // f(2^k) = -1 for k = 1..47 makes the local factor at t = 0 collapse to
  // 1 - sum 2^-k = 2^-47 exactly in binary arithmetic, which is below the
  // 1e-14 near-zero threshold and must bypass the principal-log path.
  MultSpec s;
  s.kind = MultKind::Table;
  s.extension = ExtensionRule::Prescribed;
  for (std::uint32_t k = 1; k <= 47; ++k)
    s.table.push_back({2, k, cplx{-1.0, 0.0}});
  const Multiplicative f(s, tables());
  const cplx F = truncated_euler_product(f, 100.0, 0.0);
  CHECK(F.real() == std::ldexp(1.0, -47));
  CHECK(std::abs(F.imag()) == 0.0);
  CHECK(std::abs(F) < 1e-14);
}

TEST_CASE("f = 1 product at t = 0 tracks the e^gamma log x law") {
  const double e_gamma = 1.7810724179901980;
  const Multiplicative f(MultSpec::one(), tables());
  for (double x : {1e4, 1e5}) {
    const double F = truncated_euler_product(f, x, 0.0).real();
    const double want = e_gamma * std::log(x);
    INFO("x=", x, " F=", F, " e^gamma log x=", want);
    CHECK(std::abs(F - want) <= 0.05 * want);
  }
}

TEST_CASE("grid values match the single-point product") {
  const Multiplicative f(MultSpec::random_steinhaus(1), tables());
  const EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
  REQUIRE(grid.t_values.size() == grid.F_values.size());
  const std::size_t n = grid.t_values.size();
  for (std::size_t j = 0; j < n; j += n / 25) {
    const cplx direct = truncated_euler_product(f, 1e4, grid.t_values[j]);
    INFO("t=", grid.t_values[j]);
    CHECK(std::abs(grid.F_values[j] - direct) <=
          1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("grid range covers [-T, T] with the auto resolution") {
  const Multiplicative f(MultSpec::one(), tables());
  const EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
  const double T = std::log(1e4) * std::log(1e4) + 1.5;
  CHECK(grid.t_values.front() == doctest::Approx(-T).epsilon(1e-12));
  CHECK(grid.t_values.back() == doctest::Approx(T).epsilon(1e-12));
  CHECK(grid.grid_step <= std::min(0.01, 1.0 / (4.0 * std::log(1e4))) *
                              (1.0 + 1e-12));
  CHECK(grid.grid_step > 0.009);
  CHECK(auto_grid_step(1e4) == 0.01);
  CHECK(auto_grid_step(std::exp(30.0)) == doctest::Approx(1.0 / 120.0));
}

TEST_CASE("conjugation symmetry for real-valued specs") {
  const Multiplicative f(MultSpec::moebius(), tables());
  const EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
  const std::size_t n = grid.t_values.size();
  for (std::size_t j = 0; j < n; j += 37) {
    const cplx a = grid.F_values[j];
    const cplx b = grid.F_values[n - 1 - j];
    CHECK(std::abs(b - std::conj(a)) <= 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("|F| never exceeds the Euler-product majorant") {
  const MultSpec specs[] = {MultSpec::random_steinhaus(2), MultSpec::moebius()};
  for (const MultSpec& spec : specs) {
    const Multiplicative f(spec, tables());
    const EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
    double maj = 1.0;
    for (std::uint32_t p : tables().primes()) {
      if (p > 1e4) break;
      maj /= 1.0 - 1.0 / static_cast<double>(p);
    }
    double worst = 0.0;
    for (const cplx& v : grid.F_values) worst = std::max(worst, std::abs(v));
    INFO(spec.label());
    CHECK(worst <= maj * (1.0 + 1e-9));
  }
}

TEST_CASE("L for the point mass at n = 1 approaches pi coth pi") {
  // Empty table: f(n) = [n = 1], so F = 1 identically and
  // L^2 = sum_{|N| <= n_max} 1/(N^2+1) -> pi coth(pi). At x = 2e6 the
  // truncation tail 2 atan(1/(n_max + 1/2)) is below 1e-2.
  MultSpec s;
  s.kind = MultKind::Table;
  s.extension = ExtensionRule::Prescribed;
  const Multiplicative f(s, tables());
  const EulerGrid grid = build_euler_grid(f, 2e6, 0.0);
  for (const cplx& v : grid.F_values) REQUIRE(v == cplx{1.0, 0.0});
  const LxResult lx = compute_L(grid);
  const double pi_coth_pi = std::numbers::pi / std::tanh(std::numbers::pi);
  CHECK(std::abs(lx.L * lx.L - pi_coth_pi) < 1e-2);
  for (int N = -lx.n_max; N <= lx.n_max; ++N) CHECK(lx.sup(N) == 1.0);
}

TEST_CASE("compute_L equals an independent window re-scan exactly") {
  const MultSpec specs[] = {MultSpec::random_steinhaus(4), MultSpec::one()};
  for (const MultSpec& spec : specs) {
    const Multiplicative f(spec, tables());
    const EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
    const LxResult got = compute_L(grid);
    const LxResult want = recheck_L(grid);
    REQUIRE(got.n_max == want.n_max);
    REQUIRE(got.window_sups.size() == want.window_sups.size());
    for (std::size_t i = 0; i < got.window_sups.size(); ++i)
      CHECK(got.window_sups[i] == want.window_sups[i]);
    CHECK(got.L == want.L);
  }
}

TEST_CASE("L is stable under grid refinement") {
  const Multiplicative f(MultSpec::random_steinhaus(1), tables());
  const EulerGrid coarse = build_euler_grid(f, 1e4, 0.0);
  const EulerGrid fine = build_euler_grid(f, 1e4, coarse.grid_step / 2.0);
  const double a = compute_L(coarse).L;
  const double b = compute_L(fine).L;
  CHECK(std::abs(a - b) <= 1e-2 * std::max(a, b));
  CHECK(b <= a * (1.0 + 1e-2));
  CHECK(a <= b * (1.0 + 1e-2));
}

TEST_CASE("coverage and resolution violations are rejected") {
  const Multiplicative f(MultSpec::one(), tables());
  CHECK_THROWS_AS(build_euler_grid(f, 1e4, 0.5), coverage_error);
  EulerGrid grid = build_euler_grid(f, 1e4, 0.0);
  {
    EulerGrid truncated = grid;
    truncated.t_values.resize(truncated.t_values.size() - 1000);
    truncated.F_values.resize(truncated.t_values.size());
    CHECK_THROWS_AS(compute_L(truncated), coverage_error);
  }
  {
    EulerGrid coarse = grid;
    coarse.grid_step = 0.02;  // claims a step above the ceiling
    CHECK_THROWS_AS(compute_L(coarse), coverage_error);
  }
}

TEST_CASE("domain and capacity guards") {
  const Multiplicative f(MultSpec::one(), tables());
  CHECK_THROWS_AS(truncated_euler_product(f, 1.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(truncated_euler_product(f, 4e6, 0.0), capacity_error);
  CHECK_THROWS_AS(build_euler_grid(f, 4e6, 0.0), capacity_error);
}

TEST_CASE("grids are bit-identical across thread counts") {
  const Multiplicative f(MultSpec::random_steinhaus(6), tables());
  ExecPolicy p1{1, 65536}, p4{4, 65536};
  const EulerGrid a = build_euler_grid(f, 1e4, 0.0, p1);
  const EulerGrid b = build_euler_grid(f, 1e4, 0.0, p4);
  REQUIRE(a.F_values.size() == b.F_values.size());
  CHECK(a.t_values == b.t_values);
  for (std::size_t j = 0; j < a.F_values.size(); ++j) {
    CHECK(a.F_values[j].real() == b.F_values[j].real());
    CHECK(a.F_values[j].imag() == b.F_values[j].imag());
  }
}
