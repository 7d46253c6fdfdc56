#include "halnum/euler.hpp"

#include <cmath>
#include <ostream>

#include "halnum/dirichlet.hpp"

namespace halnum {

namespace {

constexpr double kFactorTailTol = 1e-14;  // factor truncation target
constexpr double kLogSeriesTol = 1e-18;   // log-series tail target
constexpr double kNearZero = 1e-14;       // direct-multiply threshold

// Primes below this evaluate per grid node directly; only they can have a
// factor near 0 (for p >= 17 the tail sum is at most 1/(p-1) <= 1/16).
constexpr std::uint64_t kSmallPrimeCeiling = 17;

// Local factor from cached prime-power coefficients a[k-1] = f(p^k).
std::complex<double> factor_from_coeffs(const std::vector<cplx>& a,
                                        std::uint64_t p, double t) {
  const double lp = std::log(static_cast<double>(p));
  const cplx z = std::polar(1.0 / static_cast<double>(p), -t * lp);
  cplx zk{1.0, 0.0};
  cplx s{1.0, 0.0};
  for (const cplx& ak : a) {
    zk *= z;
    s += ak * zk;
  }
  return s;
}

}  // namespace

int euler_k_max(std::uint64_t p) {
  const double pd = static_cast<double>(p);
  const double geom = 1.0 / (1.0 - 1.0 / pd);
  int k = 1;
  while (std::pow(pd, -static_cast<double>(k + 1)) * geom >= kFactorTailTol)
    ++k;
  return k;
}

double auto_grid_step(double x) {
  return std::min(0.01, 1.0 / (4.0 * std::log(x)));
}

std::complex<double> euler_factor(const Multiplicative& f, std::uint64_t p,
                                  double t, int k_max) {
  std::vector<cplx> a(static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k)
    a[static_cast<std::size_t>(k - 1)] =
        f.value(p, static_cast<std::uint32_t>(k));
  return factor_from_coeffs(a, p, t);
}

std::complex<double> truncated_euler_product(const Multiplicative& f, double x,
                                             double t) {
  if (!(x >= 2.0))
    throw std::domain_error("truncated_euler_product: x must be >= 2");
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("truncated_euler_product: x exceeds tables.limit");
  const auto& primes = f.tables().primes();
  const std::size_t np = f.tables().count_leq(x);
  cplx logsum{0.0, 0.0};
  cplx direct{1.0, 0.0};
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = primes[i];
    const cplx fac = euler_factor(f, p, t, euler_k_max(p));
    if (std::abs(fac) < kNearZero)
      direct *= fac;  // keep F ~ 0 representable without log blowup
    else
      logsum += std::log(fac);
  }
  return std::exp(logsum) * direct;
}

EulerGrid build_euler_grid(const Multiplicative& f, double x,
                           double requested_step, const ExecPolicy& policy) {
  if (!(x >= 2.0))
    throw std::domain_error("build_euler_grid: x must be >= 2");
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("build_euler_grid: x exceeds tables.limit");
  const double ceiling = auto_grid_step(x);
  double step = requested_step > 0.0 ? requested_step : ceiling;
  if (step > ceiling * (1.0 + 1e-9))
    throw coverage_error("build_euler_grid: step exceeds min(0.01, 1/(4 log x))");

  const double lx = std::log(x);
  const double T = lx * lx + 1.5;
  const std::size_t npanels =
      static_cast<std::size_t>(std::ceil(2.0 * T / step - 1e-12));
  const double delta = 2.0 * T / static_cast<double>(npanels);
  const std::size_t count = npanels + 1;

  EulerGrid grid;
  grid.x = x;
  grid.grid_step = delta;
  grid.t_values.resize(count);
  for (std::size_t j = 0; j < count; ++j)
    grid.t_values[j] = -T + static_cast<double>(j) * delta;
  grid.F_values.assign(count, cplx{0.0, 0.0});

  const auto& primes = f.tables().primes();
  const std::size_t np = f.tables().count_leq(x);

  // Split at p = 17. Large primes contribute through the log series of the
  // truncated factor, evaluated as one oscillatory sum:
  //   log(1 + sum_k a_k u^k) = sum_k b_k u^k,  u = p^{-(1+it)},
  //   b_k = a_k - (1/k) sum_{j<k} j b_j a_{k-j}.
  // Since |a_k| <= 1 the factor has no zero in |u| < 1/2, so
  // |b_k| <= 1.704 * 2.222^k and a fixed safe depth per prime follows.
  std::vector<OscTerm> terms;
  terms.reserve(np * 3 + 64);
  std::vector<cplx> a, b;
  for (std::size_t i = 0; i < np; ++i) {
    const std::uint64_t p = primes[i];
    if (p < kSmallPrimeCeiling) continue;
    const double pd = static_cast<double>(p);
    const double lp = std::log(pd);
    const double ratio = 2.222 / pd;
    int depth = 1;
    while (depth < 64 &&
           1.704 * std::pow(ratio, depth + 1) / (1.0 - ratio) >= kLogSeriesTol)
      ++depth;
    const int kmax = euler_k_max(p);
    a.assign(static_cast<std::size_t>(depth), cplx{0.0, 0.0});
    for (int k = 1; k <= kmax && k <= depth; ++k)
      a[static_cast<std::size_t>(k - 1)] =
          f.value(p, static_cast<std::uint32_t>(k));
    b.assign(static_cast<std::size_t>(depth), cplx{0.0, 0.0});
    double pk = 1.0;
    for (int k = 1; k <= depth; ++k) {
      cplx conv{0.0, 0.0};
      for (int j = 1; j < k; ++j)
        conv += static_cast<double>(j) * b[static_cast<std::size_t>(j - 1)] *
                a[static_cast<std::size_t>(k - j - 1)];
      const cplx bk =
          a[static_cast<std::size_t>(k - 1)] - conv / static_cast<double>(k);
      b[static_cast<std::size_t>(k - 1)] = bk;
      pk /= pd;
      const cplx amp = bk * pk;
      if (std::abs(amp) >= 1e-19)
        terms.push_back(OscTerm{static_cast<double>(k) * lp, amp});
    }
  }

  std::vector<cplx> kernel_log(count, cplx{0.0, 0.0});
  osc_sum_grid(terms, UniformGrid{-T, delta, count}, kernel_log.data(),
               policy.threads);

  // Small primes: cached coefficients, direct factor per node.
  std::vector<std::uint64_t> small;
  std::vector<std::vector<cplx>> small_coeffs;
  for (std::size_t i = 0; i < np && primes[i] < kSmallPrimeCeiling; ++i) {
    const std::uint64_t p = primes[i];
    const int kmax = euler_k_max(p);
    std::vector<cplx> coeffs(static_cast<std::size_t>(kmax));
    for (int k = 1; k <= kmax; ++k)
      coeffs[static_cast<std::size_t>(k - 1)] =
          f.value(p, static_cast<std::uint32_t>(k));
    small.push_back(p);
    small_coeffs.push_back(std::move(coeffs));
  }

  constexpr std::size_t kBlock = 2048;
  const std::size_t nblocks = (count + kBlock - 1) / kBlock;
  run_blocks(nblocks, policy.threads, [&](std::size_t bidx) {
    const std::size_t j0 = bidx * kBlock;
    const std::size_t j1 = std::min(count, j0 + kBlock);
    for (std::size_t j = j0; j < j1; ++j) {
      const double t = grid.t_values[j];
      cplx logsum = kernel_log[j];
      cplx direct{1.0, 0.0};
      for (std::size_t i = 0; i < small.size(); ++i) {
        const cplx fac = factor_from_coeffs(small_coeffs[i], small[i], t);
        if (std::abs(fac) < kNearZero)
          direct *= fac;
        else
          logsum += std::log(fac);
      }
      grid.F_values[j] = std::exp(logsum) * direct;
    }
  });

  return grid;
}

LxResult compute_L(const EulerGrid& grid) {
  const double x = grid.x;
  const double lx = std::log(x);
  const int n_max = static_cast<int>(std::floor(lx * lx + 1.0 + 1e-12));
  const double t0 = grid.t_values.front();
  const double t_last = grid.t_values.back();
  const double delta = grid.grid_step;
  if (t0 > -(n_max + 0.5) + 1e-9 || t_last < (n_max + 0.5) - 1e-9)
    throw coverage_error("compute_L: grid does not cover every window");
  if (delta > auto_grid_step(x) * (1.0 + 1e-9))
    throw coverage_error("compute_L: grid resolution is too coarse");

  LxResult out;
  out.x = x;
  out.grid_step = delta;
  out.n_max = n_max;
  out.window_sups.assign(static_cast<std::size_t>(2 * n_max + 1), 0.0);
  const std::size_t count = grid.F_values.size();
  double L2 = 0.0;
  for (int N = -n_max; N <= n_max; ++N) {
    const double wlo = static_cast<double>(N) - 0.5;
    const double whi = static_cast<double>(N) + 0.5;
    std::ptrdiff_t j_lo =
        static_cast<std::ptrdiff_t>(std::ceil((wlo - t0) / delta - 1e-9));
    std::ptrdiff_t j_hi =
        static_cast<std::ptrdiff_t>(std::floor((whi - t0) / delta + 1e-9));
    if (j_lo < 0) j_lo = 0;
    if (j_hi >= static_cast<std::ptrdiff_t>(count))
      j_hi = static_cast<std::ptrdiff_t>(count) - 1;
    double sup = 0.0;
    for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j)
      sup = std::max(sup, std::abs(grid.F_values[static_cast<std::size_t>(j)]));
    out.window_sups[static_cast<std::size_t>(N + n_max)] = sup;
    L2 += sup * sup / (static_cast<double>(N) * static_cast<double>(N) + 1.0);
  }
  out.L = std::sqrt(L2);
  return out;
}

void write_grid_csv(const EulerGrid& grid, std::ostream& os) {
  os << "t,re_F,im_F,abs_F\n";
  char buf[160];
  for (std::size_t j = 0; j < grid.t_values.size(); ++j) {
    const cplx F = grid.F_values[j];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n",
                  grid.t_values[j], F.real(), F.imag(), std::abs(F));
    os << buf;
  }
}

nlohmann::ordered_json lx_to_json(const LxResult& lx) {
  nlohmann::ordered_json j;
  j["x"] = lx.x;
  j["grid_step"] = lx.grid_step;
  j["L"] = lx.L;
  nlohmann::ordered_json windows = nlohmann::ordered_json::array();
  for (int N = -lx.n_max; N <= lx.n_max; ++N) {
    nlohmann::ordered_json w;
    w["N"] = N;
    w["sup"] = lx.sup(N);
    windows.push_back(w);
  }
  j["windows"] = windows;
  return j;
}

}  // namespace halnum
