#include "halnum/halasz.hpp"

#include <algorithm>
#include <cmath>

#include "halnum/dirichlet.hpp"

namespace halnum {

namespace {

constexpr std::uint64_t kPrimeChunk = 1024;  // S_k reduction chunk

double log4(double x) {
  const double l = std::log(x);
  return l * l * l * l;
}

// Index range [first, last) into tables.primes() for block k.
std::pair<std::size_t, std::size_t> block_prime_range(const PrimeTables& tables,
                                                      double x, int k) {
  const BlockRange r = block_bounds(x, k);
  if (!(r.lo <= r.hi)) return {0, 0};
  const std::size_t i0 =
      r.lo_inclusive ? tables.first_prime_geq(r.lo) : tables.first_prime_gt(r.lo);
  const std::size_t i1 = tables.first_prime_gt(r.hi);
  if (i0 >= i1) return {0, 0};
  return {i0, i1};
}

// P_k(1+it) = sum_{p in block k} f(p) log p / (p^{1+it} log(x/p)).
std::vector<OscTerm> pk_terms(const Multiplicative& f, double x, int k) {
  std::vector<OscTerm> terms;
  const auto [i0, i1] = block_prime_range(f.tables(), x, k);
  terms.reserve(i1 - i0);
  const auto& primes = f.tables().primes();
  for (std::size_t i = i0; i < i1; ++i) {
    const double p = static_cast<double>(primes[i]);
    const double lp = std::log(p);
    terms.push_back(OscTerm{lp, f.value(primes[i], 1) * (lp / (p * std::log(x / p)))});
  }
  return terms;
}

// Q_k(1+it) = sum_{q <= x^{e^{1-k}}} f(q) log q / q^{1+it}  (q prime).
std::vector<OscTerm> qk_terms(const Multiplicative& f, double x, int k) {
  const double qmax = std::min(std::pow(x, std::exp(1.0 - k)), x);
  std::vector<OscTerm> terms;
  const auto& primes = f.tables().primes();
  const std::size_t i1 = f.tables().first_prime_gt(qmax);
  terms.reserve(i1);
  for (std::size_t i = 0; i < i1; ++i) {
    const double q = static_cast<double>(primes[i]);
    const double lq = std::log(q);
    terms.push_back(OscTerm{lq, f.value(primes[i], 1) * (lq / q)});
  }
  return terms;
}

// Nodes of `grid` with |t| <= log^2 x, as an inclusive index range.
std::pair<std::size_t, std::size_t> integration_range(const EulerGrid& grid,
                                                      double x) {
  const double lx = std::log(x);
  const double bound = lx * lx;
  const double t0 = grid.t_values.front();
  const double delta = grid.grid_step;
  if (grid.t_values.front() > -bound + 1e-9 ||
      grid.t_values.back() < bound - 1e-9)
    throw coverage_error("grid does not cover |t| <= log^2 x");
  if (delta > auto_grid_step(x) * (1.0 + 1e-9))
    throw coverage_error("grid resolution too coarse for quadrature");
  std::ptrdiff_t j_lo =
      static_cast<std::ptrdiff_t>(std::ceil((-bound - t0) / delta - 1e-9));
  std::ptrdiff_t j_hi =
      static_cast<std::ptrdiff_t>(std::floor((bound - t0) / delta + 1e-9));
  j_lo = std::max<std::ptrdiff_t>(j_lo, 0);
  j_hi = std::min<std::ptrdiff_t>(j_hi,
                                  static_cast<std::ptrdiff_t>(grid.t_values.size()) - 1);
  if (j_lo > j_hi) throw coverage_error("empty quadrature range");
  return {static_cast<std::size_t>(j_lo), static_cast<std::size_t>(j_hi)};
}

// Composite trapezoid of `integrand(j)` over inclusive node range.
template <class Fn>
double trapezoid(std::size_t j_lo, std::size_t j_hi, double delta, Fn integrand) {
  double acc = 0.0;
  for (std::size_t j = j_lo; j <= j_hi; ++j) {
    const double w = (j == j_lo || j == j_hi) ? 0.5 * delta : delta;
    acc += w * integrand(j);
  }
  return acc;
}

std::vector<cplx> eval_on_grid(const std::vector<OscTerm>& terms,
                               const EulerGrid& grid, unsigned threads) {
  std::vector<cplx> vals(grid.t_values.size());
  osc_sum_grid(terms,
               UniformGrid{grid.t_values.front(), grid.grid_step,
                           grid.t_values.size()},
               vals.data(), threads);
  return vals;
}

double i1_from_values(const std::vector<cplx>& P, const EulerGrid& grid,
                      double x) {
  const auto [j_lo, j_hi] = integration_range(grid, x);
  return trapezoid(j_lo, j_hi, grid.grid_step,
                   [&](std::size_t j) { return std::norm(P[j]); });
}

I2Result i2_from_values(const std::vector<cplx>& Q, const EulerGrid& grid,
                        const LxResult& lx, double x) {
  I2Result out;
  const auto [j_lo, j_hi] = integration_range(grid, x);
  const double delta = grid.grid_step;
  out.I2 = trapezoid(j_lo, j_hi, delta, [&](std::size_t j) {
    const double t = grid.t_values[j];
    return std::norm(Q[j]) * std::norm(grid.F_values[j]) / (1.0 + t * t);
  });
  // Window majorization: |F| <= sup_N on window N and 1/|1+it|^2 <= 1/(N^2+1)
  // up to the fixed window geometry; quality is asserted up to a factor 2.
  out.window_terms.reserve(static_cast<std::size_t>(2 * lx.n_max + 1));
  const double t0 = grid.t_values.front();
  const std::size_t count = grid.t_values.size();
  double total = 0.0;
  for (int N = -lx.n_max; N <= lx.n_max; ++N) {
    const double wlo = static_cast<double>(N) - 0.5;
    const double whi = static_cast<double>(N) + 0.5;
    std::ptrdiff_t w_lo =
        static_cast<std::ptrdiff_t>(std::ceil((wlo - t0) / delta - 1e-9));
    std::ptrdiff_t w_hi =
        static_cast<std::ptrdiff_t>(std::floor((whi - t0) / delta + 1e-9));
    w_lo = std::max<std::ptrdiff_t>(w_lo, 0);
    w_hi = std::min<std::ptrdiff_t>(w_hi, static_cast<std::ptrdiff_t>(count) - 1);
    double wint = 0.0;
    if (w_lo <= w_hi)
      wint = trapezoid(static_cast<std::size_t>(w_lo),
                       static_cast<std::size_t>(w_hi), delta,
                       [&](std::size_t j) { return std::norm(Q[j]); });
    const double sup = lx.sup(N);
    const double term =
        sup * sup / (static_cast<double>(N) * static_cast<double>(N) + 1.0) * wint;
    out.window_terms.push_back(term);
    total += term;
  }
  out.window_majorized = total;
  return out;
}

double perron_from_values(const std::vector<cplx>& P, const std::vector<cplx>& Q,
                          const EulerGrid& grid, double x) {
  const auto [j_lo, j_hi] = integration_range(grid, x);
  const double integral =
      trapezoid(j_lo, j_hi, grid.grid_step, [&](std::size_t j) {
        const double t = grid.t_values[j];
        return std::abs(P[j]) * std::abs(Q[j]) * std::abs(grid.F_values[j]) /
               std::sqrt(1.0 + t * t);
      });
  return x * integral + x;
}

}  // namespace

int decomposition_k_max(double x) {
  return static_cast<int>(std::ceil(std::log(std::log(x) / std::log(2.0))));
}

BlockRange block_bounds(double x, int k) {
  if (k < 1) throw std::domain_error("block_bounds: k must be >= 1");
  const double pl4 = log4(x);
  const double inner_lo = std::pow(x, 1.0 - std::exp(1.0 - static_cast<double>(k)));
  const double inner_hi = std::pow(x, 1.0 - std::exp(-static_cast<double>(k)));
  BlockRange r;
  r.lo_inclusive = pl4 >= inner_lo;
  r.lo = r.lo_inclusive ? pl4 : inner_lo;
  r.hi = std::min(x / 2.0, inner_hi);
  return r;
}

std::vector<PrimeBlock> make_blocks(const PrimeTables& tables, double x) {
  if (!(x >= 16.0)) throw std::domain_error("blocks need x >= 16");
  if (!(x <= static_cast<double>(tables.limit())))
    throw capacity_error("blocks: x exceeds tables.limit");
  std::vector<PrimeBlock> blocks;
  const int kmax = decomposition_k_max(x);
  for (int k = 1; k <= kmax; ++k) {
    const BlockRange r = block_bounds(x, k);
    const auto [i0, i1] = block_prime_range(tables, x, k);
    blocks.push_back(PrimeBlock{k, r.lo, r.hi, static_cast<std::uint64_t>(i1 - i0)});
  }
  return blocks;
}

std::vector<PrimeBlock> partition_primes(const PrimeTables& tables, double x) {
  if (!(x >= 16.0))
    throw std::domain_error("partition_primes: x must be >= 16");
  if (log4(x) >= x / 2.0)
    throw std::domain_error(
        "partition_primes: (log x)^4 >= x/2, prime range is empty");
  return make_blocks(tables, x);
}

std::vector<double> decomposition_checkpoints(const PrimeTables& tables,
                                              double x) {
  std::vector<double> cps;
  cps.push_back(x);
  const double pl4 = log4(x);
  const auto& primes = tables.primes();
  // Discarded small primes p < (log x)^4 need S(x/p).
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = static_cast<double>(primes[i]);
    if (p >= pl4 || p > x) break;
    cps.push_back(x / p);
  }
  // Block primes need S(x/(pq)) for every prime q with pq <= x.
  const int kmax = decomposition_k_max(x);
  for (int k = 1; k <= kmax; ++k) {
    const auto [i0, i1] = block_prime_range(tables, x, k);
    for (std::size_t i = i0; i < i1; ++i) {
      const double p = static_cast<double>(primes[i]);
      for (std::size_t qi = 0; qi < primes.size(); ++qi) {
        const double pq = p * static_cast<double>(primes[qi]);
        if (pq > x) break;
        cps.push_back(x / pq);
      }
    }
  }
  std::sort(cps.begin(), cps.end());
  cps.erase(std::unique(cps.begin(), cps.end()), cps.end());
  return cps;
}

std::complex<double> compute_Sk(const Multiplicative& f,
                                const SummatoryTable& table, double x, int k,
                                const ExecPolicy& policy) {
  const auto [i0, i1] = block_prime_range(f.tables(), x, k);
  if (i0 >= i1) return cplx{0.0, 0.0};
  const auto& primes = f.tables().primes();
  const std::size_t nprimes = i1 - i0;
  const std::size_t nchunks = (nprimes + kPrimeChunk - 1) / kPrimeChunk;
  std::vector<cplx> partials(nchunks, cplx{0.0, 0.0});
  run_blocks(nchunks, policy.threads, [&](std::size_t c) {
    const std::size_t lo = i0 + c * kPrimeChunk;
    const std::size_t hi = std::min(i1, lo + kPrimeChunk);
    cplx acc{0.0, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
      const std::uint64_t p = primes[i];
      const double pd = static_cast<double>(p);
      const double lp = std::log(pd);
      cplx inner{0.0, 0.0};
      for (std::size_t qi = 0; qi < primes.size(); ++qi) {
        const double pq = pd * static_cast<double>(primes[qi]);
        if (pq > x) break;
        const double lq = std::log(static_cast<double>(primes[qi]));
        inner += f.value(primes[qi], 1) * lq * table.at(x / pq);
      }
      acc += f.value(p, 1) * (lp / std::log(x / pd)) * inner;
    }
    partials[c] = acc;
  });
  cplx total{0.0, 0.0};
  for (std::size_t c = 0; c < nchunks; ++c) total += partials[c];
  return total;
}

DecompositionCheck decomposition_check(const Multiplicative& f, double x,
                                       const ExecPolicy& policy) {
  if (!(x >= 16.0))
    throw std::domain_error("decomposition_check: x must be >= 16");
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("decomposition_check: x exceeds tables.limit");
  const auto cps = decomposition_checkpoints(f.tables(), x);
  const SummatoryTable table = summatory_table(f, cps, policy);
  DecompositionCheck out;
  out.S_direct = table.at(x);
  cplx sum{0.0, 0.0};
  const int kmax = decomposition_k_max(x);
  for (int k = 1; k <= kmax; ++k) sum += compute_Sk(f, table, x, k, policy);
  out.S_reassembled = sum / std::log(x);
  out.defect = std::abs(out.S_direct - out.S_reassembled);
  out.normalized_defect = out.defect / (x * std::log(std::log(x)) / std::log(x));
  return out;
}

double trivial_bound_check(const BlockReport& block, double x) {
  return std::abs(block.S_k) /
         (std::exp(-static_cast<double>(block.k)) * x * std::log(x));
}

double compute_I1(const Multiplicative& f, const EulerGrid& grid, double x,
                  int k, const ExecPolicy& policy) {
  const auto P = eval_on_grid(pk_terms(f, x, k), grid, policy.threads);
  return i1_from_values(P, grid, x);
}

I2Result compute_I2(const Multiplicative& f, const EulerGrid& grid,
                    const LxResult& lx, double x, int k,
                    const ExecPolicy& policy) {
  const auto Q = eval_on_grid(qk_terms(f, x, k), grid, policy.threads);
  return i2_from_values(Q, grid, lx, x);
}

double perron_majorant(const Multiplicative& f, const EulerGrid& grid,
                       double x, int k, const ExecPolicy& policy) {
  const auto P = eval_on_grid(pk_terms(f, x, k), grid, policy.threads);
  const auto Q = eval_on_grid(qk_terms(f, x, k), grid, policy.threads);
  return perron_from_values(P, Q, grid, x);
}

HalaszReport halasz_bound(const Multiplicative& f, double x, double grid_step,
                          const ExecPolicy& policy) {
  if (!(x >= 100.0))
    throw std::domain_error("halasz_bound: x must be >= 100");
  HalaszReport rep;
  rep.x = x;
  const double lx = std::log(x);

  EulerGrid grid = build_euler_grid(f, x, grid_step, policy);
  rep.grid_step = grid.grid_step;
  rep.lx = compute_L(grid);
  rep.L = rep.lx.L;

  const auto cps = decomposition_checkpoints(f.tables(), x);
  const SummatoryTable table = summatory_table(f, cps, policy);
  rep.S = table.at(x);
  rep.S_abs = std::abs(rep.S);

  rep.cutoff_k = static_cast<int>(std::floor(std::log(100.0 * lx / rep.L)));
  rep.bound = x * (rep.L / lx) * std::log(100.0 * lx / rep.L) +
              x * std::log(lx) / lx;
  rep.theorem_ratio = rep.S_abs / rep.bound;

  const auto blocks = make_blocks(f.tables(), x);
  cplx reassembled{0.0, 0.0};
  for (const PrimeBlock& b : blocks) {
    BlockReport br;
    br.k = b.k;
    br.lo = b.lo;
    br.hi = b.hi;
    br.primes_in_block = b.primes_in_block;
    br.S_k = compute_Sk(f, table, x, b.k, policy);
    reassembled += br.S_k;
    br.trivial_ratio = trivial_bound_check(br, x);
    br.sharp_ratio = std::abs(br.S_k) / (x * rep.L + x);
    const auto P = eval_on_grid(pk_terms(f, x, b.k), grid, policy.threads);
    const auto Q = eval_on_grid(qk_terms(f, x, b.k), grid, policy.threads);
    br.I1 = i1_from_values(P, grid, x);
    const I2Result i2 = i2_from_values(Q, grid, rep.lx, x);
    br.I2 = i2.I2;
    br.I2_window_majorized = i2.window_majorized;
    br.perron_majorant = perron_from_values(P, Q, grid, x);
    rep.blocks.push_back(std::move(br));
  }
  const cplx S_re = reassembled / lx;
  rep.decomposition_defect = std::abs(rep.S - S_re);
  rep.normalized_defect =
      rep.decomposition_defect / (x * std::log(lx) / lx);

  // Discarded prime diagnostics.
  const double pl4 = log4(x);
  const auto& primes = f.tables().primes();
  cplx small_sum{0.0, 0.0};
  for (std::size_t i = 0; i < primes.size(); ++i) {
    const double p = static_cast<double>(primes[i]);
    if (p >= pl4 || p > x) break;
    small_sum += f.value(primes[i], 1) * std::log(p) * table.at(x / p);
  }
  rep.discarded_small_primes = std::abs(small_sum) / lx;
  cplx large_sum{0.0, 0.0};
  for (std::size_t i = f.tables().first_prime_gt(x / 2.0);
       i < primes.size() && static_cast<double>(primes[i]) <= x; ++i) {
    // S(x/p) = f(1) = 1 here since x/p lies in [1, 2).
    large_sum += f.value(primes[i], 1) * std::log(static_cast<double>(primes[i]));
  }
  rep.discarded_large_primes = std::abs(large_sum) / lx;
  return rep;
}

SmoothVariant smooth_variant_check(const Multiplicative& f, double x,
                                   double theta, const ExecPolicy& policy) {
  if (!(x >= 100.0))
    throw std::domain_error("smooth_variant_check: x must be >= 100");
  if (!(theta > 0.0 && theta <= 1.0))
    throw std::domain_error("smooth_variant_check: theta must be in (0, 1]");
  const double y = std::pow(x, theta);
  const MultSpec& spec = f.spec();
  bool supported = spec.smooth_cutoff > 0.0 &&
                   spec.smooth_cutoff <= y * (1.0 + 1e-9);
  if (!supported && spec.kind == MultKind::Table) {
    supported = true;
    for (const auto& e : spec.table) {
      if (static_cast<double>(e.p) > y && std::abs(e.value) > 0.0)
        supported = false;
    }
  }
  if (!supported)
    throw std::domain_error(
        "smooth_variant_check: spec is not supported on x^theta-smooth integers");

  SmoothVariant out;
  out.x = x;
  out.theta = theta;
  EulerGrid grid = build_euler_grid(f, x, 0.0, policy);
  out.L = compute_L(grid).L;
  out.S_abs = std::abs(summatory(f, x, policy));
  out.smooth_bound = x / std::log(x) * (out.L + 1.0);
  out.ratio = out.S_abs / out.smooth_bound;
  return out;
}

std::vector<std::string> frozen_violations(const HalaszReport& rep,
                                           const FrozenConstants& c) {
  std::vector<std::string> v;
  char buf[256];
  auto fail = [&](const char* name, double lhs, double rhs) {
    std::snprintf(buf, sizeof(buf), "%s violated at x=%.17g: %.17g > %.17g",
                  name, rep.x, lhs, rhs);
    v.emplace_back(buf);
  };
  const double lx = std::log(rep.x);
  if (rep.normalized_defect > c.C_DEC)
    fail("C_DEC", rep.normalized_defect, c.C_DEC);
  if (rep.theorem_ratio > c.C_THM) fail("C_THM", rep.theorem_ratio, c.C_THM);
  if (rep.L > c.C_LX * lx) fail("C_LX", rep.L, c.C_LX * lx);
  const double aux_scale = rep.x * std::log(lx) / lx;
  if (rep.discarded_small_primes + rep.discarded_large_primes >
      c.C_AUX * aux_scale)
    fail("C_AUX", rep.discarded_small_primes + rep.discarded_large_primes,
         c.C_AUX * aux_scale);
  for (const BlockReport& b : rep.blocks) {
    char name[64];
    std::snprintf(name, sizeof(name), "C_TRIV[k=%d]", b.k);
    if (b.trivial_ratio > c.C_TRIV) fail(name, b.trivial_ratio, c.C_TRIV);
    if (b.k > rep.cutoff_k) continue;
    const double ek = std::exp(static_cast<double>(b.k));
    std::snprintf(name, sizeof(name), "C_I1[k=%d]", b.k);
    if (b.I1 > c.C_I1 * ek / lx) fail(name, b.I1, c.C_I1 * ek / lx);
    std::snprintf(name, sizeof(name), "C_I2[k=%d]", b.k);
    if (b.I2 > c.C_I2 * rep.L * rep.L / ek * lx)
      fail(name, b.I2, c.C_I2 * rep.L * rep.L / ek * lx);
    std::snprintf(name, sizeof(name), "C_SHARP[k=%d]", b.k);
    if (std::abs(b.S_k) > c.C_SHARP * (rep.x * rep.L + rep.x))
      fail(name, std::abs(b.S_k), c.C_SHARP * (rep.x * rep.L + rep.x));
    std::snprintf(name, sizeof(name), "C_PER[k=%d]", b.k);
    if (std::abs(b.S_k) > c.C_PER * b.perron_majorant)
      fail(name, std::abs(b.S_k), c.C_PER * b.perron_majorant);
    std::snprintf(name, sizeof(name), "CS[k=%d]", b.k);
    const double cs = rep.x * std::sqrt(b.I1 * b.I2);
    const double cs_bound = std::sqrt(c.C_I1 * c.C_I2) * rep.x * rep.L;
    if (cs > cs_bound) fail(name, cs, cs_bound);
  }
  return v;
}

nlohmann::ordered_json halasz_report_to_json(const HalaszReport& rep) {
  nlohmann::ordered_json j;
  j["x"] = rep.x;
  j["grid_step"] = rep.grid_step;
  j["L"] = rep.L;
  j["S_re"] = rep.S.real();
  j["S_im"] = rep.S.imag();
  j["S_abs"] = rep.S_abs;
  j["bound"] = rep.bound;
  j["theorem_ratio"] = rep.theorem_ratio;
  j["cutoff_k"] = rep.cutoff_k;
  j["decomposition_defect"] = rep.decomposition_defect;
  j["normalized_defect"] = rep.normalized_defect;
  j["discarded_small_primes"] = rep.discarded_small_primes;
  j["discarded_large_primes"] = rep.discarded_large_primes;
  nlohmann::ordered_json blocks = nlohmann::ordered_json::array();
  for (const BlockReport& b : rep.blocks) {
    nlohmann::ordered_json bj;
    bj["k"] = b.k;
    bj["lo"] = b.lo;
    bj["hi"] = b.hi;
    bj["primes_in_block"] = b.primes_in_block;
    bj["S_k_re"] = b.S_k.real();
    bj["S_k_im"] = b.S_k.imag();
    bj["S_k_abs"] = std::abs(b.S_k);
    bj["trivial_ratio"] = b.trivial_ratio;
    bj["I1"] = b.I1;
    bj["I2"] = b.I2;
    bj["I2_window_majorized"] = b.I2_window_majorized;
    bj["perron_majorant"] = b.perron_majorant;
    bj["sharp_ratio"] = b.sharp_ratio;
    blocks.push_back(bj);
  }
  j["blocks"] = blocks;
  j["windows"] = lx_to_json(rep.lx)["windows"];
  return j;
}

}  // namespace halnum
