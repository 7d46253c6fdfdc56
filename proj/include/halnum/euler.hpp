#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include <nlohmann/json.hpp>

#include "halnum/multiplicative.hpp"

namespace halnum {

// F_x(1 + it) sampled on a symmetric uniform grid t in [-T, T],
// T = log^2 x + 1.5.
struct EulerGrid {
  double x = 0.0;
  double grid_step = 0.0;  // actual step after panel rounding
  std::vector<double> t_values;
  std::vector<std::complex<double>> F_values;
};

// L(x) data: per-window sup of |F_x(1+it)| over |t - N| <= 1/2 and the
// weighted aggregate L(x) = sqrt(sum_N sup_N^2 / (N^2 + 1)).
struct LxResult {
  double x = 0.0;
  double grid_step = 0.0;
  int n_max = 0;  // windows N = -n_max .. n_max
  std::vector<double> window_sups;
  double L = 0.0;

  double sup(int N) const { return window_sups[static_cast<std::size_t>(N + n_max)]; }
};

// Factor truncation depth: smallest k >= 1 with p^-(k+1) / (1 - 1/p) < 1e-14.
int euler_k_max(std::uint64_t p);

// Resolution ceiling for grids and quadratures at scale x.
double auto_grid_step(double x);

// Local factor 1 + sum_{k=1..k_max} f(p^k) p^{-k(1+it)}, ascending k.
std::complex<double> euler_factor(const Multiplicative& f, std::uint64_t p,
                                  double t, int k_max);

// F_x(1+it) over primes p <= x in ascending order. Factors with
// |factor| >= 1e-14 accumulate through principal logs; smaller factors
// multiply directly (so F ~ 0 is representable without log blowup).
std::complex<double> truncated_euler_product(const Multiplicative& f, double x,
                                             double t);

// Samples F_x(1+it) on the full window range. requested_step <= 0 resolves
// to auto_grid_step(x); an explicit coarser step raises coverage_error.
EulerGrid build_euler_grid(const Multiplicative& f, double x,
                           double requested_step = 0.0,
                           const ExecPolicy& policy = {});

// Window sups and L(x) from a grid. The grid must cover every window at the
// required resolution or coverage_error is raised.
LxResult compute_L(const EulerGrid& grid);

void write_grid_csv(const EulerGrid& grid, std::ostream& os);
nlohmann::ordered_json lx_to_json(const LxResult& lx);

}  // namespace halnum
