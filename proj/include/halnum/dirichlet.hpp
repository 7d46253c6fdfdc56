#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "halnum/parallel.hpp"

namespace halnum {

// Uniform grid t_j = t0 + j * step, j = 0 .. count-1.
struct UniformGrid {
  double t0 = 0.0;
  double step = 0.0;
  std::size_t count = 0;
  double t(std::size_t j) const { return t0 + static_cast<double>(j) * step; }
};

// One oscillatory term amp * exp(-i * t * omega).
struct OscTerm {
  double omega = 0.0;
  std::complex<double> amp{0.0, 0.0};
};

// out[j] = sum_i amp_i exp(-i t_j omega_i) for every grid node.
//
// Evaluation is blocked: the grid is cut into fixed 2048-node blocks (the
// parallel unit), terms into fixed 512-term tiles. Within a block each tile
// seeds w_i = amp_i exp(-i t_start omega_i) once and advances by the
// per-step rotation exp(-i step omega_i), accumulating per node in a fixed
// tile/lane order. The result is a pure function of (terms, grid) —
// independent of the thread count.
void osc_sum_grid(const std::vector<OscTerm>& terms, const UniformGrid& grid,
                  std::complex<double>* out, unsigned threads);

// Reference single-point evaluation: plain ascending-index summation of
// amp_i * exp(-i t omega_i).
std::complex<double> osc_sum_point(const std::vector<OscTerm>& terms, double t);

}  // namespace halnum
