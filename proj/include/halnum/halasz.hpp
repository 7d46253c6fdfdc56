#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halnum/constants.hpp"
#include "halnum/euler.hpp"
#include "halnum/multiplicative.hpp"

namespace halnum {

// Prime block k of the decomposition: primes p with
//   max((log x)^4, x^{1-e^{1-k}}) <= p <= min(x/2, x^{1-e^{-k}}),
// the lower edge inclusive only where the (log x)^4 clamp is active (the
// interior edges x^{1-e^{1-k}} are shared exclusively/inclusively so each
// prime lands in exactly one block).
struct PrimeBlock {
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t primes_in_block = 0;
};

// Number of blocks: ceil(log(log x / log 2)); the last block reaches x/2.
int decomposition_k_max(double x);

// Clamped [lo, hi] for block k plus whether lo is the (log x)^4 clamp.
struct BlockRange {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_inclusive = false;
};
BlockRange block_bounds(double x, int k);

// Strict partition: requires x >= 16 and (log x)^4 < x/2, else
// std::domain_error. Blocks tile the prime range [(log x)^4, x/2].
std::vector<PrimeBlock> partition_primes(const PrimeTables& tables, double x);

// Lenient variant used by the pipelines: same blocks, but an empty prime
// range (which happens for x up to ~10^4.6) is allowed; every block may
// have primes_in_block = 0, and the reassembled sum is then 0.
std::vector<PrimeBlock> make_blocks(const PrimeTables& tables, double x);

// Ascending, deduplicated checkpoints x/(pq) for every block prime p and
// prime q with pq <= x, plus x/p for the discarded small primes p < (log
// x)^4, plus x itself — one summatory sweep serves the whole decomposition.
std::vector<double> decomposition_checkpoints(const PrimeTables& tables,
                                              double x);

// S_k(x) = sum_{p in block k} [f(p) log p / log(x/p)] *
//          sum_{q prime, pq <= x} f(q) log q * S(x/(pq)),
// with S read from `table` (which must contain every x/(pq)). Empty blocks
// give 0. Accumulation: ascending p in fixed 1024-prime chunks folded in
// order; ascending q inside.
std::complex<double> compute_Sk(const Multiplicative& f,
                                const SummatoryTable& table, double x, int k,
                                const ExecPolicy& policy = {});

struct DecompositionCheck {
  std::complex<double> S_direct{};
  std::complex<double> S_reassembled{};  // (1/log x) sum_k S_k
  double defect = 0.0;
  double normalized_defect = 0.0;  // defect / (x log log x / log x)
};

// Direct S(x) against the reassembled block sum. The defect is the
// discarded small/large-prime contribution, of size O(x log log x / log x).
DecompositionCheck decomposition_check(const Multiplicative& f, double x,
                                       const ExecPolicy& policy = {});

struct BlockReport {
  int k = 0;
  double lo = 0.0;
  double hi = 0.0;
  std::uint64_t primes_in_block = 0;
  std::complex<double> S_k{};
  double trivial_ratio = 0.0;   // |S_k| / (e^{-k} x log x)
  double I1 = 0.0;              // integral of |P_k|^2 over |t| <= log^2 x
  double I2 = 0.0;              // integral of |Q_k F|^2 / |1+it|^2
  double I2_window_majorized = 0.0;
  double perron_majorant = 0.0;
  double sharp_ratio = 0.0;      // |S_k| / (x L + x)
};

double trivial_bound_check(const BlockReport& block, double x);

// x * int_{|t| <= log^2 x} |P_k Q_k F_x| / |1+it| dt + x on the grid nodes.
double perron_majorant(const Multiplicative& f, const EulerGrid& grid,
                       double x, int k, const ExecPolicy& policy = {});

// int |P_k|^2 over |t| <= log^2 x, composite trapezoid on the grid nodes.
double compute_I1(const Multiplicative& f, const EulerGrid& grid, double x,
                  int k, const ExecPolicy& policy = {});

struct I2Result {
  double I2 = 0.0;               // direct integral
  double window_majorized = 0.0; // sum_N sup_N^2/(N^2+1) * int_window |Q_k|^2
  std::vector<double> window_terms;
};

// Direct and window-majorized forms of int |Q_k F|^2 / |1+it|^2.
I2Result compute_I2(const Multiplicative& f, const EulerGrid& grid,
                    const LxResult& lx, double x, int k,
                    const ExecPolicy& policy = {});

struct HalaszReport {
  double x = 0.0;
  double grid_step = 0.0;
  double L = 0.0;
  std::complex<double> S{};
  double S_abs = 0.0;
  double bound = 0.0;          // x (L/log x) log(100 log x / L) + x loglog x/log x
  double theorem_ratio = 0.0;  // S_abs / bound
  int cutoff_k = 0;            // floor(log(100 log x / L))
  double decomposition_defect = 0.0;
  double normalized_defect = 0.0;
  double discarded_small_primes = 0.0;  // |sum_{p < (log x)^4} f(p) log p S(x/p)| / log x
  double discarded_large_primes = 0.0;  // |sum_{x/2 < p <= x} f(p) log p| / log x
  std::vector<BlockReport> blocks;
  LxResult lx;
};

// Full pipeline at one x: grid, L, S, every block's S_k / I1 / I2 / Perron
// majorant, the theorem-level ratio, and the decomposition defect.
// grid_step <= 0 resolves to auto_grid_step(x). Requires x >= 100.
HalaszReport halasz_bound(const Multiplicative& f, double x,
                          double grid_step = 0.0,
                          const ExecPolicy& policy = {});

struct SmoothVariant {
  double x = 0.0;
  double theta = 0.0;
  double S_abs = 0.0;
  double L = 0.0;
  double smooth_bound = 0.0;  // (x / log x) (L + 1)
  double ratio = 0.0;
};

// Sharper form for x^theta-smooth-supported specs: |S(x)| against
// (x/log x)(L+1). The spec must vanish on primes above x^theta (via
// smooth_cutoff or an explicit table), else std::domain_error.
SmoothVariant smooth_variant_check(const Multiplicative& f, double x,
                                   double theta,
                                   const ExecPolicy& policy = {});

// Frozen-constant regression: every violated inequality as a readable line;
// empty means the report passes.
std::vector<std::string> frozen_violations(const HalaszReport& report,
                                           const FrozenConstants& constants);

nlohmann::ordered_json halasz_report_to_json(const HalaszReport& report);

}  // namespace halnum
