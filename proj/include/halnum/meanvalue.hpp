#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "halnum/multiplicative.hpp"

namespace halnum {

// Coefficients a_n on an ascending integer support; the prime-weighted
// polynomial is D(t) = sum_n a_n Lambda(n) n^{-1-it}, so only prime powers
// in the support contribute.
struct CoefficientFamily {
  std::vector<std::uint64_t> support;
  std::vector<std::complex<double>> a;
  std::string description;
};

// D(t) by plain ascending-index summation.
std::complex<double> prime_poly_eval(const CoefficientFamily& coeffs,
                                     const PrimeTables& tables, double t);

// Composite-trapezoid integral of |D(t)|^2 over [-T, T] on an
// exactly-covering uniform partition of at most `step` spacing. A step above
// min(0.01, 1/(4 log max_support)) raises coverage_error.
double meanvalue_lhs(const CoefficientFamily& coeffs, const PrimeTables& tables,
                  double T, double step, const ExecPolicy& policy = {});

// sum_n |a_n|^2 Lambda(n) / n.
double meanvalue_rhs(const CoefficientFamily& coeffs, const PrimeTables& tables);

struct MeanValueReport {
  double T = 0.0;
  double x = 0.0;  // max support point
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // lhs / rhs (0 when both vanish)
  double quadrature_step = 0.0;
  std::string description;
};

// Full record for one family. Support below T^2 raises std::domain_error.
// When rhs = 0: lhs <= 1e-12 reports ratio 0, anything larger is a domain
// error (the comparison is meaningless).
MeanValueReport meanvalue_report(const CoefficientFamily& coeffs,
                              const PrimeTables& tables, double T, double step,
                              const ExecPolicy& policy = {});

struct ClassicalContrast {
  double meanvalue_rhs = 0.0;          // sum |a_n|^2 Lambda(n) / n
  double lambda_squared_rhs = 0.0;  // 2T * sum |a_n|^2 Lambda(n)^2 / n^2
};

// The prime-supported mean value versus the classical bound with the extra
// Lambda factor; the contrast in scale is the point of the comparison.
ClassicalContrast classical_mv_contrast(const CoefficientFamily& coeffs,
                                        const PrimeTables& tables, double T);

// Resolution ceiling at scale x (same rule as the Euler grids).
double auto_quadrature_step(double x);

// Family builders used by the regression battery and the CLI.
CoefficientFamily single_term_family(std::uint64_t n0, std::complex<double> a);
CoefficientFamily ones_on_primes(const PrimeTables& tables, double lo, double hi);
CoefficientFamily random_steinhaus_on_primes(const PrimeTables& tables,
                                             std::uint64_t seed, double lo,
                                             double hi);
// a_q = f(q) q^{-ih} on primes q in [lo, hi].
CoefficientFamily twisted_prime_family(const Multiplicative& f, double h,
                                       double lo, double hi);

}  // namespace halnum
