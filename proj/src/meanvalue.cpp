#include "halnum/meanvalue.hpp"

#include <algorithm>
#include <cmath>

#include "halnum/dirichlet.hpp"
#include "halnum/euler.hpp"
#include "halnum/rng.hpp"

namespace halnum {

namespace {

void validate_family(const CoefficientFamily& coeffs,
                     const PrimeTables& tables) {
  if (coeffs.support.size() != coeffs.a.size())
    throw std::domain_error("coefficient family: support/a size mismatch");
  for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
    if (i > 0 && coeffs.support[i] <= coeffs.support[i - 1])
      throw std::domain_error("coefficient family: support must ascend");
    if (coeffs.support[i] < 1 || coeffs.support[i] > tables.limit())
      throw capacity_error("coefficient family: support exceeds tables.limit");
  }
}

std::vector<OscTerm> weighted_terms(const CoefficientFamily& coeffs,
                                    const PrimeTables& tables) {
  std::vector<OscTerm> terms;
  terms.reserve(coeffs.support.size());
  for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
    const std::uint64_t n = coeffs.support[i];
    const double lam = von_mangoldt(tables, n);
    if (lam == 0.0) continue;
    terms.push_back(OscTerm{std::log(static_cast<double>(n)),
                            coeffs.a[i] * (lam / static_cast<double>(n))});
  }
  return terms;
}

}  // namespace

double auto_quadrature_step(double x) { return auto_grid_step(x); }

std::complex<double> prime_poly_eval(const CoefficientFamily& coeffs,
                                     const PrimeTables& tables, double t) {
  validate_family(coeffs, tables);
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
    const std::uint64_t n = coeffs.support[i];
    const double lam = von_mangoldt(tables, n);
    if (lam == 0.0) continue;
    const double ln = std::log(static_cast<double>(n));
    acc += coeffs.a[i] * (lam / static_cast<double>(n)) *
           std::polar(1.0, -t * ln);
  }
  return acc;
}

double meanvalue_lhs(const CoefficientFamily& coeffs, const PrimeTables& tables,
                  double T, double step, const ExecPolicy& policy) {
  validate_family(coeffs, tables);
  if (!(T > 0.0)) throw std::domain_error("meanvalue_lhs: T must be > 0");
  const auto terms = weighted_terms(coeffs, tables);
  if (terms.empty()) return 0.0;
  const double xsup = static_cast<double>(coeffs.support.back());
  const double ceiling = auto_quadrature_step(std::max(xsup, 2.0));
  double delta_req = step > 0.0 ? step : ceiling;
  if (delta_req > ceiling * (1.0 + 1e-9))
    throw coverage_error("meanvalue_lhs: quadrature step too coarse for support");

  const std::size_t npanels =
      static_cast<std::size_t>(std::ceil(2.0 * T / delta_req - 1e-12));
  const double delta = 2.0 * T / static_cast<double>(npanels);
  const std::size_t count = npanels + 1;
  std::vector<std::complex<double>> vals(count);
  osc_sum_grid(terms, UniformGrid{-T, delta, count}, vals.data(),
               policy.threads);
  // Composite trapezoid, ascending nodes.
  double integral = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double w = (j == 0 || j == count - 1) ? 0.5 * delta : delta;
    integral += w * std::norm(vals[j]);
  }
  return integral;
}

double meanvalue_rhs(const CoefficientFamily& coeffs, const PrimeTables& tables) {
  validate_family(coeffs, tables);
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
    const std::uint64_t n = coeffs.support[i];
    const double lam = von_mangoldt(tables, n);
    if (lam == 0.0) continue;
    acc += std::norm(coeffs.a[i]) * lam / static_cast<double>(n);
  }
  return acc;
}

MeanValueReport meanvalue_report(const CoefficientFamily& coeffs,
                              const PrimeTables& tables, double T, double step,
                              const ExecPolicy& policy) {
  validate_family(coeffs, tables);
  if (!(T > 0.0)) throw std::domain_error("meanvalue_report: T must be > 0");
  for (std::uint64_t n : coeffs.support) {
    if (static_cast<double>(n) < T * T - 1e-9)
      throw std::domain_error("meanvalue_report: support must lie in [T^2, x]");
  }
  MeanValueReport out;
  out.T = T;
  out.x = coeffs.support.empty() ? 0.0
                                 : static_cast<double>(coeffs.support.back());
  out.description = coeffs.description;
  const double xeff = std::max(out.x, 2.0);
  out.quadrature_step = step > 0.0 ? step : auto_quadrature_step(xeff);
  out.lhs = meanvalue_lhs(coeffs, tables, T, step, policy);
  out.rhs = meanvalue_rhs(coeffs, tables);
  if (out.rhs == 0.0) {
    if (out.lhs <= 1e-12) {
      out.ratio = 0.0;
    } else {
      throw std::domain_error(
          "meanvalue_report: rhs vanishes but lhs does not; ratio undefined");
    }
  } else {
    out.ratio = out.lhs / out.rhs;
  }
  return out;
}

ClassicalContrast classical_mv_contrast(const CoefficientFamily& coeffs,
                                        const PrimeTables& tables, double T) {
  validate_family(coeffs, tables);
  ClassicalContrast out;
  out.meanvalue_rhs = meanvalue_rhs(coeffs, tables);
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs.support.size(); ++i) {
    const std::uint64_t n = coeffs.support[i];
    const double lam = von_mangoldt(tables, n);
    if (lam == 0.0) continue;
    const double nd = static_cast<double>(n);
    acc += std::norm(coeffs.a[i]) * lam * lam / (nd * nd);
  }
  out.lambda_squared_rhs = 2.0 * T * acc;
  return out;
}

CoefficientFamily single_term_family(std::uint64_t n0, std::complex<double> a) {
  CoefficientFamily fam;
  fam.support = {n0};
  fam.a = {a};
  fam.description = "single term at n=" + std::to_string(n0);
  return fam;
}

CoefficientFamily ones_on_primes(const PrimeTables& tables, double lo,
                                 double hi) {
  CoefficientFamily fam;
  const auto& primes = tables.primes();
  for (std::size_t i = tables.first_prime_geq(lo);
       i < primes.size() && static_cast<double>(primes[i]) <= hi; ++i) {
    fam.support.push_back(primes[i]);
    fam.a.push_back(std::complex<double>{1.0, 0.0});
  }
  fam.description = "a_p = 1 on primes";
  return fam;
}

CoefficientFamily random_steinhaus_on_primes(const PrimeTables& tables,
                                             std::uint64_t seed, double lo,
                                             double hi) {
  CoefficientFamily fam;
  const auto& primes = tables.primes();
  for (std::size_t i = tables.first_prime_geq(lo);
       i < primes.size() && static_cast<double>(primes[i]) <= hi; ++i) {
    fam.support.push_back(primes[i]);
    fam.a.push_back(steinhaus_value(seed, primes[i]));
  }
  fam.description = "random unit phases on primes, seed " + std::to_string(seed);
  return fam;
}

CoefficientFamily twisted_prime_family(const Multiplicative& f, double h,
                                       double lo, double hi) {
  CoefficientFamily fam;
  const auto& primes = f.tables().primes();
  for (std::size_t i = f.tables().first_prime_geq(lo);
       i < primes.size() && static_cast<double>(primes[i]) <= hi; ++i) {
    const std::uint64_t q = primes[i];
    const double lq = std::log(static_cast<double>(q));
    fam.support.push_back(q);
    fam.a.push_back(f.value(q, 1) * std::polar(1.0, -h * lq));
  }
  fam.description = "a_q = f(q) q^{-ih}, h = " + std::to_string(h);
  return fam;
}

}  // namespace halnum
