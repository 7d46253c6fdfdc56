#include "halnum/battery.hpp"

#include <cmath>
#include <complex>

namespace halnum {

std::vector<MultSpec> canonical_battery() {
  std::vector<MultSpec> specs;
  specs.push_back(MultSpec::one());
  specs.push_back(MultSpec::moebius());
  specs.push_back(MultSpec::liouville());
  specs.push_back(MultSpec::n_to_ialpha(1.0));
  specs.push_back(MultSpec::n_to_ialpha(-1.0));
  specs.push_back(MultSpec::n_to_ialpha(2.0));
  specs.push_back(MultSpec::n_to_ialpha(-2.0));
  specs.push_back(MultSpec::character(3, 1));
  specs.push_back(MultSpec::character(4, 1));
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    specs.push_back(MultSpec::random_steinhaus(seed));
  for (std::uint64_t seed = 11; seed <= 20; ++seed)
    specs.push_back(MultSpec::random_rademacher(seed));
  return specs;
}

std::vector<MeanValueCase> meanvalue_battery(const PrimeTables& tables) {
  if (tables.limit() < 1'000'000)
    throw capacity_error("meanvalue_battery needs tables up to 1e6");
  std::vector<MeanValueCase> cases;
  const auto add = [&](CoefficientFamily fam, double T) {
    cases.push_back({std::move(fam), T});
  };

  // Single prime-power terms: the closed-form end of the scale.
  add(single_term_family(4, {1.0, 0.0}), 1.0);
  add(single_term_family(9, {0.7, 0.2}), 1.0);
  add(single_term_family(25, {-1.0, 0.0}), 2.0);
  add(single_term_family(101, {0.3, -0.9}), 2.0);
  add(single_term_family(9973, {1.0, 0.0}), 10.0);

  // Fully coherent prime windows.
  for (double T : {1.0, 5.0, 10.0})
    add(ones_on_primes(tables, T * T, 1e5), T);

  // Random-phase prime windows.
  for (std::uint64_t seed = 1; seed <= 10; ++seed)
    for (double T : {5.0, 10.0})
      add(random_steinhaus_on_primes(tables, seed, T * T, 1e5), T);
  for (std::uint64_t seed = 11; seed <= 20; ++seed)
    add(random_steinhaus_on_primes(tables, seed, 100.0, 1e6), 10.0);

  // Multiplicative twists f(q) q^{-ih}.
  const MultSpec twist_specs[] = {MultSpec::one(), MultSpec::moebius(),
                                  MultSpec::random_steinhaus(5)};
  for (const MultSpec& spec : twist_specs) {
    Multiplicative f(spec, tables);
    for (double h : {0.0, 1.0})
      for (double T : {5.0, 10.0})
        add(twisted_prime_family(f, h, T * T, 1e5), T);
  }
  return cases;
}

std::vector<SmoothCase> smooth_battery() {
  const double x = 1e5;
  std::vector<SmoothCase> cases;
  const MultSpec base[] = {MultSpec::one(), MultSpec::liouville(),
                           MultSpec::random_steinhaus(1),
                           MultSpec::random_steinhaus(2),
                           MultSpec::random_rademacher(11)};
  for (const MultSpec& spec : base) {
    for (double theta : {0.5, 0.75}) {
      MultSpec s = spec;
      s.smooth_cutoff = std::pow(x, theta);
      cases.push_back({s, x, theta});
    }
  }
  return cases;
}

}  // namespace halnum
