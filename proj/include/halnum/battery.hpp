#pragma once

#include <vector>

#include "halnum/meanvalue.hpp"
#include "halnum/multiplicative.hpp"

namespace halnum {

// The canonical regression battery: one, moebius, liouville, n^{i*alpha}
// for alpha in {+-1, +-2}, the nontrivial characters mod 3 and mod 4,
// ten Steinhaus draws (seeds 1..10) and ten Rademacher draws (seeds 11..20).
std::vector<MultSpec> canonical_battery();

// One prime-supported mean-value measurement: a coefficient family and the
// integration half-length it is evaluated at.
struct MeanValueCase {
  CoefficientFamily family;
  double T = 0.0;
};

// The canonical mean-value measurement set: single prime-power terms,
// all-ones prime windows, random-phase prime windows (seeds 1..10 capped at
// 1e5 and 11..20 at 1e6), and multiplicative twists f(q) q^{-ih}. Needs
// tables built to at least 1e6. The constant-freezing sweep and the
// regression suite use this same list, so measured maxima match exactly.
std::vector<MeanValueCase> meanvalue_battery(const PrimeTables& tables);

// One smooth-support measurement: a spec whose support is cut at x^theta.
struct SmoothCase {
  MultSpec spec;
  double x = 0.0;
  double theta = 0.0;
};

// The canonical smooth-support set: five base specs, theta in {0.5, 0.75},
// all at x = 1e5.
std::vector<SmoothCase> smooth_battery();

}  // namespace halnum
