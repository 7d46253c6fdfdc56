#pragma once

#include <stdexcept>
#include <string>

namespace halnum {

// A request exceeds what the tables (or the hard sieve cap) can serve.
struct capacity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A grid/quadrature cannot support the requested computation: too short,
// too coarse, or mismatched with the range it is asked to integrate over.
struct coverage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Some |f(p^k)| exceeded 1 + 1e-12.
struct unit_disc_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent declarative run configuration.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace halnum
