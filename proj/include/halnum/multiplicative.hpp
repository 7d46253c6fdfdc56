#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "halnum/errors.hpp"
#include "halnum/parallel.hpp"
#include "halnum/primes.hpp"

namespace halnum {

using cplx = std::complex<double>;

enum class MultKind {
  One,               // f(n) = 1
  Moebius,           // f = mu
  Liouville,         // f = lambda
  NToIAlpha,         // f(n) = n^{i*alpha}
  Character,         // builtin Dirichlet character chi mod q
  RandomSteinhaus,   // f(p) random on the unit circle, completely mult.
  RandomRademacher,  // f(p) random in {-1,+1}, completely mult.
  Table,             // f(p^k) from an explicit table, 0 where unspecified
};

enum class ExtensionRule {
  CompletelyMultiplicative,  // f(p^k) = f(p)^k
  Prescribed,                // f(p^k) given per prime power (table/moebius)
};

struct PrimePowerValue {
  std::uint64_t p = 0;
  std::uint32_t k = 1;
  cplx value{0.0, 0.0};
};

// Declarative description of a multiplicative function with |f| <= 1.
struct MultSpec {
  MultKind kind = MultKind::One;
  double alpha = 0.0;      // NToIAlpha
  int modulus = 0;         // Character
  int index = 0;           // Character (0 = principal)
  std::uint64_t seed = 0;  // random kinds
  ExtensionRule extension = ExtensionRule::CompletelyMultiplicative;
  double smooth_cutoff = 0.0;  // > 0: force f(p^k) = 0 for all p > cutoff
  std::vector<PrimePowerValue> table;  // Table kind

  static MultSpec one();
  static MultSpec moebius();
  static MultSpec liouville();
  static MultSpec n_to_ialpha(double alpha);
  static MultSpec character(int modulus, int index);
  static MultSpec random_steinhaus(std::uint64_t seed);
  static MultSpec random_rademacher(std::uint64_t seed);

  // Short file-name-safe tag, e.g. "moebius", "ntoialpha_m2", "steinhaus_7".
  std::string label() const;
};

MultSpec spec_from_json(const nlohmann::json& j);
nlohmann::ordered_json spec_to_json(const MultSpec& spec);

// Builtin character value table chi(r) for r in [0, q); throws config_error
// for unknown (modulus, index) pairs.
std::vector<cplx> builtin_character(int modulus, int index);

// Evaluator bound to a prime table. Values f(p^k) are pure functions of the
// spec, so evaluation is deterministic and thread-safe.
class Multiplicative {
 public:
  Multiplicative(MultSpec spec, const PrimeTables& tables);

  const MultSpec& spec() const { return spec_; }
  const PrimeTables& tables() const { return *tables_; }

  // f(p^k) for prime p, k >= 1. Enforces |f| <= 1 + 1e-12.
  cplx value(std::uint64_t p, std::uint32_t k) const;

  // f(n) for 1 <= n <= tables.limit via smallest-prime-factor factorization.
  cplx eval(std::uint64_t n) const;

 private:
  cplx base_table_value(std::uint64_t p, std::uint32_t k) const;

  MultSpec spec_;
  const PrimeTables* tables_;
  std::vector<cplx> chi_;  // Character kind: chi_[n % modulus]
  std::vector<PrimePowerValue> sorted_table_;  // Table kind, sorted by (p, k)
};

struct SummatoryTable {
  std::vector<double> checkpoints;  // ascending
  std::vector<cplx> values;         // S(checkpoints[i])

  // Value at a checkpoint that must be present (bitwise equal double).
  cplx at(double x) const;
};

// S(x) = sum_{n <= x} f(n). Accumulation contract: fixed chunks of
// policy.chunk consecutive integers, ascending n within a chunk, chunk
// partials combined by left fold in chunk order — identical bytes for any
// thread count. x > tables.limit throws capacity_error; x < 1 gives 0.
cplx summatory(const Multiplicative& f, double x, const ExecPolicy& policy = {});

// S at many checkpoints in one sweep; each value is bit-identical to the
// corresponding summatory() call with the same policy.chunk.
SummatoryTable summatory_table(const Multiplicative& f,
                               std::vector<double> checkpoints,
                               const ExecPolicy& policy = {});

// sum_{n <= x} f(n) log n, same accumulation contract.
cplx log_weighted_sum(const Multiplicative& f, double x,
                      const ExecPolicy& policy = {});

struct IdentityCheck {
  cplx lhs;       // S(x) * log x
  cplx rhs;       // sum f(n) log n + sum f(n) log(x/n)
  double defect;  // |lhs - rhs|
};

// Exact identity S(x) log x = sum_{n<=x} f(n) log n + sum_{n<=x} f(n) log(x/n);
// the defect is pure floating-point noise and is bounded by 1e-9 * x * log x
// in the regression suite.
IdentityCheck identity_check(const Multiplicative& f, double x,
                             const ExecPolicy& policy = {});

}  // namespace halnum
