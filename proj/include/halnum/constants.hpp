#pragma once

#include <cstdint>
#include <string>

namespace halnum {

// Empirically measured implied constants, frozen from a sweep over the
// canonical battery and asserted by the regression suite ever after.
// The freezing procedure and raw maxima live in the JSON file itself.
struct FrozenConstants {
  double C_MV = 0.0;      // prime-supported mean value:  lhs <= C_MV * rhs
  double C_TRIV = 0.0;    // |S_k| <= C_TRIV * e^{-k} x log x
  double C_DEC = 0.0;     // decomposition defect <= C_DEC * x loglog x/log x
  double C_SHARP = 0.0;      // |S_k| <= C_SHARP * (x L + x)          (k <= cutoff)
  double C_I1 = 0.0;      // I1 <= C_I1 * e^k / log x           (k <= cutoff)
  double C_I2 = 0.0;      // I2 <= C_I2 * L^2 e^{-k} log x      (k <= cutoff)
  double C_PER = 0.0;     // |S_k| <= C_PER * perron_majorant   (k <= cutoff)
  double C_THM = 0.0;     // |S(x)| <= C_THM * theorem bound
  double C_SM = 0.0;      // smooth variant: |S(x)| <= C_SM * (x/log x)(L+1)
  double C_LX = 0.0;      // L(x) <= C_LX * log x
  double C_LOGSUM = 0.0;  // sum_{n<=x} log(x/n) <= C_LOGSUM * x
  double C_AUX = 0.0;     // discarded primes <= C_AUX * x loglog x/log x

  static FrozenConstants load(const std::string& path);  // config_error on failure
};

// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits; echoed into every
// report header so a tampered constants file is visible in the outputs.
std::string file_hash_hex(const std::string& path);

}  // namespace halnum
