#include "halnum/multiplicative.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "halnum/rng.hpp"

namespace halnum {

namespace {

constexpr double kPi = std::numbers::pi;

cplx powk(cplx base, std::uint32_t k) {
  // k is tiny (<= ~64): straight repeated multiplication keeps the
  // evaluation order fixed and the modulus drift far below 1e-12.
  cplx r{1.0, 0.0};
  for (std::uint32_t i = 0; i < k; ++i) r *= base;
  return r;
}

std::string format_number_tag(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  std::string s(buf);
  std::string out;
  for (char c : s) {
    if (c == '.') out += 'p';
    else if (c == '-') out += 'm';
    else if (c == '+') continue;
    else out += c;
  }
  return out;
}

}  // namespace

MultSpec MultSpec::one() { return MultSpec{}; }

MultSpec MultSpec::moebius() {
  MultSpec s;
  s.kind = MultKind::Moebius;
  s.extension = ExtensionRule::Prescribed;
  return s;
}

MultSpec MultSpec::liouville() {
  MultSpec s;
  s.kind = MultKind::Liouville;
  return s;
}

MultSpec MultSpec::n_to_ialpha(double alpha) {
  MultSpec s;
  s.kind = MultKind::NToIAlpha;
  s.alpha = alpha;
  return s;
}

MultSpec MultSpec::character(int modulus, int index) {
  MultSpec s;
  s.kind = MultKind::Character;
  s.modulus = modulus;
  s.index = index;
  return s;
}

MultSpec MultSpec::random_steinhaus(std::uint64_t seed) {
  MultSpec s;
  s.kind = MultKind::RandomSteinhaus;
  s.seed = seed;
  return s;
}

MultSpec MultSpec::random_rademacher(std::uint64_t seed) {
  MultSpec s;
  s.kind = MultKind::RandomRademacher;
  s.seed = seed;
  return s;
}

std::string MultSpec::label() const {
  std::string base;
  switch (kind) {
    case MultKind::One: base = "one"; break;
    case MultKind::Moebius: base = "moebius"; break;
    case MultKind::Liouville: base = "liouville"; break;
    case MultKind::NToIAlpha:
      base = "ntoialpha_" + format_number_tag(alpha);
      break;
    case MultKind::Character:
      base = "chi" + std::to_string(modulus) + "_" + std::to_string(index);
      break;
    case MultKind::RandomSteinhaus:
      base = "steinhaus_" + std::to_string(seed);
      break;
    case MultKind::RandomRademacher:
      base = "rademacher_" + std::to_string(seed);
      break;
    case MultKind::Table: base = "table"; break;
  }
  if (smooth_cutoff > 0.0) base += "_sm" + format_number_tag(smooth_cutoff);
  return base;
}

std::vector<cplx> builtin_character(int modulus, int index) {
  if (modulus < 2 || modulus > 12)
    throw config_error("character: modulus must be in [2, 12]");
  const int q = modulus;
  std::vector<cplx> chi(static_cast<std::size_t>(q), cplx{0.0, 0.0});
  auto set = [&](int r, cplx v) { chi[static_cast<std::size_t>(r % q)] = v; };
  auto principal = [&] {
    for (int r = 0; r < q; ++r)
      if (std::gcd(r, q) == 1) set(r, cplx{1.0, 0.0});
  };
  if (index == 0) {
    principal();
    return chi;
  }
  const cplx one{1.0, 0.0}, neg{-1.0, 0.0};
  const cplx im{0.0, 1.0}, nim{0.0, -1.0};
  auto sixth = [&](int j) { return std::polar(1.0, kPi * j / 3.0); };
  bool known = true;
  switch (q) {
    case 3:
      if (index == 1) { set(1, one); set(2, neg); }
      else known = false;
      break;
    case 4:
      if (index == 1) { set(1, one); set(3, neg); }
      else known = false;
      break;
    case 5:
      // Units generated by 2: 2^j = 1, 2, 4, 3 for j = 0..3.
      if (index == 1) { set(1, one); set(2, im); set(4, neg); set(3, nim); }
      else if (index == 2) { set(1, one); set(2, neg); set(4, one); set(3, neg); }
      else if (index == 3) { set(1, one); set(2, nim); set(4, neg); set(3, im); }
      else known = false;
      break;
    case 6:
      if (index == 1) { set(1, one); set(5, neg); }
      else known = false;
      break;
    case 7:
      // Units generated by 3: 3^j = 1, 3, 2, 6, 4, 5 for j = 0..5.
      if (index == 1) {
        const int pow3[6] = {1, 3, 2, 6, 4, 5};
        for (int j = 0; j < 6; ++j) set(pow3[j], sixth(j));
      } else if (index == 2) {
        set(1, one); set(2, one); set(4, one);
        set(3, neg); set(5, neg); set(6, neg);
      } else known = false;
      break;
    case 8:
      if (index == 1) { set(1, one); set(3, neg); set(5, neg); set(7, one); }
      else if (index == 2) { set(1, one); set(3, one); set(5, neg); set(7, neg); }
      else if (index == 3) { set(1, one); set(3, neg); set(5, one); set(7, neg); }
      else known = false;
      break;
    case 9:
      // Quadratic lifted from modulus 3.
      if (index == 1) {
        set(1, one); set(4, one); set(7, one);
        set(2, neg); set(5, neg); set(8, neg);
      } else known = false;
      break;
    case 10:
      // Units generated by 3: 3^j = 1, 3, 9, 7 for j = 0..3.
      if (index == 1) { set(1, one); set(3, neg); set(9, one); set(7, neg); }
      else if (index == 2) { set(1, one); set(3, im); set(9, neg); set(7, nim); }
      else known = false;
      break;
    case 11:
      // Quadratic residues mod 11: {1, 3, 4, 5, 9}.
      if (index == 1) {
        for (int r : {1, 3, 4, 5, 9}) set(r, one);
        for (int r : {2, 6, 7, 8, 10}) set(r, neg);
      } else known = false;
      break;
    case 12:
      if (index == 1) { set(1, one); set(5, neg); set(7, one); set(11, neg); }
      else if (index == 2) { set(1, one); set(5, one); set(7, neg); set(11, neg); }
      else if (index == 3) { set(1, one); set(5, neg); set(7, neg); set(11, one); }
      else known = false;
      break;
    default:
      known = false;
  }
  if (!known)
    throw config_error("character: no builtin table for modulus " +
                       std::to_string(q) + " index " + std::to_string(index) +
                       " (index 0 = principal is available for every q <= 12)");
  return chi;
}

Multiplicative::Multiplicative(MultSpec spec, const PrimeTables& tables)
    : spec_(std::move(spec)), tables_(&tables) {
  if (spec_.kind == MultKind::Character) {
    chi_ = builtin_character(spec_.modulus, spec_.index);
  }
  if (spec_.kind == MultKind::Table) {
    sorted_table_ = spec_.table;
    std::sort(sorted_table_.begin(), sorted_table_.end(),
              [](const PrimePowerValue& a, const PrimePowerValue& b) {
                return a.p != b.p ? a.p < b.p : a.k < b.k;
              });
    for (const auto& e : sorted_table_) {
      if (e.p < 2 || e.k < 1)
        throw config_error("table: entries need prime p >= 2 and k >= 1");
      if (std::abs(e.value) > 1.0 + 1e-12)
        throw unit_disc_error("table value exceeds the unit disc at p=" +
                              std::to_string(e.p));
    }
  }
}

cplx Multiplicative::base_table_value(std::uint64_t p, std::uint32_t k) const {
  const PrimePowerValue key{p, k, cplx{}};
  auto it = std::lower_bound(sorted_table_.begin(), sorted_table_.end(), key,
                             [](const PrimePowerValue& a, const PrimePowerValue& b) {
                               return a.p != b.p ? a.p < b.p : a.k < b.k;
                             });
  if (it != sorted_table_.end() && it->p == p && it->k == k) return it->value;
  return cplx{0.0, 0.0};
}

cplx Multiplicative::value(std::uint64_t p, std::uint32_t k) const {
  if (spec_.smooth_cutoff > 0.0 &&
      static_cast<double>(p) > spec_.smooth_cutoff)
    return cplx{0.0, 0.0};
  cplx v;
  switch (spec_.kind) {
    case MultKind::One:
      v = cplx{1.0, 0.0};
      break;
    case MultKind::Moebius:
      v = (k == 1) ? cplx{-1.0, 0.0} : cplx{0.0, 0.0};
      break;
    case MultKind::Liouville:
      v = (k % 2 == 1) ? cplx{-1.0, 0.0} : cplx{1.0, 0.0};
      break;
    case MultKind::NToIAlpha:
      v = std::polar(1.0, spec_.alpha * static_cast<double>(k) *
                              std::log(static_cast<double>(p)));
      break;
    case MultKind::Character:
      v = powk(chi_[static_cast<std::size_t>(p % spec_.modulus)], k);
      break;
    case MultKind::RandomSteinhaus:
      v = std::polar(1.0, 2.0 * kPi * static_cast<double>(k) *
                              mix_uniform(spec_.seed, p));
      break;
    case MultKind::RandomRademacher:
      v = (k % 2 == 1) ? cplx{rademacher_value(spec_.seed, p), 0.0}
                       : cplx{1.0, 0.0};
      break;
    case MultKind::Table:
      v = (spec_.extension == ExtensionRule::Prescribed)
              ? base_table_value(p, k)
              : powk(base_table_value(p, 1), k);
      break;
    default:
      v = cplx{0.0, 0.0};
  }
  // |v|^2 <= (1 + 1e-12)^2 up to the quadratic term.
  if (std::norm(v) > 1.0 + 2.1e-12)
    throw unit_disc_error("f(p^k) leaves the unit disc at p=" +
                          std::to_string(p) + ", k=" + std::to_string(k));
  return v;
}

cplx Multiplicative::eval(std::uint64_t n) const {
  if (n < 1 || n > tables_->limit())
    throw capacity_error("eval: n outside [1, limit]");
  cplx out{1.0, 0.0};
  while (n > 1) {
    const std::uint64_t p = tables_->spf(n);
    std::uint32_t e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out *= value(p, e);
  }
  return out;
}

namespace {

// Shared accumulation contract: fixed chunks [1 + j*C, (j+1)*C] of the
// integers, ascending within a chunk, chunk partials combined by left fold
// in chunk order. Parallel workers only fill disjoint slots.
template <class Term>
cplx chunked_sum(std::uint64_t N, const ExecPolicy& policy, Term term) {
  if (N < 1) return cplx{0.0, 0.0};
  const std::uint64_t C = std::max<std::uint64_t>(1, policy.chunk);
  const std::size_t nchunks = static_cast<std::size_t>((N - 1) / C) + 1;
  std::vector<cplx> partials(nchunks, cplx{0.0, 0.0});
  run_blocks(nchunks, policy.threads, [&](std::size_t j) {
    const std::uint64_t lo = 1 + j * C;
    const std::uint64_t hi = std::min<std::uint64_t>(N, (j + 1) * C);
    cplx acc{0.0, 0.0};
    for (std::uint64_t n = lo; n <= hi; ++n) acc += term(n);
    partials[j] = acc;
  });
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < nchunks; ++j) acc += partials[j];
  return acc;
}

std::uint64_t floor_to_u64(double x) {
  return static_cast<std::uint64_t>(std::floor(x));
}

}  // namespace

cplx summatory(const Multiplicative& f, double x, const ExecPolicy& policy) {
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("summatory: x exceeds tables.limit");
  if (x < 1.0) return cplx{0.0, 0.0};
  return chunked_sum(floor_to_u64(x), policy,
                     [&](std::uint64_t n) { return f.eval(n); });
}

cplx SummatoryTable::at(double x) const {
  auto it = std::lower_bound(checkpoints.begin(), checkpoints.end(), x);
  if (it == checkpoints.end() || *it != x)
    throw std::domain_error("summatory table: missing checkpoint");
  return values[static_cast<std::size_t>(it - checkpoints.begin())];
}

SummatoryTable summatory_table(const Multiplicative& f,
                               std::vector<double> checkpoints,
                               const ExecPolicy& policy) {
  SummatoryTable out;
  out.checkpoints = std::move(checkpoints);
  out.values.assign(out.checkpoints.size(), cplx{0.0, 0.0});
  if (out.checkpoints.empty()) return out;
  for (std::size_t i = 1; i < out.checkpoints.size(); ++i) {
    if (out.checkpoints[i] < out.checkpoints[i - 1])
      throw std::domain_error("summatory_table: checkpoints must ascend");
  }
  const double xmax = out.checkpoints.back();
  if (!(xmax <= static_cast<double>(f.tables().limit())))
    throw capacity_error("summatory_table: checkpoint exceeds tables.limit");

  const std::uint64_t N = xmax < 1.0 ? 0 : floor_to_u64(xmax);
  if (N == 0) return out;  // every checkpoint is below 1

  const std::uint64_t C = std::max<std::uint64_t>(1, policy.chunk);
  const std::size_t nchunks = static_cast<std::size_t>((N - 1) / C) + 1;
  std::vector<cplx> partials(nchunks, cplx{0.0, 0.0});
  run_blocks(nchunks, policy.threads, [&](std::size_t j) {
    const std::uint64_t lo = 1 + j * C;
    const std::uint64_t hi = std::min<std::uint64_t>(N, (j + 1) * C);
    cplx acc{0.0, 0.0};
    for (std::uint64_t n = lo; n <= hi; ++n) acc += f.eval(n);
    partials[j] = acc;
  });
  // Left-fold prefixes over completed chunks, in chunk order.
  std::vector<cplx> folds(nchunks, cplx{0.0, 0.0});
  cplx acc{0.0, 0.0};
  for (std::size_t j = 0; j < nchunks; ++j) {
    acc += partials[j];
    folds[j] = acc;
  }

  // Serve checkpoints ascending; each chunk is re-walked at most once, and
  // the snapshot (fold of earlier chunks + ascending prefix of this chunk)
  // reproduces summatory() bit for bit.
  std::size_t i = 0;
  while (i < out.checkpoints.size() && out.checkpoints[i] < 1.0) ++i;
  while (i < out.checkpoints.size()) {
    const std::uint64_t M = floor_to_u64(out.checkpoints[i]);
    const std::size_t c = static_cast<std::size_t>((M - 1) / C);
    const std::uint64_t lo = 1 + c * C;
    const std::uint64_t hi = std::min<std::uint64_t>(N, (c + 1) * C);
    const cplx before = (c == 0) ? cplx{0.0, 0.0} : folds[c - 1];
    cplx running{0.0, 0.0};
    std::uint64_t n = lo;
    while (i < out.checkpoints.size()) {
      const std::uint64_t Mi = floor_to_u64(out.checkpoints[i]);
      if (static_cast<std::size_t>((Mi - 1) / C) != c) break;
      for (; n <= Mi && n <= hi; ++n) running += f.eval(n);
      out.values[i] = before + running;
      ++i;
    }
  }
  return out;
}

cplx log_weighted_sum(const Multiplicative& f, double x,
                      const ExecPolicy& policy) {
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("log_weighted_sum: x exceeds tables.limit");
  if (x < 1.0) return cplx{0.0, 0.0};
  return chunked_sum(floor_to_u64(x), policy, [&](std::uint64_t n) {
    return f.eval(n) * std::log(static_cast<double>(n));
  });
}

IdentityCheck identity_check(const Multiplicative& f, double x,
                             const ExecPolicy& policy) {
  if (!(x >= 2.0)) throw std::domain_error("identity_check: x must be >= 2");
  if (!(x <= static_cast<double>(f.tables().limit())))
    throw capacity_error("identity_check: x exceeds tables.limit");
  const cplx S = summatory(f, x, policy);
  const cplx logn = log_weighted_sum(f, x, policy);
  const cplx logxn = chunked_sum(floor_to_u64(x), policy, [&](std::uint64_t n) {
    return f.eval(n) * std::log(x / static_cast<double>(n));
  });
  IdentityCheck out;
  out.lhs = S * std::log(x);
  out.rhs = logn + logxn;
  out.defect = std::abs(out.lhs - out.rhs);
  return out;
}

namespace {

std::string kind_to_string(MultKind k) {
  switch (k) {
    case MultKind::One: return "one";
    case MultKind::Moebius: return "moebius";
    case MultKind::Liouville: return "liouville";
    case MultKind::NToIAlpha: return "ntoialpha";
    case MultKind::Character: return "character";
    case MultKind::RandomSteinhaus: return "random_steinhaus";
    case MultKind::RandomRademacher: return "random_rademacher";
    case MultKind::Table: return "table";
  }
  return "one";
}

MultKind kind_from_string(const std::string& s) {
  if (s == "one") return MultKind::One;
  if (s == "moebius") return MultKind::Moebius;
  if (s == "liouville") return MultKind::Liouville;
  if (s == "ntoialpha") return MultKind::NToIAlpha;
  if (s == "character") return MultKind::Character;
  if (s == "random_steinhaus") return MultKind::RandomSteinhaus;
  if (s == "random_rademacher") return MultKind::RandomRademacher;
  if (s == "table") return MultKind::Table;
  throw config_error("unknown multiplicative kind: " + s);
}

ExtensionRule natural_extension(MultKind k) {
  switch (k) {
    case MultKind::Moebius:
    case MultKind::Table:
      return ExtensionRule::Prescribed;
    default:
      return ExtensionRule::CompletelyMultiplicative;
  }
}

}  // namespace

MultSpec spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw config_error("spec must be a JSON object");
  MultSpec s;
  if (!j.contains("kind") || !j.at("kind").is_string())
    throw config_error("spec needs a string field \"kind\"");
  s.kind = kind_from_string(j.at("kind").get<std::string>());
  s.extension = natural_extension(s.kind);
  try {
    if (j.contains("alpha")) s.alpha = j.at("alpha").get<double>();
    if (j.contains("modulus")) s.modulus = j.at("modulus").get<int>();
    if (j.contains("index")) s.index = j.at("index").get<int>();
    if (j.contains("seed")) s.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("smooth_cutoff"))
      s.smooth_cutoff = j.at("smooth_cutoff").get<double>();
    if (j.contains("extension_rule")) {
      const std::string e = j.at("extension_rule").get<std::string>();
      if (e == "completely_multiplicative")
        s.extension = ExtensionRule::CompletelyMultiplicative;
      else if (e == "prescribed")
        s.extension = ExtensionRule::Prescribed;
      else
        throw config_error("unknown extension_rule: " + e);
    }
    if (j.contains("table")) {
      for (const auto& e : j.at("table")) {
        PrimePowerValue v;
        v.p = e.at("p").get<std::uint64_t>();
        v.k = e.contains("k") ? e.at("k").get<std::uint32_t>() : 1u;
        v.value = cplx{e.contains("re") ? e.at("re").get<double>() : 0.0,
                       e.contains("im") ? e.at("im").get<double>() : 0.0};
        s.table.push_back(v);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad spec field: ") + e.what());
  }
  // Kind-specific validation.
  switch (s.kind) {
    case MultKind::Character:
      (void)builtin_character(s.modulus, s.index);
      break;
    case MultKind::Moebius:
      if (s.extension != ExtensionRule::Prescribed)
        throw config_error("moebius is prescribed on prime powers");
      break;
    case MultKind::One:
    case MultKind::Liouville:
    case MultKind::NToIAlpha:
    case MultKind::RandomSteinhaus:
    case MultKind::RandomRademacher:
      if (s.extension != ExtensionRule::CompletelyMultiplicative)
        throw config_error("this kind is completely multiplicative");
      break;
    case MultKind::Table:
      break;
  }
  if (s.smooth_cutoff < 0.0)
    throw config_error("smooth_cutoff must be >= 0");
  return s;
}

nlohmann::ordered_json spec_to_json(const MultSpec& s) {
  nlohmann::ordered_json j;
  j["kind"] = kind_to_string(s.kind);
  switch (s.kind) {
    case MultKind::NToIAlpha: j["alpha"] = s.alpha; break;
    case MultKind::Character:
      j["modulus"] = s.modulus;
      j["index"] = s.index;
      break;
    case MultKind::RandomSteinhaus:
    case MultKind::RandomRademacher:
      j["seed"] = s.seed;
      break;
    default: break;
  }
  j["extension_rule"] = s.extension == ExtensionRule::Prescribed
                            ? "prescribed"
                            : "completely_multiplicative";
  if (s.smooth_cutoff > 0.0) j["smooth_cutoff"] = s.smooth_cutoff;
  if (s.kind == MultKind::Table) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : s.table) {
      nlohmann::ordered_json v;
      v["p"] = e.p;
      v["k"] = e.k;
      v["re"] = e.value.real();
      v["im"] = e.value.imag();
      arr.push_back(v);
    }
    j["table"] = arr;
  }
  return j;
}

}  // namespace halnum
