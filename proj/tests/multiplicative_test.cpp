#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "halnum/battery.hpp"
#include "halnum/multiplicative.hpp"
#include "halnum/rng.hpp"
#include "oracles.hpp"

using namespace halnum;
using namespace halnum_test;

namespace {
const PrimeTables& tables() {
  static const PrimeTables t = build_tables(1'000'000);
  return t;
}
}  // namespace

TEST_CASE("mixing generator matches the published reference sequence") {
  CHECK(mix_draw(0, 1) == 0xE220A8397B1DCDAFULL);
  CHECK(mix_draw(0, 2) == 0x6E789E6AA1B965F4ULL);
  CHECK(mix_draw(0, 3) == 0x06C45D188009454FULL);
  // Same (seed, n) always gives the same draw; distinct n give distinct ones.
  CHECK(mix_draw(42, 97) == mix_draw(42, 97));
  CHECK(mix_draw(42, 97) != mix_draw(42, 98));
  for (std::uint64_t n = 1; n < 2000; ++n) {
    const double u = mix_uniform(7, n);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(std::abs(steinhaus_value(7, n)) == doctest::Approx(1.0).epsilon(1e-15));
    const double r = rademacher_value(7, n);
    CHECK((r == 1.0 || r == -1.0));
  }
}

TEST_CASE("summatory values match the trial-division oracle on the battery") {
  for (const MultSpec& spec : canonical_battery()) {
    const Multiplicative f(spec, tables());
    for (double x : {1.0, 10.5, 100.0, 1234.0, 10000.0}) {
      const cplx got = summatory(f, x);
      const cplx want = oracle_summatory(f, x);
      INFO(spec.label(), " x=", x);
      CHECK(std::abs(got - want) <= 1e-8);
    }
  }
}

TEST_CASE("Mertens values") {
  const Multiplicative mu(MultSpec::moebius(), tables());
  CHECK(summatory(mu, 10.0) == cplx{-1.0, 0.0});
  CHECK(summatory(mu, 100.0) == cplx{1.0, 0.0});
  CHECK(summatory(mu, 1e4) == cplx{-23.0, 0.0});
  CHECK(summatory(mu, 1e6) == cplx{212.0, 0.0});
  CHECK(summatory(mu, 1e5) == oracle_summatory(mu, 1e5));
  const Multiplicative lam(MultSpec::liouville(), tables());
  CHECK(summatory(lam, 1e5) == oracle_summatory(lam, 1e5));
}

TEST_CASE("values are multiplicative on coprime pairs") {
  const MultSpec specs[] = {MultSpec::one(),
                            MultSpec::moebius(),
                            MultSpec::liouville(),
                            MultSpec::n_to_ialpha(1.0),
                            MultSpec::character(3, 1),
                            MultSpec::random_steinhaus(1),
                            MultSpec::random_rademacher(11)};
  for (const MultSpec& spec : specs) {
    const Multiplicative f(spec, tables());
    int pairs = 0;
    for (std::uint64_t m = 2; m <= 120 && pairs < 1000; ++m) {
      for (std::uint64_t n = 121; n <= 360 && pairs < 1000; ++n) {
        if (std::gcd(m, n) != 1) continue;
        ++pairs;
        INFO(spec.label(), " m=", m, " n=", n);
        CHECK(std::abs(f.eval(m * n) - f.eval(m) * f.eval(n)) <= 1e-12);
      }
    }
    CHECK(pairs == 1000);
  }
}

TEST_CASE("all battery values stay in the closed unit disc") {
  for (const MultSpec& spec : canonical_battery()) {
    const Multiplicative f(spec, tables());
    double worst = 0.0;
    for (std::uint64_t n = 1; n <= 10'000; ++n)
      worst = std::max(worst, std::abs(f.eval(n)));
    INFO(spec.label());
    CHECK(worst <= 1.0 + 1e-12);
  }
}

TEST_CASE("values outside the unit disc are rejected") {
  MultSpec s;
  s.kind = MultKind::Table;
  s.extension = ExtensionRule::Prescribed;
  s.table = {{2, 1, cplx{1.0 + 1e-6, 0.0}}};
  CHECK_THROWS_AS(Multiplicative(s, tables()), unit_disc_error);
  s.table = {{2, 1, cplx{0.8, 0.7}}};  // |v| = 1.063
  CHECK_THROWS_AS(Multiplicative(s, tables()), unit_disc_error);
}

TEST_CASE("prescribed vs completely multiplicative extension") {
  MultSpec s;
  s.kind = MultKind::Table;
  s.table = {{2, 1, cplx{0.5, 0.0}}};
  s.extension = ExtensionRule::Prescribed;
  {
    const Multiplicative f(s, tables());
    CHECK(f.value(2, 1) == cplx{0.5, 0.0});
    CHECK(f.value(2, 2) == cplx{0.0, 0.0});
  }
  s.extension = ExtensionRule::CompletelyMultiplicative;
  {
    const Multiplicative f(s, tables());
    CHECK(f.value(2, 2) == cplx{0.25, 0.0});
    CHECK(f.value(3, 1) == cplx{0.0, 0.0});
  }
  const Multiplicative mu(MultSpec::moebius(), tables());
  CHECK(mu.value(2, 1) == cplx{-1.0, 0.0});
  CHECK(mu.value(2, 2) == cplx{0.0, 0.0});
  const Multiplicative lam(MultSpec::liouville(), tables());
  CHECK(lam.value(2, 2) == cplx{1.0, 0.0});
  CHECK(lam.value(2, 3) == cplx{-1.0, 0.0});
}

TEST_CASE("smooth cutoff zeroes every prime above the cutoff") {
  MultSpec s = MultSpec::one();
  s.smooth_cutoff = 5.0;
  const Multiplicative f(s, tables());
  CHECK(f.eval(6) == cplx{1.0, 0.0});
  CHECK(f.eval(8) == cplx{1.0, 0.0});
  CHECK(f.eval(7) == cplx{0.0, 0.0});
  CHECK(f.eval(35) == cplx{0.0, 0.0});
  CHECK(f.eval(14) == cplx{0.0, 0.0});
  // 5-smooth count up to 30.
  CHECK(summatory(f, 30.0) == cplx{18.0, 0.0});
}

TEST_CASE("summatory is bit-identical across thread counts and chunkings") {
  const MultSpec specs[] = {MultSpec::one(), MultSpec::random_steinhaus(3),
                            MultSpec::n_to_ialpha(2.0)};
  for (const MultSpec& spec : specs) {
    const Multiplicative f(spec, tables());
    ExecPolicy p1{1, 4096}, p4{4, 4096};
    const cplx a = summatory(f, 123456.7, p1);
    const cplx b = summatory(f, 123456.7, p4);
    CHECK(a.real() == b.real());
    CHECK(a.imag() == b.imag());
  }
}

TEST_CASE("summatory_table reproduces summatory() bit for bit") {
  const Multiplicative f(MultSpec::random_steinhaus(5), tables());
  const std::vector<double> xs = {1.0, 10.0, 1000.0, 12345.0, 99999.5,
                                  123456.7};
  for (unsigned threads : {1u, 4u}) {
    ExecPolicy p{threads, 65536};
    const SummatoryTable tab = summatory_table(f, xs, p);
    for (double x : xs) {
      const cplx direct = summatory(f, x, p);
      const cplx via = tab.at(x);
      CHECK(via.real() == direct.real());
      CHECK(via.imag() == direct.imag());
    }
  }
  const SummatoryTable tab = summatory_table(f, xs);
  CHECK_THROWS_AS(tab.at(500.0), std::domain_error);
}

TEST_CASE("log-weighted identity S(x) log x = sum f log n + sum f log(x/n)") {
  const MultSpec specs[] = {MultSpec::one(), MultSpec::moebius(),
                            MultSpec::random_steinhaus(2),
                            MultSpec::character(4, 1)};
  for (const MultSpec& spec : specs) {
    const Multiplicative f(spec, tables());
    for (double x : {2.0, 100.0, 10000.0}) {
      const IdentityCheck c = identity_check(f, x);
      INFO(spec.label(), " x=", x);
      CHECK(c.defect <= 1e-9 * x * std::log(x));
    }
  }
  const Multiplicative one(MultSpec::one(), tables());
  CHECK(log_weighted_sum(one, 1.5) == cplx{0.0, 0.0});
  // Direct evaluation of sum_{n<=10} log n.
  double want = 0.0;
  for (int n = 2; n <= 10; ++n) want += std::log(static_cast<double>(n));
  CHECK(log_weighted_sum(one, 10.0).real() ==
        doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("builtin characters: completeness, homomorphism, periodicity") {
  struct QI {
    std::uint32_t q;
    std::vector<std::uint32_t> indices;
  };
  const std::vector<QI> cases = {
      {2, {0}},  {3, {0, 1}},       {4, {0, 1}},       {5, {0, 1, 2, 3}},
      {6, {0, 1}}, {7, {0, 1, 2}},  {8, {0, 1, 2, 3}}, {9, {0, 1}},
      {10, {0, 1, 2}}, {11, {0, 1}}, {12, {0, 1, 2, 3}}};
  for (const QI& c : cases) {
    for (std::uint32_t idx : c.indices) {
      const std::vector<cplx> chi = builtin_character(c.q, idx);
      REQUIRE(chi.size() == c.q);
      INFO("q=", c.q, " index=", idx);
      // chi(1) = 1; zero exactly on non-units; modulus 1 on units.
      CHECK(chi[1 % c.q] == cplx{1.0, 0.0});
      for (std::uint32_t a = 0; a < c.q; ++a) {
        if (std::gcd(a, c.q) == 1)
          CHECK(std::abs(chi[a]) == doctest::Approx(1.0).epsilon(1e-14));
        else
          CHECK(chi[a] == cplx{0.0, 0.0});
      }
      // Homomorphism chi(a) chi(b) = chi(ab mod q).
      for (std::uint32_t a = 0; a < c.q; ++a)
        for (std::uint32_t b = 0; b < c.q; ++b)
          CHECK(std::abs(chi[a] * chi[b] - chi[(a * b) % c.q]) <= 1e-14);
      // eval agrees with the periodic table lookup.
      MultSpec s = MultSpec::character(c.q, idx);
      const Multiplicative f(s, tables());
      for (std::uint64_t n = 1; n <= 200; ++n)
        CHECK(std::abs(f.eval(n) - chi[n % c.q]) <= 1e-13);
    }
  }
  CHECK_THROWS_AS(builtin_character(13, 0), config_error);
  CHECK_THROWS_AS(builtin_character(5, 4), config_error);
  CHECK_THROWS_AS(builtin_character(1, 0), config_error);
}

TEST_CASE("spec JSON round trips") {
  std::vector<MultSpec> specs = canonical_battery();
  specs.push_back(MultSpec::character(7, 2));
  {
    MultSpec s = MultSpec::one();
    s.smooth_cutoff = 316.23;
    specs.push_back(s);
  }
  {
    MultSpec s;
    s.kind = MultKind::Table;
    s.extension = ExtensionRule::Prescribed;
    s.table = {{2, 1, cplx{0.5, 0.25}}, {3, 1, cplx{-1.0, 0.0}}};
    specs.push_back(s);
  }
  for (const MultSpec& spec : specs) {
    const auto j = spec_to_json(spec);
    const MultSpec back = spec_from_json(j);
    INFO(j.dump());
    CHECK(spec_to_json(back) == j);
    CHECK(back.label() == spec.label());
  }
  CHECK_THROWS_AS(spec_from_json(nlohmann::json{{"kind", "nonsense"}}),
                  config_error);
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(
                      R"({"kind":"character","modulus":13,"index":0})")),
                  config_error);
}

TEST_CASE("random models draw from the documented generator") {
  const Multiplicative st(MultSpec::random_steinhaus(9), tables());
  const Multiplicative rd(MultSpec::random_rademacher(9), tables());
  for (std::uint64_t p : {2ULL, 3ULL, 101ULL, 99991ULL}) {
    const double u = mix_uniform(9, p);
    const cplx want = std::polar(1.0, 2.0 * std::numbers::pi * u);
    CHECK(std::abs(st.value(p, 1) - want) <= 1e-15);
    // Powers keep exact modulus 1 and the k-fold angle.
    const cplx want3 = std::polar(1.0, 2.0 * std::numbers::pi * 3.0 * u);
    CHECK(std::abs(st.value(p, 3) - want3) <= 1e-15);
    CHECK(rd.value(p, 1) == cplx{rademacher_value(9, p), 0.0});
    CHECK(rd.value(p, 2) == cplx{1.0, 0.0});  // sign^2
  }
}

TEST_CASE("capacity and domain guards") {
  const Multiplicative f(MultSpec::one(), tables());
  CHECK_THROWS_AS(summatory(f, 2e6), capacity_error);
  CHECK(summatory(f, 0.5) == cplx{0.0, 0.0});
  CHECK(summatory(f, 1.0) == cplx{1.0, 0.0});
  CHECK_THROWS_AS(identity_check(f, 1.5), std::domain_error);
}
