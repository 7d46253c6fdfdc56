// halnum — command-line driver for the mean-value verification toolkit.
//
// Subcommands: sum, lx, verify, decompose, meanvalue, scan. Every run is
// driven by a declarative JSON config; all outputs carry a reproducibility
// header (spec, seed, x values, steps, chunk size, constants-file hash) and
// are byte-identical across thread counts.
//
// Exit codes: 0 ok; 1 bound-regression violation; 2 config/usage error;
// 3 capacity (sieve limit) error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "halnum/battery.hpp"
#include "halnum/constants.hpp"
#include "halnum/halasz.hpp"
#include "halnum/meanvalue.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;
using namespace halnum;

namespace {

struct RunConfig {
  std::vector<MultSpec> specs;
  std::vector<double> x_values;
  double grid_step = 0.0;        // 0 = auto
  double quadrature_step = 0.0;  // 0 = auto
  std::uint64_t chunk_size = 65536;
  std::string output = "out";
  std::string constants_file;
  std::vector<double> mv_T_values = {1.0, 5.0, 10.0};
  std::vector<double> mv_h_values = {0.0, 1.0};
};

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string number_tag(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%g", v);
  std::string out;
  for (char c : std::string(buf)) {
    if (c == '.') out += 'p';
    else if (c == '-') out += 'm';
    else if (c == '+') continue;
    else out += c;
  }
  return out;
}

double parse_step(const json& j, const char* field) {
  if (!j.contains(field)) return 0.0;
  const auto& v = j.at(field);
  if (v.is_string()) {
    if (v.get<std::string>() == "auto") return 0.0;
    throw config_error(std::string(field) + " must be \"auto\" or a number");
  }
  if (!v.is_number())
    throw config_error(std::string(field) + " must be \"auto\" or a number");
  const double s = v.get<double>();
  if (!(s > 0.0)) throw config_error(std::string(field) + " must be > 0");
  return s;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw config_error("config is not valid JSON: " + std::string(e.what()));
  }
  RunConfig cfg;
  int spec_sources = 0;
  if (j.contains("spec")) ++spec_sources;
  if (j.contains("specs")) ++spec_sources;
  if (j.contains("battery")) ++spec_sources;
  if (spec_sources != 1)
    throw config_error("config needs exactly one of: spec, specs, battery");
  if (j.contains("spec")) cfg.specs.push_back(spec_from_json(j.at("spec")));
  if (j.contains("specs")) {
    if (!j.at("specs").is_array() || j.at("specs").empty())
      throw config_error("specs must be a non-empty array");
    for (const auto& s : j.at("specs")) cfg.specs.push_back(spec_from_json(s));
  }
  if (j.contains("battery")) {
    const std::string b = j.at("battery").get<std::string>();
    if (b != "canonical") throw config_error("unknown battery: " + b);
    cfg.specs = canonical_battery();
  }
  if (!j.contains("x_values") || !j.at("x_values").is_array() ||
      j.at("x_values").empty())
    throw config_error("config needs a non-empty x_values array");
  for (const auto& v : j.at("x_values")) {
    if (!v.is_number()) throw config_error("x_values must be numbers");
    cfg.x_values.push_back(v.get<double>());
  }
  for (double x : cfg.x_values)
    if (!(x >= 2.0)) throw config_error("x_values must all be >= 2");
  cfg.grid_step = parse_step(j, "grid_step");
  cfg.quadrature_step = parse_step(j, "quadrature_step");
  if (j.contains("chunk_size")) {
    cfg.chunk_size = j.at("chunk_size").get<std::uint64_t>();
    if (cfg.chunk_size < 1024)
      throw config_error("chunk_size must be >= 1024");
  }
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  if (j.contains("constants_file"))
    cfg.constants_file = j.at("constants_file").get<std::string>();
  if (j.contains("meanvalue")) {
    const auto& mv = j.at("meanvalue");
    if (mv.contains("T_values")) {
      cfg.mv_T_values.clear();
      for (const auto& v : mv.at("T_values"))
        cfg.mv_T_values.push_back(v.get<double>());
      if (cfg.mv_T_values.empty())
        throw config_error("meanvalue.T_values must be non-empty");
    }
    if (mv.contains("h_values")) {
      cfg.mv_h_values.clear();
      for (const auto& v : mv.at("h_values"))
        cfg.mv_h_values.push_back(v.get<double>());
    }
  }
  return cfg;
}

void require_x_floor(const RunConfig& cfg, double floor_value,
                     const char* subcommand) {
  for (double x : cfg.x_values) {
    if (x < floor_value)
      throw config_error(std::string(subcommand) + " requires x_values >= " +
                         number_tag(floor_value) + ", got " + fmt17(x));
  }
}

struct Context {
  RunConfig cfg;
  fs::path out_dir;
  ExecPolicy policy;
  std::string constants_hash = "none";
  PrimeTables tables{2, {0, 0, 2}, {2}};  // replaced in main
};

// Reproducibility header: identical content regardless of thread count.
std::string csv_header(const Context& ctx, const MultSpec& spec) {
  std::ostringstream os;
  os << "# spec=" << spec_to_json(spec).dump() << "\n";
  os << "# seed=" << spec.seed << "\n";
  os << "# x_values=";
  for (std::size_t i = 0; i < ctx.cfg.x_values.size(); ++i)
    os << (i ? "," : "") << fmt17(ctx.cfg.x_values[i]);
  os << "\n# grid_step="
     << (ctx.cfg.grid_step > 0.0 ? fmt17(ctx.cfg.grid_step) : "auto");
  os << "\n# quadrature_step="
     << (ctx.cfg.quadrature_step > 0.0 ? fmt17(ctx.cfg.quadrature_step)
                                       : "auto");
  os << "\n# chunk_size=" << ctx.cfg.chunk_size;
  os << "\n# constants_hash=" << ctx.constants_hash << "\n";
  return os.str();
}

ordered_json json_meta(const Context& ctx, const MultSpec& spec) {
  ordered_json meta;
  meta["spec"] = spec_to_json(spec);
  meta["seed"] = spec.seed;
  meta["x_values"] = ctx.cfg.x_values;
  meta["grid_step"] = ctx.cfg.grid_step > 0.0
                          ? ordered_json(ctx.cfg.grid_step)
                          : ordered_json("auto");
  meta["quadrature_step"] = ctx.cfg.quadrature_step > 0.0
                                ? ordered_json(ctx.cfg.quadrature_step)
                                : ordered_json("auto");
  meta["chunk_size"] = ctx.cfg.chunk_size;
  meta["constants_hash"] = ctx.constants_hash;
  return meta;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write output file: " + path.string());
  out << content;
}

void write_json(const fs::path& path, const ordered_json& j) {
  write_text(path, j.dump(2) + "\n");
}

int cmd_sum(Context& ctx) {
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    std::ostringstream csv;
    csv << csv_header(ctx, spec) << "x,re_S,im_S\n";
    ordered_json rows = ordered_json::array();
    for (double x : ctx.cfg.x_values) {
      const cplx S = summatory(f, x, ctx.policy);
      csv << fmt17(x) << "," << fmt17(S.real()) << "," << fmt17(S.imag())
          << "\n";
      ordered_json row;
      row["x"] = x;
      row["re_S"] = S.real();
      row["im_S"] = S.imag();
      rows.push_back(row);
    }
    write_text(ctx.out_dir / ("sum_" + spec.label() + ".csv"), csv.str());
    ordered_json out;
    out["meta"] = json_meta(ctx, spec);
    out["rows"] = rows;
    write_json(ctx.out_dir / ("sum_" + spec.label() + ".json"), out);
    std::cout << "sum " << spec.label() << ": " << ctx.cfg.x_values.size()
              << " values\n";
  }
  return 0;
}

int cmd_lx(Context& ctx) {
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    for (double x : ctx.cfg.x_values) {
      const EulerGrid grid =
          build_euler_grid(f, x, ctx.cfg.grid_step, ctx.policy);
      const LxResult lx = compute_L(grid);
      const std::string tag = spec.label() + "_x" + number_tag(x);
      std::ostringstream csv;
      csv << csv_header(ctx, spec);
      {
        std::ostringstream body;
        write_grid_csv(grid, body);
        csv << body.str();
      }
      write_text(ctx.out_dir / ("grid_" + tag + ".csv"), csv.str());
      ordered_json out;
      out["meta"] = json_meta(ctx, spec);
      out["lx"] = lx_to_json(lx);
      write_json(ctx.out_dir / ("lx_" + tag + ".json"), out);
      std::cout << "lx " << spec.label() << " x=" << number_tag(x)
                << ": L=" << lx.L << " (step " << lx.grid_step << ")\n";
    }
  }
  return 0;
}

int cmd_decompose(Context& ctx) {
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    std::ostringstream csv;
    csv << csv_header(ctx, spec)
        << "x,re_S,im_S,re_reassembled,im_reassembled,defect,normalized_defect\n";
    ordered_json rows = ordered_json::array();
    for (double x : ctx.cfg.x_values) {
      const DecompositionCheck d = decomposition_check(f, x, ctx.policy);
      csv << fmt17(x) << "," << fmt17(d.S_direct.real()) << ","
          << fmt17(d.S_direct.imag()) << "," << fmt17(d.S_reassembled.real())
          << "," << fmt17(d.S_reassembled.imag()) << "," << fmt17(d.defect)
          << "," << fmt17(d.normalized_defect) << "\n";
      ordered_json row;
      row["x"] = x;
      row["re_S"] = d.S_direct.real();
      row["im_S"] = d.S_direct.imag();
      row["re_reassembled"] = d.S_reassembled.real();
      row["im_reassembled"] = d.S_reassembled.imag();
      row["defect"] = d.defect;
      row["normalized_defect"] = d.normalized_defect;
      rows.push_back(row);
      std::cout << "decompose " << spec.label() << " x=" << number_tag(x)
                << ": normalized defect " << d.normalized_defect << "\n";
    }
    write_text(ctx.out_dir / ("decompose_" + spec.label() + ".csv"),
               csv.str());
    ordered_json out;
    out["meta"] = json_meta(ctx, spec);
    out["rows"] = rows;
    write_json(ctx.out_dir / ("decompose_" + spec.label() + ".json"), out);
  }
  return 0;
}

void append_block_rows(std::ostringstream& csv, const MultSpec& spec,
                       const HalaszReport& rep) {
  for (const BlockReport& b : rep.blocks) {
    csv << spec.label() << "," << fmt17(rep.x) << "," << b.k << ","
        << b.primes_in_block << "," << fmt17(std::abs(b.S_k)) << ","
        << fmt17(b.trivial_ratio) << "," << fmt17(b.I1) << ","
        << fmt17(b.I2) << "," << fmt17(b.I2_window_majorized) << ","
        << fmt17(b.perron_majorant) << "," << fmt17(b.sharp_ratio) << ","
        << fmt17(rep.L) << "," << fmt17(rep.theorem_ratio) << "\n";
  }
}

constexpr const char* kBlockCsvColumns =
    "spec,x,k,primes_in_block,S_k_abs,trivial_ratio,I1,I2,"
    "I2_window_majorized,perron_majorant,sharp_ratio,L,theorem_ratio\n";

int cmd_verify(Context& ctx, const FrozenConstants& constants) {
  std::vector<std::string> all_violations;
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    ordered_json reports = ordered_json::array();
    std::ostringstream blocks_csv;
    blocks_csv << csv_header(ctx, spec) << kBlockCsvColumns;
    for (double x : ctx.cfg.x_values) {
      const HalaszReport rep =
          halasz_bound(f, x, ctx.cfg.grid_step, ctx.policy);
      const auto violations = frozen_violations(rep, constants);
      ordered_json rj = halasz_report_to_json(rep);
      rj["violations"] = violations;
      reports.push_back(rj);
      append_block_rows(blocks_csv, spec, rep);
      double worst_triv = 0.0, worst_sharp = 0.0;
      for (const BlockReport& b : rep.blocks) {
        worst_triv = std::max(worst_triv, b.trivial_ratio);
        worst_sharp = std::max(worst_sharp, b.sharp_ratio);
      }
      std::cout << "verify " << spec.label() << " x=" << number_tag(x)
                << ": L=" << rep.L << " |S|=" << rep.S_abs
                << " bound=" << rep.bound << " ratio=" << rep.theorem_ratio
                << " worst_trivial=" << worst_triv
                << " worst_sharp=" << worst_sharp
                << " violations=" << violations.size() << "\n";
      for (const std::string& v : violations)
        all_violations.push_back(spec.label() + ": " + v);
    }
    ordered_json out;
    out["meta"] = json_meta(ctx, spec);
    out["reports"] = reports;
    write_json(ctx.out_dir / ("verify_" + spec.label() + ".json"), out);
    write_text(ctx.out_dir / ("blocks_" + spec.label() + ".csv"),
               blocks_csv.str());
  }
  if (!all_violations.empty()) {
    std::cout << "FAIL: " << all_violations.size()
              << " frozen-constant violations\n";
    for (const std::string& v : all_violations) std::cout << "  " << v << "\n";
    return 1;
  }
  std::cout << "OK: all frozen-constant bounds hold\n";
  return 0;
}

int cmd_scan(Context& ctx) {
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    std::ostringstream curve;
    curve << csv_header(ctx, spec)
          << "x,L,S_abs,bound,theorem_ratio,normalized_defect,cutoff_k,"
             "max_trivial_ratio,max_sharp_ratio\n";
    std::ostringstream blocks_csv;
    blocks_csv << csv_header(ctx, spec) << kBlockCsvColumns;
    for (double x : ctx.cfg.x_values) {
      const HalaszReport rep =
          halasz_bound(f, x, ctx.cfg.grid_step, ctx.policy);
      double worst_triv = 0.0, worst_sharp = 0.0;
      for (const BlockReport& b : rep.blocks) {
        worst_triv = std::max(worst_triv, b.trivial_ratio);
        worst_sharp = std::max(worst_sharp, b.sharp_ratio);
      }
      curve << fmt17(x) << "," << fmt17(rep.L) << "," << fmt17(rep.S_abs)
            << "," << fmt17(rep.bound) << "," << fmt17(rep.theorem_ratio)
            << "," << fmt17(rep.normalized_defect) << "," << rep.cutoff_k
            << "," << fmt17(worst_triv) << "," << fmt17(worst_sharp) << "\n";
      append_block_rows(blocks_csv, spec, rep);
      std::cout << "scan " << spec.label() << " x=" << number_tag(x)
                << ": ratio=" << rep.theorem_ratio << "\n";
    }
    write_text(ctx.out_dir / ("scan_" + spec.label() + ".csv"), curve.str());
    write_text(ctx.out_dir / ("scan_blocks_" + spec.label() + ".csv"),
               blocks_csv.str());
  }
  return 0;
}

int cmd_meanvalue(Context& ctx) {
  for (const MultSpec& spec : ctx.cfg.specs) {
    Multiplicative f(spec, ctx.tables);
    std::ostringstream csv;
    csv << csv_header(ctx, spec)
        << "family,T,x,lhs,rhs,ratio,quadrature_step,lambda_squared_rhs\n";
    ordered_json rows = ordered_json::array();
    for (double x : ctx.cfg.x_values) {
      for (double T : ctx.cfg.mv_T_values) {
        if (T * T > x) continue;  // support [T^2, x] would be empty
        for (double h : ctx.cfg.mv_h_values) {
          const CoefficientFamily fam = twisted_prime_family(f, h, T * T, x);
          if (fam.support.empty()) continue;
          const MeanValueReport rep =
              meanvalue_report(fam, ctx.tables, T, ctx.cfg.quadrature_step,
                            ctx.policy);
          const ClassicalContrast contrast =
              classical_mv_contrast(fam, ctx.tables, T);
          csv << "\"" << rep.description << "\"," << fmt17(T) << ","
              << fmt17(x) << "," << fmt17(rep.lhs) << "," << fmt17(rep.rhs)
              << "," << fmt17(rep.ratio) << "," << fmt17(rep.quadrature_step)
              << "," << fmt17(contrast.lambda_squared_rhs) << "\n";
          ordered_json row;
          row["family"] = rep.description;
          row["T"] = T;
          row["x"] = x;
          row["lhs"] = rep.lhs;
          row["rhs"] = rep.rhs;
          row["ratio"] = rep.ratio;
          row["quadrature_step"] = rep.quadrature_step;
          row["lambda_squared_rhs"] = contrast.lambda_squared_rhs;
          rows.push_back(row);
          std::cout << "meanvalue " << spec.label() << " T=" << number_tag(T)
                    << " x=" << number_tag(x) << " h=" << number_tag(h)
                    << ": ratio=" << rep.ratio << "\n";
        }
      }
    }
    write_text(ctx.out_dir / ("meanvalue_" + spec.label() + ".csv"),
               csv.str());
    ordered_json out;
    out["meta"] = json_meta(ctx, spec);
    out["rows"] = rows;
    write_json(ctx.out_dir / ("meanvalue_" + spec.label() + ".json"), out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mean-value verification toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --config etc. after the subcommand name
  std::string config_path, out_override;
  unsigned threads = 1;
  bool have_seed_override = false;
  std::uint64_t seed_override = 0;
  app.add_option("--config", config_path, "path to the JSON run config")
      ->required();
  app.add_option("--out", out_override, "output directory (overrides config)");
  app.add_option("--threads", threads, "worker threads (default 1)");
  auto* seed_opt = app.add_option("--seed-override", seed_override,
                                  "replace the seed of every random spec");
  auto* sum_cmd = app.add_subcommand("sum", "summatory values S(x)");
  auto* lx_cmd = app.add_subcommand("lx", "Euler-product grid and L(x)");
  auto* verify_cmd =
      app.add_subcommand("verify", "full bound verification with assertions");
  auto* decompose_cmd =
      app.add_subcommand("decompose", "prime-block decomposition check");
  auto* meanvalue_cmd =
      app.add_subcommand("meanvalue", "prime-supported mean value battery");
  auto* scan_cmd = app.add_subcommand("scan", "ratio-vs-x curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  have_seed_override = seed_opt->count() > 0;

  try {
    Context ctx;
    ctx.cfg = parse_config(config_path);
    if (!out_override.empty()) ctx.cfg.output = out_override;
    if (have_seed_override) {
      for (MultSpec& s : ctx.cfg.specs) {
        if (s.kind == MultKind::RandomSteinhaus ||
            s.kind == MultKind::RandomRademacher)
          s.seed = seed_override;
      }
    }
    ctx.policy.threads = threads == 0 ? 1 : threads;
    ctx.policy.chunk = ctx.cfg.chunk_size;
    ctx.out_dir = ctx.cfg.output;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec)
      throw config_error("cannot create output directory: " +
                         ctx.out_dir.string());

    // Pipelines that use grids, blocks, or window sups need x >= 100;
    // plain summation only needs x >= 2.
    if (verify_cmd->parsed() || lx_cmd->parsed() || decompose_cmd->parsed() ||
        scan_cmd->parsed())
      require_x_floor(ctx.cfg, 100.0, "this subcommand");

    FrozenConstants constants{};
    if (verify_cmd->parsed()) {
      if (ctx.cfg.constants_file.empty())
        throw config_error("verify requires constants_file in the config");
      constants = FrozenConstants::load(ctx.cfg.constants_file);
    }
    if (!ctx.cfg.constants_file.empty())
      ctx.constants_hash = file_hash_hex(ctx.cfg.constants_file);

    const double x_max =
        *std::max_element(ctx.cfg.x_values.begin(), ctx.cfg.x_values.end());
    const std::uint64_t limit =
        std::max<std::uint64_t>(static_cast<std::uint64_t>(std::floor(x_max)),
                                100);
    ctx.tables = build_tables(limit, ctx.policy.threads);

    if (sum_cmd->parsed()) return cmd_sum(ctx);
    if (lx_cmd->parsed()) return cmd_lx(ctx);
    if (verify_cmd->parsed()) return cmd_verify(ctx, constants);
    if (decompose_cmd->parsed()) return cmd_decompose(ctx);
    if (meanvalue_cmd->parsed()) return cmd_meanvalue(ctx);
    if (scan_cmd->parsed()) return cmd_scan(ctx);
    throw config_error("no subcommand selected");
  } catch (const config_error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
