#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "specshare/config_file.hpp"
#include "specshare/errors.hpp"
#include "specshare/experiments.hpp"
#include "specshare/solver.hpp"
#include "specshare/sweep_file.hpp"
#include "specshare/version.hpp"
#include "specshare/welfare.hpp"

namespace specshare::cli {

using nlohmann::json;

inline std::string git_describe() {
  std::string out = "unknown";
#if defined(__unix__) || defined(__APPLE__)
  if (FILE* pipe = ::popen("git describe --always --dirty 2>/dev/null", "r")) {
    char buf[128];
    std::string s;
    while (std::fgets(buf, sizeof(buf), pipe)) s += buf;
    ::pclose(pipe);
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
    if (!s.empty()) out = s;
  }
#endif
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Overrides {
  std::optional<double> alpha, beta, shared_bw, degradation, tol;
  std::optional<long> n_sps;
  std::optional<std::vector<double>> proprietary;
  std::uint64_t seed = 0;
  int restarts = 8;
};

/// Applies flag overrides on top of a parsed config; flags win over the file.
inline void apply_overrides(MarketConfig& c, const Overrides& ov) {
  if (ov.n_sps) {
    if (*ov.n_sps < 1) throw ConfigError("--N must be >= 1");
    const std::size_t n = static_cast<std::size_t>(*ov.n_sps);
    if (n != c.n_sps) {
      for (std::size_t i = 1; i < c.n_sps; ++i)
        if (c.endowments[i].proprietary_bw != c.endowments[0].proprietary_bw ||
            c.endowments[i].pooled_shared() != c.endowments[0].pooled_shared())
          throw ConfigError("--N cannot resize an asymmetric config");
      const SpectrumEndowment tmpl =
          c.endowments.empty() ? SpectrumEndowment{} : c.endowments[0];
      c.endowments.assign(n, tmpl);
      c.n_sps = n;
    }
  }
  if (ov.proprietary) {
    const auto& bs = *ov.proprietary;
    if (bs.size() == 1) {
      for (auto& e : c.endowments) e.proprietary_bw = bs[0];
    } else if (bs.size() == c.n_sps) {
      for (std::size_t i = 0; i < c.n_sps; ++i)
        c.endowments[i].proprietary_bw = bs[i];
    } else {
      throw ConfigError("--B needs 1 value or one per SP");
    }
  }
  if (ov.alpha) c.availability = *ov.alpha;
  if (ov.degradation) c.degradation = *ov.degradation;
  if (ov.shared_bw || ov.beta) {
    const double current = c.total_shared();
    const double w = ov.shared_bw.value_or(current);
    double beta = 1.0;
    if (ov.beta)
      beta = *ov.beta;
    else if (current > 0.0)
      beta = c.open_access_bw / current;
    if (!(beta >= 0.0 && beta <= 1.0))
      throw ConfigError("--beta out of range [0,1]");
    if (w < 0.0) throw ConfigError("--W must be nonnegative");
    const double slice = (1.0 - beta) * w / static_cast<double>(c.n_sps);
    for (auto& e : c.endowments) {
      e.licensed_shared_bws.clear();
      if (slice > 0.0) e.licensed_shared_bws.push_back(slice);
    }
    c.open_access_bw = beta * w;
    c.declared_shared_bw = w;
  }
  c.validate();
}

inline json allocation_json(const Allocation& a) {
  return json{{"licensed", a.licensed}, {"open", a.open}};
}

inline json solve_to_json(const MarketConfig& c, const EquilibriumResult& eq) {
  const WelfareReport wf = welfare_report(c, eq.allocation);
  json j;
  j["config_digest"] = config_digest(c);
  j["allocation"] = allocation_json(eq.allocation);
  j["prices"] = {{"delivered", eq.prices.delivered_price},
                 {"licensed", eq.prices.licensed_prices},
                 {"open", eq.prices.open_prices},
                 {"blended", eq.prices.blended_prices}};
  j["revenues"] = eq.revenues;
  j["welfare"] = {{"consumer_surplus", wf.consumer_surplus},
                  {"social_welfare", wf.social_welfare},
                  {"total_served", wf.total_served},
                  {"avg_price", wf.avg_price},
                  {"avg_latency", wf.avg_latency},
                  {"avg_licensed_latency", wf.avg_licensed_latency},
                  {"avg_open_latency", wf.avg_open_latency}};
  j["kkt"] = {{"pass", eq.kkt.pass()},
              {"max_stationarity_violation", eq.kkt.max_stationarity_violation},
              {"max_complementarity_violation",
               eq.kkt.max_complementarity_violation},
              {"max_congestion_order_violation",
               eq.kkt.max_congestion_order_violation},
              {"prices_nonnegative", eq.kkt.prices_nonnegative},
              {"tolerance", eq.kkt.tolerance}};
  j["vacating_sps"] = eq.vacating_sps();
  j["iterations"] = eq.iterations;
  j["residual"] = eq.residual;
  j["max_restart_distance"] = eq.max_restart_distance;
  return j;
}

struct ManifestInfo {
  std::string command;
  std::string job;
  json parameters;
  std::uint64_t seed = 0;
  std::size_t rows = 0;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
};

inline json manifest_json(const ManifestInfo& m) {
  return json{{"command", m.command},
              {"job", m.job},
              {"parameters", m.parameters},
              {"git_describe", git_describe()},
              {"seed", m.seed},
              {"rows", m.rows},
              {"outputs", m.outputs},
              {"tool_version", kVersion},
              {"wall_time_s", m.wall_time_s}};
}

inline std::string join_args(const std::vector<std::string>& args) {
  std::string s;
  for (const auto& a : args) {
    if (!s.empty()) s += ' ';
    s += a;
  }
  return s;
}

inline std::vector<std::string> write_tables(
    const std::vector<NamedTable>& tables, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> paths;
  for (const auto& t : tables) {
    const std::string path = out_dir + "/" + t.name + ".csv";
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write '" + path + "'");
    t.write_csv(os);
    paths.push_back(path);
  }
  return paths;
}

inline int run_cli(std::vector<std::string> args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Cournot spectrum-sharing equilibrium engine"};
  app.require_subcommand(1);

  // solve ---------------------------------------------------------------
  std::string config_path;
  Overrides ov;
  bool dump_config = false;
  std::string b_list;
  auto* solve = app.add_subcommand("solve",
                                   "compute the equilibrium for a config file");
  solve->add_option("config", config_path, "market config file")->required();
  double alpha_v, beta_v, w_v, d_v, tol_v;
  long n_v;
  auto* alpha_opt = solve->add_option("--alpha", alpha_v, "availability override");
  auto* beta_opt = solve->add_option("--beta", beta_v, "open-access fraction override");
  auto* w_opt = solve->add_option("--W", w_v, "total shared bandwidth override");
  auto* d_opt = solve->add_option("--d", d_v, "degradation override");
  auto* n_opt = solve->add_option("--N", n_v, "number of SPs override");
  solve->add_option("--B", b_list,
                    "proprietary bandwidths override (comma list, or one value "
                    "for all SPs)");
  auto* tol_opt = solve->add_option("--tol", tol_v, "solver residual tolerance");
  solve->add_option("--seed", ov.seed, "solver restart seed");
  solve->add_option("--restarts", ov.restarts, "solver restarts");
  solve->add_flag("--dump-config", dump_config,
                  "print the canonical config instead of solving");

  // figure ----------------------------------------------------------------
  std::string job_name, out_dir = ".";
  std::uint64_t job_seed = 0;
  auto* figure = app.add_subcommand("figure", "run a named figure job");
  figure->add_option("job", job_name, "job name (see --list)")->required();
  figure->add_option("--out", out_dir, "output directory");
  figure->add_option("--seed", job_seed, "job seed");

  // sweep ----------------------------------------------------------------
  std::string sweep_path, sweep_out = ".";
  std::uint64_t sweep_seed_flag = 0;
  bool sweep_seed_set = false;
  auto* sweep = app.add_subcommand("sweep", "run a sweep spec file");
  sweep->add_option("spec", sweep_path, "sweep spec file")->required();
  sweep->add_option("--out", sweep_out, "output directory");
  sweep->add_option("--seed", sweep_seed_flag, "seed override")
      ->each([&](const std::string&) { sweep_seed_set = true; });

  // auction ----------------------------------------------------------------
  double auc_b1 = 1.0, auc_b2 = 1.0, auc_w = 1.0;
  std::string auc_alphas = "0.1,0.5,0.9";
  auto* auction = app.add_subcommand("auction",
                                     "ascending-auction comparison table");
  auction->add_option("--B1", auc_b1, "larger SP proprietary bandwidth");
  auction->add_option("--B2", auc_b2, "smaller SP proprietary bandwidth");
  auction->add_option("--W", auc_w, "shared bandwidth at stake");
  auction->add_option("--alpha", auc_alphas, "comma list of availabilities");

  std::vector<std::string> raw = args;
  try {
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  try {
    if (solve->parsed()) {
      if (*alpha_opt) ov.alpha = alpha_v;
      if (*beta_opt) ov.beta = beta_v;
      if (*w_opt) ov.shared_bw = w_v;
      if (*d_opt) ov.degradation = d_v;
      if (*n_opt) ov.n_sps = n_v;
      if (*tol_opt) ov.tol = tol_v;
      if (!b_list.empty()) {
        std::vector<double> bs;
        for (const auto& tok : detail::split(b_list, ','))
          bs.push_back(detail::parse_number(tok, "--B"));
        ov.proprietary = bs;
      }
      MarketConfig c = parse_market_config(read_file(config_path));
      apply_overrides(c, ov);
      if (dump_config) {
        out << canonical_config(c);
        return 0;
      }
      SolverOptions opt;
      opt.seed = ov.seed;
      opt.restarts = ov.restarts;
      if (ov.tol) opt.tolerance = *ov.tol;
      const EquilibriumResult eq = solve_equilibrium(c, opt);
      out << solve_to_json(c, eq).dump(2) << "\n";
      return eq.kkt.pass() ? 0 : 2;
    }

    if (figure->parsed()) {
      const FigureJob& job = find_job(job_name);
      const auto tables = job.run(job_seed);
      const auto paths = write_tables(tables, out_dir);
      ManifestInfo m;
      m.command = join_args(raw);
      m.job = job.name;
      m.parameters = {{"description", job.description}};
      m.seed = job_seed;
      for (const auto& t : tables) m.rows += t.rows.size();
      m.outputs = paths;
      m.wall_time_s = elapsed();
      const json mj = manifest_json(m);
      std::ofstream os(out_dir + "/" + job.name + "_manifest.json",
                       std::ios::trunc);
      os << mj.dump(2) << "\n";
      out << mj.dump(2) << "\n";
      return 0;
    }

    if (sweep->parsed()) {
      SweepSpec spec = parse_sweep_spec(read_file(sweep_path));
      if (sweep_seed_set) spec.seed = sweep_seed_flag;
      NamedTable t = run_sweep(spec);
      const auto paths = write_tables({t}, sweep_out);
      ManifestInfo m;
      m.command = join_args(raw);
      m.job = "sweep:" + spec.axis;
      m.parameters = {{"axis", spec.axis},
                      {"points", spec.grid.size()},
                      {"outputs", spec.outputs},
                      {"config_digest", config_digest(spec.base)}};
      m.seed = spec.seed;
      m.rows = t.rows.size();
      m.outputs = paths;
      m.wall_time_s = elapsed();
      const json mj = manifest_json(m);
      std::ofstream os(sweep_out + "/sweep_manifest.json", std::ios::trunc);
      os << mj.dump(2) << "\n";
      out << mj.dump(2) << "\n";
      return 0;
    }

    if (auction->parsed()) {
      std::vector<double> alphas;
      for (const auto& tok : detail::split(auc_alphas, ','))
        alphas.push_back(detail::parse_number(tok, "--alpha"));
      const auto sc = auction_compare(auc_b1, auc_b2, auc_w, alphas);
      auction_table(sc).write_csv(out);
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace specshare::cli
