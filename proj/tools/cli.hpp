#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "henon/henon.hpp"

namespace henon::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kUsage = 2, kNotSaddle = 3 };

/// Settings shared by every subcommand.
struct RunConfig {
  std::string map_kind = "henon";  // "henon" or "general"
  double delta = 0.1;
  double mu = 2.0;
  std::string g = "logistic(2)";
  std::string h = "linear_plus_sine(0.1,0.001)";
  double delta_ref = 0.1;
  GridSpec grid{-1.0, 2.0, -0.5, 0.5, 400, 400};
  OrbitBudget budget = OrbitBudget::defaults_for(0.1);
  std::string out;  // empty: the subcommand's default file name
  std::uint64_t seed = 7;
  int workers = 1;

  MapFamily make_map() const {
    if (map_kind == "henon") return make_henon(delta, mu);
    return make_general(scalar_map_from_spec(g), scalar_map_from_spec(h), delta_ref);
  }

  /// Normalized `key = value` text; parsing it back gives the same config.
  std::string canonical() const {
    std::ostringstream s;
    if (map_kind == "henon") {
      s << "henon = " << format_real(delta) << ' ' << format_real(mu) << '\n';
    } else {
      s << "general = \"" << g << "\" \"" << h << "\"\n";
      s << "delta-ref = " << format_real(delta_ref) << '\n';
    }
    s << "window = " << format_real(grid.x_min) << ' ' << format_real(grid.x_max) << ' ' << format_real(grid.y_min)
      << ' ' << format_real(grid.y_max) << '\n';
    s << "size = " << grid.nx << ' ' << grid.ny << '\n';
    s << "max-iter = " << budget.max_iter << '\n';
    s << "escape-norm = " << format_real(budget.escape_norm) << '\n';
    s << "attract-tol = " << format_real(budget.attract_tol) << '\n';
    s << "confirm-steps = " << budget.confirm_steps << '\n';
    if (!out.empty()) s << "out = \"" << out << "\"\n";
    s << "seed = " << seed << '\n';
    s << "workers = " << workers << '\n';
    return s.str();
  }
};

namespace detail {

inline std::string output_path(const RunConfig& c, const std::string& fallback) {
  return c.out.empty() ? fallback : c.out;
}

/// Writes through `write` to stdout when path is "-", else to the file.
template <class F>
void emit(const std::string& path, std::ostream& out, F&& write, bool binary = false) {
  if (path == "-") {
    write(out);
    return;
  }
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw InvalidArgument("cannot open output file '" + path + "'");
  write(f);
  if (!f) throw NumericFailure("writing '" + path + "' failed");
}

inline std::string strip_extension(const std::string& path, const std::string& ext) {
  if (path.size() > ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
    return path.substr(0, path.size() - ext.size());
  return path;
}

inline std::string catalog_help() {
  std::string s = "Checks (verify ids):\n";
  for (const auto& c : check_catalog()) s += "  " + c.id + "\n      " + c.statement + "\n";
  return s;
}

}  // namespace detail

/// Runs the command line and returns the process exit code. Output goes to
/// `out`, diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Henon map dynamics: orbit fates, basins, invariant manifolds and statement checks."};
  app.footer(detail::catalog_help());
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "Plain-text `key = value` file; command-line flags override it");

  RunConfig cfg;
  std::vector<double> henon_args, window_args;
  std::vector<int> size_args;
  std::vector<std::string> general_args;
  std::optional<double> escape_norm;
  bool dump = false;

  app.add_option("--henon", henon_args, "Henon map with parameters DELTA MU")->expected(2);
  auto* general = app.add_option("--general", general_args, "General map G H, e.g. logistic(2) linear(0.1)")
                      ->expected(2)
                      ->excludes("--henon");
  app.add_option("--delta-ref", cfg.delta_ref, "Reference delta of the general map")->needs(general);
  app.add_option("--window", window_args, "Grid window XMIN XMAX YMIN YMAX")->expected(4);
  app.add_option("--size", size_args, "Grid cells NX NY")->expected(2);
  app.add_option("--max-iter", cfg.budget.max_iter, "Orbit iteration cap");
  app.add_option("--escape-norm", escape_norm, "Escape radius (default max(10, 3/|delta|))");
  app.add_option("--attract-tol", cfg.budget.attract_tol, "Convergence tolerance");
  app.add_option("--confirm-steps", cfg.budget.confirm_steps, "Consecutive iterates inside the tolerance");
  app.add_option("--out", cfg.out, "Output path ('-' for stdout)");
  app.add_option("--seed", cfg.seed, "Random seed");
  app.add_option("--workers", cfg.workers, "Worker threads (0: hardware concurrency)");
  app.add_flag("--dump-config", dump, "Print the normalized configuration and exit");

  auto* classify_cmd = app.add_subcommand("classify", "Fate of one point");
  std::vector<double> point;
  bool backward = false;
  classify_cmd->add_option("--point", point, "X Y")->expected(2)->required();
  classify_cmd->add_flag("--backward", backward, "Classify the backward orbit");

  auto* basin_cmd = app.add_subcommand("basin", "Rasterize forward fates; write PPM and boundary CSV");

  auto* manifold_cmd = app.add_subcommand("manifold", "Trace a branch of W^s or W^u of the origin");
  std::string kind = "stable", branch = "plus";
  double length = 6.0, spacing = 0.002;
  manifold_cmd->add_option("--kind", kind, "stable | unstable")->check(CLI::IsMember({"stable", "unstable"}));
  manifold_cmd->add_option("--branch", branch, "plus | minus")->check(CLI::IsMember({"plus", "minus"}));
  manifold_cmd->add_option("--length", length, "Target arclength");
  manifold_cmd->add_option("--spacing", spacing, "Maximum node spacing");

  auto* verify_cmd = app.add_subcommand("verify", "Run statement checks; write a JSON report");
  std::vector<std::string> ids;
  int samples = 1000;
  verify_cmd->add_option("ids", ids, "Check ids or 'all'");
  verify_cmd->add_option("--samples", samples, "Samples per check");

  auto* sweep_cmd = app.add_subcommand("sweep", "Largest passing delta per mu");
  std::vector<double> mus, deltas;
  int sweep_samples = 200;
  sweep_cmd->add_option("--mu", mus, "mu values in (1, 3)")->required();
  sweep_cmd->add_option("--delta", deltas, "delta grid")->expected(0, -1);
  sweep_cmd->add_option("--samples", sweep_samples, "Samples per check");

  // Shared options may follow the subcommand name.
  for (auto* sub : {classify_cmd, basin_cmd, manifold_cmd, verify_cmd, sweep_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (!henon_args.empty()) {
      cfg.map_kind = "henon";
      cfg.delta = henon_args[0];
      cfg.mu = henon_args[1];
    }
    if (!general_args.empty()) {
      cfg.map_kind = "general";
      cfg.g = general_args[0];
      cfg.h = general_args[1];
    }
    if (!window_args.empty()) {
      cfg.grid.x_min = window_args[0];
      cfg.grid.x_max = window_args[1];
      cfg.grid.y_min = window_args[2];
      cfg.grid.y_max = window_args[3];
    }
    if (!size_args.empty()) {
      cfg.grid.nx = size_args[0];
      cfg.grid.ny = size_args[1];
    }
    const double d = cfg.map_kind == "henon" ? cfg.delta : cfg.delta_ref;
    cfg.budget.escape_norm = escape_norm ? *escape_norm : (d != 0.0 ? OrbitBudget::defaults_for(d).escape_norm : 10.0);
    cfg.grid.validate();
    cfg.budget.validate();

    if (dump) {
      out << cfg.canonical();
      return kOk;
    }
    if (app.get_subcommands().empty()) {
      err << "error: a subcommand is required\n" << app.help();
      return kUsage;
    }
    const MapFamily map = cfg.make_map();

    if (*classify_cmd) {
      const Point2 p = checked_point(point[0], point[1]);
      const Fate f = classify(map, p, cfg.budget, backward ? Direction::Backward : Direction::Forward);
      out << "fate=" << to_string(f.kind) << " iters=" << f.iterations_used
          << " witness=" << (f.witness ? to_string(*f.witness) : "none") << '\n';
      return kOk;
    }

    if (*basin_cmd) {
      const BasinRaster r = rasterize(map, cfg.grid, cfg.budget, cfg.workers);
      const auto boundary = extract_boundary(r);
      const std::string stem = detail::strip_extension(detail::output_path(cfg, "basin.ppm"), ".ppm");
      detail::emit(stem + ".ppm", out, [&](std::ostream& o) { write_ppm(o, r); }, true);
      detail::emit(stem + "_boundary.csv", out, [&](std::ostream& o) { write_points_csv(o, boundary); });
      out << "cells=" << r.fates.size() << " to_alpha=" << r.count(FateKind::ToAlpha)
          << " to_infinity=" << r.count(FateKind::ToInfinity) << " to_origin=" << r.count(FateKind::ToOrigin)
          << " undecided=" << r.count(FateKind::Undecided) << " boundary=" << boundary.size() << '\n';
      return kOk;
    }

    if (*manifold_cmd) {
      saddle_at_origin(map);
      const ManifoldCurve c = trace_manifold(map, kind == "stable" ? ManifoldKind::Stable : ManifoldKind::Unstable,
                                             branch == "plus" ? Branch::Plus : Branch::Minus, length, spacing);
      detail::emit(detail::output_path(cfg, "manifold.csv"), out, [&](std::ostream& o) { write_curve_csv(o, c); });
      out << "points=" << c.points.size() << " length=" << format_real(c.length()) << " stop=" << to_string(c.stop)
          << '\n';
      return kOk;
    }

    if (*verify_cmd) {
      std::vector<std::string> run;
      if (ids.empty() || (ids.size() == 1 && ids[0] == "all")) {
        for (const auto& c : check_catalog()) run.push_back(c.id);
      } else {
        for (const auto& id : ids) run.push_back(find_check(id).id);
      }
      Json reports = Json::array();
      bool failed = false;
      std::ostringstream lines;
      for (const auto& id : run) {
        const CheckReport r = run_check(id, map, samples, cfg.seed);
        failed = failed || r.verdict == Verdict::Fail;
        lines << id << ' ' << to_string(r.verdict) << ' ' << r.passes << '/' << r.samples << '\n';
        reports.push_back(to_json(r));
      }
      detail::emit(detail::output_path(cfg, "verify.json"), out,
                   [&](std::ostream& o) { o << reports.dump(2) << '\n'; });
      out << lines.str();
      return failed ? kVerifyFailed : kOk;
    }

    if (*sweep_cmd) {
      const auto rows = sweep_delta_star(mus, deltas, sweep_samples, cfg.seed);
      detail::emit(detail::output_path(cfg, "-"), out, [&](std::ostream& o) { write_sweep_csv(o, rows); });
      return kOk;
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DynamicsPrecondition& e) {
    err << "error: " << e.what() << '\n';
    return kNotSaddle;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kVerifyFailed;
  }
  return kOk;
}

}  // namespace henon::cli
