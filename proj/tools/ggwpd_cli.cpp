// ggwpd: kicked-rotor sweeps, saddle searches and manifold dumps

#include <array>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ggwpd/error.hpp"
#include "ggwpd/experiment.hpp"
#include "ggwpd/manifolds.hpp"

namespace fs = std::filesystem;
using namespace ggwpd;

namespace {

enum Exit { kOk = 0, kAcceptance = 1, kUsage = 2, kNumerical = 3 };

struct Common {
  std::string config_path;
  std::string preset_name;
  std::string out_dir = ".";
  std::optional<double> tol;
  std::optional<int> max_iter;
  std::optional<int> image_range;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON experiment configuration");
  cmd->add_option("--preset", c.preset_name, "built-in scenario (integrable-fig2, chaotic-fig6)");
  cmd->add_option("--out", c.out_dir, "output directory");
  cmd->add_option("--tol", c.tol, "saddle residual tolerance");
  cmd->add_option("--max-iter", c.max_iter, "Newton iteration limit");
  cmd->add_option("--image-range", c.image_range, "largest |n_p|, |n_q| of the final packet images");
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config_path.empty()) {
    std::ifstream f(c.config_path);
    if (!f) throw std::invalid_argument("cannot read config '" + c.config_path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    cfg = config_from_json(ss.str());
    if (!c.preset_name.empty()) throw std::invalid_argument("--preset and --config are exclusive");
  } else if (!c.preset_name.empty()) {
    cfg = preset(c.preset_name);
  } else {
    throw std::invalid_argument("one of --preset or --config is required");
  }
  if (c.tol) cfg.saddle.tol = *c.tol;
  if (c.max_iter) cfg.saddle.max_iter = *c.max_iter;
  if (c.image_range) cfg.image_range = *c.image_range;
  cfg.validate();
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
}

int run_sweep_cmd(const Common& c) {
  ExperimentConfig cfg = load(c);
  fs::create_directories(c.out_dir);
  SweepResult res = run_sweep(cfg);
  fs::path csv = fs::path(c.out_dir) / (cfg.name + ".csv");
  emit_csv(res.rows, csv.string());
  Report rep = emit_report(res, cfg);
  write_file(fs::path(c.out_dir) / (cfg.name + "_report.txt"), rep.text);
  std::cout << rep.text << "csv: " << csv.string() << "\n";
  if (!res.search_error.empty() && res.saddles.empty()) return kNumerical;
  return rep.pass ? kOk : kAcceptance;
}

int run_saddle_cmd(const Common& c) {
  ExperimentConfig cfg = load(c);
  const int n = cfg.seed_reference_N;
  RotorParams params{cfg.K};
  auto seeds = find_seeds(cfg.alpha(n), cfg.beta(n), cfg.t, params, cfg.regime, cfg.image_range, cfg.seeds);
  std::cout << fmt::format("{}: {} seed(s)\n", cfg.name, seeds.size());
  for (const SeedTrajectory& s : seeds) {
    SaddleTrajectory sd = find_saddle(cfg.alpha(n), cfg.beta(n), s, params, cfg.saddle);
    Complex P0 = sd.trajectory.initial().P(0), Q0 = sd.trajectory.initial().Q(0);
    std::cout << fmt::format("winding ({},{})  seed ({:.12f}, {:.12f})\n  P0 = {:.12f} {:+.12f}i\n  Q0 = {:.12f} {:+.12f}i\n"
                             "  iterations {}  residual {:.3e}\n",
                             s.winding[0], s.winding[1], s.ic.p, s.ic.q, P0.real(), P0.imag(), Q0.real(), Q0.imag(),
                             sd.iterations, sd.residual_norm);
  }
  return kOk;
}

int run_manifolds_cmd(const Common& c) {
  ExperimentConfig cfg = load(c);
  fs::create_directories(c.out_dir);
  const int n = cfg.seed_reference_N;
  RotorParams params{cfg.K};
  auto dump = [&](const ManifoldCurve& curve, const std::string& file) {
    fs::path p = fs::path(c.out_dir) / file;
    write_file(p, manifold_csv(curve));
    std::cout << fmt::format("{} ({} points)\n", p.string(), curve.points.size());
  };
  if (cfg.regime == Regime::integrable) {
    ManifoldCurve line = shearing_manifold(cfg.alpha(n), cfg.seeds.width_sigmas, cfg.seeds.spacing);
    dump(line, "shearing.csv");
    for (RealPoint& x : line.points) {
      for (int i = 0; i < cfg.t; ++i) x = map_step(x, cfg.K);
    }
    dump(line, "shearing_propagated.csv");
  } else {
    dump(unstable_manifold(cfg.alpha_center, params, cfg.seeds.arc_budget, cfg.seeds.manifold), "unstable.csv");
    auto seeds = find_seeds(cfg.alpha(n), cfg.beta(n), cfg.t, params, cfg.regime, cfg.image_range, cfg.seeds);
    std::set<std::array<int, 2>> done;
    for (const SeedTrajectory& s : seeds) {
      if (!done.insert(s.winding).second) continue;
      RealPoint img{cfg.beta_center.p + s.winding[0], cfg.beta_center.q + s.winding[1]};
      dump(stable_manifold(img, params, cfg.seeds.arc_budget, cfg.seeds.manifold),
           fmt::format("stable_{}_{}.csv", s.winding[0], s.winding[1]));
    }
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Gaussian wave packet dynamics on the kicked rotor"};
  app.require_subcommand(1);
  Common sweep_opts, saddle_opts, manifold_opts;
  CLI::App* sweep = app.add_subcommand("sweep", "run an N sweep, write CSV and report");
  CLI::App* saddle = app.add_subcommand("saddle", "find seeds and complex saddles for one scenario");
  CLI::App* manifolds = app.add_subcommand("manifolds", "dump manifold curves as CSV");
  add_common(sweep, sweep_opts);
  add_common(saddle, saddle_opts);
  add_common(manifolds, manifold_opts);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  try {
    if (*sweep) return run_sweep_cmd(sweep_opts);
    if (*saddle) return run_saddle_cmd(saddle_opts);
    if (*manifolds) return run_manifolds_cmd(manifold_opts);
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
