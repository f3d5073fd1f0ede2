#include "ggwpd/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>
#include <json.hpp>

#include "ggwpd/error.hpp"
#include "ggwpd/quantum.hpp"

namespace ggwpd {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<int> n_range(int start, int stop, int step) {
  std::vector<int> out;
  for (int n = start; n <= stop; n += step) out.push_back(n);
  return out;
}

const char* regime_name(Regime r) { return r == Regime::integrable ? "integrable" : "chaotic"; }

}  // namespace

void ExperimentConfig::validate() const {
  if (!std::isfinite(K) || K < 0.0) throw std::invalid_argument("config: K must be finite and non-negative");
  if (t < 0) throw std::invalid_argument("config: t must be non-negative");
  for (int n : N_list) {
    if (n < 2) throw std::invalid_argument("config: N_list entries must be at least 2");
  }
  if (seed_reference_N < 2) throw std::invalid_argument("config: seed_reference_N must be at least 2");
  if (image_range < 0) throw std::invalid_argument("config: image_range must be non-negative");
  if (!(width_factor > 0.0)) throw std::invalid_argument("config: width_factor must be positive");
  if (!(saddle.tol > 0.0)) throw std::invalid_argument("config: tol must be positive");
  if (saddle.max_iter < 1) throw std::invalid_argument("config: max_iter must be positive");
}

GaussianPacket ExperimentConfig::alpha(int N) const {
  return GaussianPacket::one_d(alpha_center.p, alpha_center.q, width_factor * kPi * N, 1.0 / (2.0 * kPi * N));
}

GaussianPacket ExperimentConfig::beta(int N) const {
  return GaussianPacket::one_d(beta_center.p, beta_center.q, width_factor * kPi * N, 1.0 / (2.0 * kPi * N));
}

std::vector<std::string> preset_names() { return {"integrable-fig2", "chaotic-fig6"}; }

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.name = name;
  c.t = 2;
  c.N_list = n_range(50, 700, 50);
  if (name == "integrable-fig2") {
    c.K = 0.05;
    c.alpha_center = {0.815, 0.2};
    c.beta_center = {0.77, 0.8};
    c.regime = Regime::integrable;
    c.image_range = 1;
    c.references = {{{0.8075799, 0.20}, {0.8019843, 0.0062830}, {0.2062830, 0.0130157}}};
  } else if (name == "chaotic-fig6") {
    c.K = 8.25;
    c.alpha_center = {0.0, 0.0};
    c.beta_center = {0.0, 0.5};
    c.regime = Regime::chaotic;
    // the reflected partner of the (1, 1.5) image is (-1, -1.5)
    c.image_range = 2;
    c.references = {
        {{-0.0892369, -0.0766275}, {0.0095152, -0.0611558}, {-0.0611558, -0.0095152}},
        {{-0.1125783, -0.0966593}, {0.0115409, -0.0764952}, {-0.0764952, -0.0115409}},
    };
  } else {
    throw std::invalid_argument("unknown preset '" + name + "'");
  }
  return c;
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
  static const std::set<std::string> known = {
      "preset", "name", "K", "t", "alpha", "beta", "N_list", "N_range", "regime", "image_range", "width_factor",
      "seed_reference_N", "tol", "max_iter", "max_halvings", "runaway_bound", "prune_sigmas", "width_sigmas",
      "spacing", "arc_budget", "prune_ratio", "branch_subdivisions"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) throw std::invalid_argument("config: unknown key '" + it.key() + "'");
  }
  try {
    ExperimentConfig c;
    if (j.contains("preset")) {
      c = preset(j["preset"].get<std::string>());
    } else {
      c.references.clear();
    }
    auto point = [](const nlohmann::json& v, const char* key) {
      if (!v.is_array() || v.size() != 2) throw std::invalid_argument(std::string("config: ") + key + " must be [p, q]");
      return RealPoint{v[0].get<double>(), v[1].get<double>()};
    };
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("K")) c.K = j["K"].get<double>();
    if (j.contains("t")) c.t = j["t"].get<int>();
    if (j.contains("alpha")) c.alpha_center = point(j["alpha"], "alpha");
    if (j.contains("beta")) c.beta_center = point(j["beta"], "beta");
    if (j.contains("N_list")) c.N_list = j["N_list"].get<std::vector<int>>();
    if (j.contains("N_range")) {
      const auto& r = j["N_range"];
      int step = r.value("step", 50);
      if (step < 1) throw std::invalid_argument("config: N_range step must be positive");
      c.N_list = n_range(r.at("start").get<int>(), r.at("stop").get<int>(), step);
    }
    if (j.contains("regime")) {
      std::string r = j["regime"].get<std::string>();
      if (r == "integrable") c.regime = Regime::integrable;
      else if (r == "chaotic") c.regime = Regime::chaotic;
      else throw std::invalid_argument("config: regime must be 'integrable' or 'chaotic'");
    }
    if (j.contains("image_range")) c.image_range = j["image_range"].get<int>();
    if (j.contains("width_factor")) c.width_factor = j["width_factor"].get<double>();
    if (j.contains("seed_reference_N")) c.seed_reference_N = j["seed_reference_N"].get<int>();
    if (j.contains("tol")) c.saddle.tol = j["tol"].get<double>();
    if (j.contains("max_iter")) c.saddle.max_iter = j["max_iter"].get<int>();
    if (j.contains("max_halvings")) c.saddle.max_halvings = j["max_halvings"].get<int>();
    if (j.contains("runaway_bound")) c.saddle.propagation.runaway_bound = j["runaway_bound"].get<double>();
    if (j.contains("prune_sigmas")) c.seeds.prune_sigmas = j["prune_sigmas"].get<double>();
    if (j.contains("width_sigmas")) c.seeds.width_sigmas = j["width_sigmas"].get<double>();
    if (j.contains("spacing")) c.seeds.spacing = j["spacing"].get<double>();
    if (j.contains("arc_budget")) c.seeds.arc_budget = j["arc_budget"].get<double>();
    if (j.contains("prune_ratio")) c.evaluation.prune_ratio = j["prune_ratio"].get<double>();
    if (j.contains("branch_subdivisions")) c.evaluation.tracking.subdivisions = j["branch_subdivisions"].get<int>();
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
}

void fill_metrics(SweepRow& row) {
  auto metrics = [&](Complex x, double& abs_err, double& ratio, double& phase) {
    abs_err = std::abs(row.qm - x);
    ratio = std::abs(row.qm) / std::abs(x);
    phase = std::arg(row.qm * std::conj(x));
    // arg returns values in [-pi, pi]; fold -pi onto pi
    if (phase == -kPi) phase = kPi;
  };
  metrics(row.oc, row.abs_err_oc, row.ratio_oc, row.phase_err_oc);
  metrics(row.ggwpd, row.abs_err_ggwpd, row.ratio_ggwpd, row.phase_err_ggwpd);
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  SweepResult out;
  if (config.N_list.empty()) return out;
  const RotorParams params{config.K};
  const int nref = config.seed_reference_N;
  bool saddles_ok = false;
  try {
    out.seeds = find_seeds(config.alpha(nref), config.beta(nref), config.t, params, config.regime, config.image_range,
                           config.seeds);
    for (const SeedTrajectory& s : out.seeds) {
      out.saddles.push_back(find_saddle(config.alpha(nref), config.beta(nref), s, params, config.saddle));
    }
    // the saddles do not depend on N when b scales as 1/hbar; confirm at the last N
    const int nlast = config.N_list.back();
    for (const SaddleTrajectory& s : out.saddles) {
      SaddleTrajectory again = find_saddle(config.alpha(nlast), config.beta(nlast), s.seed, params, config.saddle);
      const ComplexPhasePoint& a = s.trajectory.initial();
      const ComplexPhasePoint& b = again.trajectory.initial();
      out.hbar_drift = std::max({out.hbar_drift, (a.P - b.P).cwiseAbs().maxCoeff(), (a.Q - b.Q).cwiseAbs().maxCoeff()});
    }
    saddles_ok = true;
  } catch (const std::exception& e) {
    out.search_error = e.what();
  }

  for (int N : config.N_list) {
    SweepRow row;
    row.N = N;
    const GaussianPacket a = config.alpha(N);
    const GaussianPacket b = config.beta(N);
    std::vector<std::string> errors;
    try {
      row.qm = quantum_correlation(floquet_matrix(N, config.K), a, b, config.t);
    } catch (const std::exception& e) {
      row.qm = Complex(kNaN, kNaN);
      errors.push_back(std::string("quantum: ") + e.what());
    }
    if (saddles_ok) {
      try {
        row.oc = offcenter_correlation(a, b, out.seeds, params, config.t, config.evaluation).value;
      } catch (const std::exception& e) {
        row.oc = Complex(kNaN, kNaN);
        errors.push_back(std::string("off-center: ") + e.what());
      }
      try {
        row.ggwpd = ggwpd_correlation(a, b, out.saddles, config.evaluation).value;
      } catch (const std::exception& e) {
        row.ggwpd = Complex(kNaN, kNaN);
        errors.push_back(std::string("ggwpd: ") + e.what());
      }
    } else {
      row.oc = row.ggwpd = Complex(kNaN, kNaN);
      errors.push_back("seed/saddle search: " + out.search_error);
    }
    fill_metrics(row);
    for (std::size_t i = 0; i < errors.size(); ++i) row.error += (i ? "; " : "") + errors[i];
    out.rows.push_back(std::move(row));
  }
  return out;
}

std::string csv_text(const std::vector<SweepRow>& rows) {
  std::string out =
      "N,qm_re,qm_im,oc_re,oc_im,ggwpd_re,ggwpd_im,abs_err_oc,abs_err_ggwpd,ratio_oc,ratio_ggwpd,phase_err_oc,"
      "phase_err_ggwpd\n";
  for (const SweepRow& r : rows) {
    out += fmt::format("{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                       r.N, r.qm.real(), r.qm.imag(), r.oc.real(), r.oc.imag(), r.ggwpd.real(), r.ggwpd.imag(),
                       r.abs_err_oc, r.abs_err_ggwpd, r.ratio_oc, r.ratio_ggwpd, r.phase_err_oc, r.phase_err_ggwpd);
  }
  return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f << csv_text(rows);
  f.close();
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<SweepRow> rows;
  if (!std::getline(in, line)) return rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 13) throw std::runtime_error("csv: expected 13 columns, got " + std::to_string(cells.size()));
    auto num = [&](int i) { return std::strtod(cells[i].c_str(), nullptr); };
    SweepRow r;
    r.N = std::stoi(cells[0]);
    r.qm = {num(1), num(2)};
    r.oc = {num(3), num(4)};
    r.ggwpd = {num(5), num(6)};
    r.abs_err_oc = num(7);
    r.abs_err_ggwpd = num(8);
    r.ratio_oc = num(9);
    r.ratio_ggwpd = num(10);
    r.phase_err_oc = num(11);
    r.phase_err_ggwpd = num(12);
    rows.push_back(r);
  }
  return rows;
}

namespace {

struct Checker {
  Report& report;
  void line(bool ok, const std::string& what) {
    report.text += fmt::format("{}  {}\n", ok ? "PASS" : "FAIL", what);
    report.pass = report.pass && ok;
  }
};

}  // namespace

Report emit_report(const SweepResult& result, const ExperimentConfig& config) {
  Report rep;
  Checker check{rep};
  rep.text += fmt::format("scenario {}  ({}, K = {}, t = {}, alpha = ({}, {}), beta = ({}, {}))\n", config.name,
                          regime_name(config.regime), config.K, config.t, config.alpha_center.p, config.alpha_center.q,
                          config.beta_center.p, config.beta_center.q);
  if (!result.search_error.empty()) rep.text += "search error: " + result.search_error + "\n";

  rep.text += fmt::format("\nseeds and saddles (packets at N = {})\n", config.seed_reference_N);
  for (const SaddleTrajectory& s : result.saddles) {
    const Complex P0 = s.trajectory.initial().P(0), Q0 = s.trajectory.initial().Q(0);
    rep.text += fmt::format(
        "  winding ({:2d},{:2d})  seed ({:.10f}, {:.10f})  P0 = {:.10f}{:+.10f}i  Q0 = {:.10f}{:+.10f}i  "
        "iterations {}  residual {:.3e}  Re F- {:.6f}\n",
        s.seed.winding[0], s.seed.winding[1], s.seed.ic.p, s.seed.ic.q, P0.real(), P0.imag(), Q0.real(), Q0.imag(),
        s.iterations, s.residual_norm, f_minus(config.alpha(config.seed_reference_N), s.trajectory.initial()).real());
  }

  rep.text += "\n";
  for (const ReferenceSaddle& ref : config.references) {
    const SaddleTrajectory* best = nullptr;
    double dseed = std::numeric_limits<double>::infinity();
    for (const SaddleTrajectory& s : result.saddles) {
      double d = std::max(std::abs(s.seed.ic.p - ref.seed.p), std::abs(s.seed.ic.q - ref.seed.q));
      if (d < dseed) {
        dseed = d;
        best = &s;
      }
    }
    if (!best) {
      check.line(false, fmt::format("reference seed ({}, {}) not found", ref.seed.p, ref.seed.q));
      continue;
    }
    const Complex P0 = best->trajectory.initial().P(0), Q0 = best->trajectory.initial().Q(0);
    double dev = std::max({std::abs(P0.real() - ref.P0.real()), std::abs(P0.imag() - ref.P0.imag()),
                           std::abs(Q0.real() - ref.Q0.real()), std::abs(Q0.imag() - ref.Q0.imag())});
    check.line(dseed <= 1e-6, fmt::format("seed ({}, {}) recovered, deviation {:.3e}", ref.seed.p, ref.seed.q, dseed));
    check.line(dev <= 1e-6,
               fmt::format("saddle P0 = {}{:+}i, Q0 = {}{:+}i, largest component deviation {:.3e}", ref.P0.real(),
                           ref.P0.imag(), ref.Q0.real(), ref.Q0.imag(), dev));
    check.line(best->iterations <= 8, fmt::format("Newton iterations {} (at most 8)", best->iterations));
    if (config.regime == Regime::chaotic) {
      check.line(std::abs(P0 - I * Q0) < 1e-12, fmt::format("|P0 - i Q0| = {:.3e}", std::abs(P0 - I * Q0)));
      const SaddleTrajectory* mirror = nullptr;
      for (const SaddleTrajectory& s : result.saddles) {
        if (std::abs(s.seed.ic.p + best->seed.ic.p) < 1e-9 && std::abs(s.seed.ic.q + best->seed.ic.q) < 1e-9) mirror = &s;
      }
      double dm = std::numeric_limits<double>::infinity();
      if (mirror) {
        dm = std::max(std::abs(mirror->trajectory.initial().P(0) + P0), std::abs(mirror->trajectory.initial().Q(0) + Q0));
      }
      check.line(dm <= 1e-10, fmt::format("reflected seed gives the negated saddle, deviation {:.3e}", dm));
    }
  }
  if (!result.saddles.empty()) {
    check.line(result.hbar_drift <= 1e-10,
               fmt::format("saddles independent of N, drift {:.3e} at N = {}", result.hbar_drift, config.N_list.back()));
  }

  rep.text += fmt::format("\n{:>5} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12} {:>12}\n", "N", "|C_qm|", "err_oc",
                          "err_ggwpd", "ratio_oc", "ratio_ggwpd", "phase_oc", "phase_ggwpd");
  for (const SweepRow& r : result.rows) {
    rep.text += fmt::format("{:5d} {:12.5e} {:12.5e} {:12.5e} {:12.8f} {:12.8f} {:12.4e} {:12.4e}{}\n", r.N,
                            std::abs(r.qm), r.abs_err_oc, r.abs_err_ggwpd, r.ratio_oc, r.ratio_ggwpd, r.phase_err_oc,
                            r.phase_err_ggwpd, r.error.empty() ? "" : "  error: " + r.error);
  }
  rep.text += "\n";

  bool row_errors = std::any_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return !r.error.empty(); });
  check.line(!row_errors, "all rows evaluated without numerical errors");
  bool bounded = std::all_of(result.rows.begin(), result.rows.end(), [](const SweepRow& r) { return std::abs(r.qm) <= 1.0; });
  check.line(bounded, "|C_qm| <= 1 for every N");

  std::vector<const SweepRow*> upper;
  for (const SweepRow& r : result.rows) {
    if (r.N >= 100) upper.push_back(&r);
  }
  if (upper.size() >= 2) {
    const SweepRow& lo = *upper.front();
    const SweepRow& hi = *upper.back();
    bool hierarchy = std::all_of(upper.begin(), upper.end(),
                                 [](const SweepRow* r) { return r->abs_err_ggwpd < r->abs_err_oc; });
    check.line(hierarchy, fmt::format("|C_qm - C_ggwpd| < |C_qm - C_oc| for every N >= {}", lo.N));
    if (config.regime == Regime::integrable) {
      double gain = hi.abs_err_oc / hi.abs_err_ggwpd;
      check.line(gain >= 10.0, fmt::format("error ratio oc/ggwpd at N = {} is {:.2f} (at least 10)", hi.N, gain));
    }
    double rg_hi = std::abs(hi.ratio_ggwpd - 1.0), rg_lo = std::abs(lo.ratio_ggwpd - 1.0);
    double ro_hi = std::abs(hi.ratio_oc - 1.0);
    check.line(rg_hi < 1e-2 && rg_hi < rg_lo,
               fmt::format("|A_qm/A_ggwpd - 1| = {:.3e} at N = {} (N = {}: {:.3e})", rg_hi, hi.N, lo.N, rg_lo));
    check.line(ro_hi >= 5.0 * rg_hi, fmt::format("|A_qm/A_oc - 1| = {:.3e} at N = {} is at least 5x the ggwpd figure",
                                                 ro_hi, hi.N));
    double ph_hi = std::abs(hi.phase_err_ggwpd), ph_lo = std::abs(lo.phase_err_ggwpd);
    check.line(ph_hi < 1e-2 && ph_hi < ph_lo,
               fmt::format("|phase_err_ggwpd| = {:.3e} rad at N = {} (N = {}: {:.3e})", ph_hi, hi.N, lo.N, ph_lo));
  }
  rep.text += rep.pass ? "\nresult: PASS\n" : "\nresult: FAIL\n";
  return rep;
}

}  // namespace ggwpd
