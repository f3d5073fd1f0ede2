#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ggwpd/manifolds.hpp"
#include "ggwpd/semiclassics.hpp"

namespace ggwpd {

struct ReferenceSaddle {
  RealPoint seed;
  Complex P0;
  Complex Q0;
};

struct ExperimentConfig {
  std::string name = "custom";
  double K = 0.0;
  int t = 1;
  RealPoint alpha_center;
  RealPoint beta_center;
  std::vector<int> N_list;
  Regime regime = Regime::integrable;
  int image_range = 1;
  // b = width_factor * pi * N
  double width_factor = 1.0;
  // packets at this N define the seed search and pruning radius
  int seed_reference_N = 80;
  SaddleSearchOptions saddle;
  SeedSearchOptions seeds;
  EvaluationOptions evaluation;
  std::vector<ReferenceSaddle> references;

  // throws std::invalid_argument
  void validate() const;
  GaussianPacket alpha(int N) const;
  GaussianPacket beta(int N) const;
};

std::vector<std::string> preset_names();
// throws std::invalid_argument for unknown names
ExperimentConfig preset(const std::string& name);
// JSON document; "preset" selects the base, other keys override it
ExperimentConfig config_from_json(const std::string& text);

struct SweepRow {
  int N = 0;
  Complex qm, oc, ggwpd;
  double abs_err_oc = 0.0, abs_err_ggwpd = 0.0;
  double ratio_oc = 0.0, ratio_ggwpd = 0.0;
  double phase_err_oc = 0.0, phase_err_ggwpd = 0.0;
  std::string error;  // empty on success, not part of the CSV
};

// recomputes the six metric columns from the complex columns
void fill_metrics(SweepRow& row);

struct SweepResult {
  std::vector<SeedTrajectory> seeds;
  std::vector<SaddleTrajectory> saddles;
  std::string search_error;
  // largest component change of the saddle initial points re-solved at the last N
  double hbar_drift = 0.0;
  std::vector<SweepRow> rows;
};

SweepResult run_sweep(const ExperimentConfig& config);

std::string csv_text(const std::vector<SweepRow>& rows);
// throws std::runtime_error naming the path on I/O failure
void emit_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> parse_csv(const std::string& text);

struct Report {
  std::string text;
  bool pass = true;
};

Report emit_report(const SweepResult& result, const ExperimentConfig& config);

}  // namespace ggwpd
