#ifndef BOUSS_HARNESS_HPP
#define BOUSS_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "bouss/adjoint.hpp"
#include "bouss/core.hpp"
#include "bouss/forward.hpp"
#include "bouss/objective.hpp"
#include "bouss/optim.hpp"

namespace bouss {

struct NoiseSpec {
  double sigma = 0.0;
  double a = -15.0;
  double b = 30.0;
  std::uint64_t seed = 1;
};

/// One reconstruction run: model, discretization, exact coefficient preset,
/// objective variant and optimizer settings. Presets:
///   coefficient: gauss | step | piecewise_linear | multi_step | unit
///   initial data: gauss3 (exp(-(x-3)^2)) | gauss0 (exp(-x^2)) | zero
struct ExperimentConfig {
  std::string label = "custom";
  ModelParams model;
  double x_left = -20.0;
  double x_right = 40.0;
  int n_cells = 500;
  double t_final = 15.0;
  int n_steps = 1500;
  double theta = 0.5;
  std::string coeff_preset = "gauss";
  std::string init_preset = "gauss3";
  ObjectiveVariant variant = ObjectiveVariant::L2_DEV1;
  double alpha = 0.0;
  double l1_smoothing_eps = 1e-8;
  NoiseSpec noise;
  OptimConfig optim;
  NewtonConfig newton;
  double box_lo = 0.1;
  double box_hi = 10.0;
  double initial_guess = 1.0;

  MeshPtr make_mesh_ptr() const { return make_mesh(x_left, x_right, n_cells); }
  TimeGrid time_grid() const { return TimeGrid{t_final, n_steps, theta}; }
  void validate() const;
};

ScalarField coefficient_preset(const std::string& name, MeshPtr mesh);

/// Initial (eta0, u0) with boundary nodes forced to exact zeros.
WaveState initial_data_preset(const std::string& name, MeshPtr mesh);

/// Forward problem at an arbitrary coefficient on this config's grid.
ForwardProblem make_forward_problem(const ExperimentConfig& cfg,
                                    const ScalarField& coeff);

/// Solve the forward problem at the exact preset coefficient and return the
/// final-time state as the synthetic measurement.
Measurement synthesize_measurements(const ExperimentConfig& cfg);

/// Add seeded i.i.d. zero-mean Gaussian samples of standard deviation sigma
/// to both components at nodes inside [a, b]; boundary nodes and nodes outside
/// the window stay untouched.
Measurement add_noise(const Measurement& m, double sigma, double a, double b,
                      std::uint64_t seed);

struct ReconstructionReport {
  ExperimentConfig config;
  bool success = false;
  std::string failure_stage;
  std::string message;
  ScalarField exact_coeff;
  ScalarField initial_coeff;
  ScalarField recovered_coeff;
  Measurement measurement;
  WaveState final_state;
  double l2_error = 0.0;
  int iterations_used = 0;
  std::string termination;
  std::vector<IterateRecord> history;
  std::vector<double> error_history;
  double wall_time_sec = 0.0;
};

/// Full pipeline: synthesize -> optional noise -> minimize from M == initial
/// guess -> error metrics. Failures are reported, not thrown.
ReconstructionReport run_experiment(const ExperimentConfig& cfg);

/// Write report.json, coefficient.csv, history.csv and final_state.csv.
void write_report(const ReconstructionReport& report,
                  const std::filesystem::path& out_dir);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json report_to_json(const ReconstructionReport& report);

/// Canonical configs of the five experiment sets; exp2/exp3/exp5 expand into
/// their sub-runs. Accepts exp1, exp2, exp3, exp4a, exp4b, exp4 (= 4a + 4b)
/// and exp5.
std::vector<ExperimentConfig> experiment_suite(const std::string& id);

}  // namespace bouss

#endif  // BOUSS_HARNESS_HPP
