#include "bouss/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "bouss/fem.hpp"

namespace bouss {

namespace {

std::size_t st(int i) { return static_cast<std::size_t>(i); }

double gauss_chain(double x) {
  return 1.0 + 0.5 * std::exp(-(x - 5.0) * (x - 5.0)) -
         0.3 * std::exp(-(x - 7.0) * (x - 7.0)) +
         0.7 * std::exp(-(x - 9.0) * (x - 9.0)) -
         0.6 * std::exp(-(x - 10.0) * (x - 10.0)) +
         0.7 * std::exp(-(x - 12.0) * (x - 12.0));
}

double step_coeff(double x) { return (x >= 5.0 && x < 15.0) ? 1.3 : 1.0; }

double piecewise_linear_coeff(double x) {
  if (x >= 5.0 && x <= 8.0) return 1.0 + 0.1 * (x - 5.0);
  if (x > 8.0 && x <= 14.0) return 0.6 - (7.0 / 60.0) * (x - 14.0);
  if (x > 14.0 && x <= 18.0) return 1.0 + 0.1 * (x - 18.0);
  return 1.0;
}

double multi_step_coeff(double x) {
  if (x >= 3.0 && x <= 5.0) return 1.3;
  if (x > 5.0 && x <= 10.0) return 1.4;
  if (x > 10.0 && x <= 13.0) return 1.2;
  if (x > 13.0 && x <= 16.0) return 1.3;
  return 1.0;
}

// Box-Muller over the standardized mt19937_64 stream, so noise sequences are
// reproducible across platforms.
class GaussianSampler {
public:
  explicit GaussianSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = unit(gen_());
    const double u2 = unit(gen_());
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * M_PI * u2;
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
  }

private:
  static double unit(std::uint64_t x) {
    return static_cast<double>((x >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  }

  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  time_grid().validate();
  optim.validate();
  newton.validate();
  if (!(x_left < x_right)) throw ConfigError("ExperimentConfig: empty domain");
  if (n_cells < 2) throw ConfigError("ExperimentConfig: n_cells must be >= 2");
  if (!(noise.sigma >= 0.0)) throw ConfigError("ExperimentConfig: sigma must be >= 0");
  if (noise.sigma > 0.0 && (noise.a < x_left || noise.b > x_right || noise.a > noise.b))
    throw ConfigError("ExperimentConfig: noise interval not contained in the domain");
  if (!(box_lo >= kCoeffFloor))
    throw ConfigError("ExperimentConfig: box_lo must be >= the coefficient floor");
  if (!(box_lo <= initial_guess && initial_guess <= box_hi))
    throw ConfigError("ExperimentConfig: initial guess outside the box");
}

ScalarField coefficient_preset(const std::string& name, MeshPtr mesh) {
  if (name == "gauss") return interpolate(gauss_chain, std::move(mesh));
  if (name == "step") return interpolate(step_coeff, std::move(mesh));
  if (name == "piecewise_linear")
    return interpolate(piecewise_linear_coeff, std::move(mesh));
  if (name == "multi_step") return interpolate(multi_step_coeff, std::move(mesh));
  if (name == "unit") return ScalarField::constant(std::move(mesh), 1.0);
  throw ConfigError("unknown coefficient preset: " + name);
}

WaveState initial_data_preset(const std::string& name, MeshPtr mesh) {
  ScalarField f;
  if (name == "gauss3") {
    f = interpolate([](double x) { return std::exp(-(x - 3.0) * (x - 3.0)); }, mesh);
  } else if (name == "gauss0") {
    f = interpolate([](double x) { return std::exp(-x * x); }, mesh);
  } else if (name == "zero") {
    f = ScalarField::zeros(mesh);
  } else {
    throw ConfigError("unknown initial data preset: " + name);
  }
  std::vector<double> v(f.values());
  v.front() = 0.0;
  v.back() = 0.0;
  ScalarField zeroed = f.with_values(std::move(v));
  return WaveState{zeroed, zeroed};
}

ForwardProblem make_forward_problem(const ExperimentConfig& cfg,
                                    const ScalarField& coeff) {
  ForwardProblem p;
  p.params = cfg.model;
  p.mesh = coeff.mesh_ptr();
  p.grid = cfg.time_grid();
  p.coeff = coeff;
  p.init = initial_data_preset(cfg.init_preset, coeff.mesh_ptr());
  return p;
}

Measurement synthesize_measurements(const ExperimentConfig& cfg) {
  cfg.validate();
  const MeshPtr mesh = cfg.make_mesh_ptr();
  const ScalarField exact = coefficient_preset(cfg.coeff_preset, mesh);
  const Trajectory traj = solve_forward(make_forward_problem(cfg, exact), cfg.newton);
  return Measurement{traj.final_state().eta, traj.final_state().vel};
}

Measurement add_noise(const Measurement& m, double sigma, double a, double b,
                      std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw ParameterError("add_noise: sigma must be >= 0");
  m.require_same_mesh();
  if (sigma == 0.0) return m;
  const SpatialMesh& mesh = m.m1.mesh();
  std::vector<double> v1(m.m1.values());
  std::vector<double> v2(m.m2.values());
  GaussianSampler rng(seed);
  for (int j = 1; j < mesh.n_nodes() - 1; ++j) {
    const double x = mesh.node(j);
    if (x < a || x > b) continue;
    v1[st(j)] += sigma * rng.next();
    v2[st(j)] += sigma * rng.next();
  }
  return Measurement{m.m1.with_values(std::move(v1)), m.m2.with_values(std::move(v2))};
}

ReconstructionReport run_experiment(const ExperimentConfig& cfg) {
  ReconstructionReport report;
  report.config = cfg;
  const auto t_start = std::chrono::steady_clock::now();
  const auto elapsed = [&t_start]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
        .count();
  };

  std::string stage = "config";
  try {
    cfg.validate();
    const MeshPtr mesh = cfg.make_mesh_ptr();
    report.exact_coeff = coefficient_preset(cfg.coeff_preset, mesh);
    report.initial_coeff = ScalarField::constant(mesh, cfg.initial_guess);

    stage = "synthesize";
    Measurement m = synthesize_measurements(cfg);

    stage = "noise";
    if (cfg.noise.sigma > 0.0)
      m = add_noise(m, cfg.noise.sigma, cfg.noise.a, cfg.noise.b, cfg.noise.seed);
    report.measurement = m;

    stage = "invert";
    ObjectiveSpec spec{cfg.variant, cfg.alpha, m, cfg.l1_smoothing_eps};
    const double beta = cfg.model.beta;

    struct Cache {
      std::vector<double> coeff;
      Trajectory traj;
      bool valid = false;
    };
    auto cache = std::make_shared<Cache>();
    const ObjectiveCallable fg = [&cfg, &spec, beta, cache](const ScalarField& x,
                                                            ScalarField* grad) {
      const ForwardProblem prob = make_forward_problem(cfg, x);
      if (!cache->valid || cache->coeff != x.values()) {
        cache->traj = solve_forward(prob, cfg.newton);
        cache->coeff = x.values();
        cache->valid = true;
      }
      const double value =
          eval_objective(spec, cache->traj.final_state(), x, beta);
      if (grad)
        *grad = gradient_discrete_from_trajectory(spec, prob, cache->traj).values;
      return value;
    };

    const AdmissibleSet set =
        AdmissibleSet::box(mesh->n_nodes(), cfg.box_lo, cfg.box_hi);
    const IterationObserver observer = [&report](const IterateRecord&,
                                                 const ScalarField& x) {
      report.error_history.push_back(misfit_error(x, report.exact_coeff));
    };

    MinimizeResult res = minimize(fg, report.initial_coeff, set, cfg.optim, observer);

    stage = "metrics";
    report.recovered_coeff = res.x;
    report.history = std::move(res.history);
    report.iterations_used = static_cast<int>(report.history.size()) - 1;
    report.termination = to_string(res.reason);
    report.l2_error = misfit_error(report.recovered_coeff, report.exact_coeff);
    const ForwardProblem final_prob = make_forward_problem(cfg, report.recovered_coeff);
    report.final_state = solve_forward(final_prob, cfg.newton).final_state();
    report.success = true;
  } catch (const Error& e) {
    report.success = false;
    report.failure_stage = stage;
    report.message = e.what();
  }
  report.wall_time_sec = elapsed();
  return report;
}

namespace {

void csv_row(std::FILE* f, const std::vector<double>& vals) {
  for (std::size_t i = 0; i < vals.size(); ++i)
    std::fprintf(f, i + 1 < vals.size() ? "%.17g," : "%.17g\n", vals[i]);
}

class FileHandle {
public:
  FileHandle(const std::filesystem::path& p, const char* what) {
    f_ = std::fopen(p.string().c_str(), "w");
    if (!f_) throw IoError(std::string("write_report: cannot open ") + p.string() +
                           " for " + what);
  }
  ~FileHandle() {
    if (f_) std::fclose(f_);
  }
  std::FILE* get() { return f_; }

private:
  std::FILE* f_ = nullptr;
};

}  // namespace

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["label"] = cfg.label;
  j["model"] = {{"beta", cfg.model.beta}, {"alpha_tilde", cfg.model.alpha_tilde}};
  j["domain"] = {{"x_left", cfg.x_left}, {"x_right", cfg.x_right}, {"n_cells", cfg.n_cells}};
  j["time"] = {{"t_final", cfg.t_final}, {"n_steps", cfg.n_steps}, {"theta", cfg.theta}};
  j["coefficient_preset"] = cfg.coeff_preset;
  j["initial_data_preset"] = cfg.init_preset;
  j["objective"] = {{"variant", to_string(cfg.variant)},
                    {"alpha", cfg.alpha},
                    {"l1_smoothing_eps", cfg.l1_smoothing_eps}};
  j["noise"] = {{"sigma", cfg.noise.sigma},
                {"interval", {cfg.noise.a, cfg.noise.b}},
                {"seed", cfg.noise.seed}};
  j["optim"] = {{"memory", cfg.optim.memory}, {"ftol", cfg.optim.ftol},
                {"gtol", cfg.optim.gtol},     {"max_iters", cfg.optim.max_iters},
                {"ls_max", cfg.optim.ls_max}, {"c1", cfg.optim.c1},
                {"c2", cfg.optim.c2}};
  j["newton"] = {{"abs_tol", cfg.newton.abs_tol}, {"max_iters", cfg.newton.max_iters}};
  j["bounds"] = {{"lo", cfg.box_lo}, {"hi", cfg.box_hi}};
  j["initial_guess"] = cfg.initial_guess;
  return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig cfg;
  cfg.label = j.value("label", cfg.label);
  if (j.contains("model")) {
    cfg.model.beta = j["model"].value("beta", cfg.model.beta);
    cfg.model.alpha_tilde = j["model"].value("alpha_tilde", cfg.model.alpha_tilde);
  }
  if (j.contains("domain")) {
    cfg.x_left = j["domain"].value("x_left", cfg.x_left);
    cfg.x_right = j["domain"].value("x_right", cfg.x_right);
    cfg.n_cells = j["domain"].value("n_cells", cfg.n_cells);
  }
  if (j.contains("time")) {
    cfg.t_final = j["time"].value("t_final", cfg.t_final);
    cfg.n_steps = j["time"].value("n_steps", cfg.n_steps);
    cfg.theta = j["time"].value("theta", cfg.theta);
  }
  cfg.coeff_preset = j.value("coefficient_preset", cfg.coeff_preset);
  cfg.init_preset = j.value("initial_data_preset", cfg.init_preset);
  if (j.contains("objective")) {
    cfg.variant = objective_variant_from_string(
        j["objective"].value("variant", std::string(to_string(cfg.variant))));
    cfg.alpha = j["objective"].value("alpha", cfg.alpha);
    cfg.l1_smoothing_eps = j["objective"].value("l1_smoothing_eps", cfg.l1_smoothing_eps);
  }
  if (j.contains("noise")) {
    cfg.noise.sigma = j["noise"].value("sigma", cfg.noise.sigma);
    if (j["noise"].contains("interval")) {
      cfg.noise.a = j["noise"]["interval"][0].get<double>();
      cfg.noise.b = j["noise"]["interval"][1].get<double>();
    }
    cfg.noise.seed = j["noise"].value("seed", cfg.noise.seed);
  }
  if (j.contains("optim")) {
    cfg.optim.memory = j["optim"].value("memory", cfg.optim.memory);
    cfg.optim.ftol = j["optim"].value("ftol", cfg.optim.ftol);
    cfg.optim.gtol = j["optim"].value("gtol", cfg.optim.gtol);
    cfg.optim.max_iters = j["optim"].value("max_iters", cfg.optim.max_iters);
    cfg.optim.ls_max = j["optim"].value("ls_max", cfg.optim.ls_max);
    cfg.optim.c1 = j["optim"].value("c1", cfg.optim.c1);
    cfg.optim.c2 = j["optim"].value("c2", cfg.optim.c2);
  }
  if (j.contains("newton")) {
    cfg.newton.abs_tol = j["newton"].value("abs_tol", cfg.newton.abs_tol);
    cfg.newton.max_iters = j["newton"].value("max_iters", cfg.newton.max_iters);
  }
  if (j.contains("bounds")) {
    cfg.box_lo = j["bounds"].value("lo", cfg.box_lo);
    cfg.box_hi = j["bounds"].value("hi", cfg.box_hi);
  }
  cfg.initial_guess = j.value("initial_guess", cfg.initial_guess);
  return cfg;
}

nlohmann::json report_to_json(const ReconstructionReport& report) {
  nlohmann::json j;
  j["config"] = config_to_json(report.config);
  j["success"] = report.success;
  j["failure_stage"] = report.failure_stage;
  j["message"] = report.message;
  j["l2_error"] = report.l2_error;
  j["iterations_used"] = report.iterations_used;
  j["termination"] = report.termination;
  j["wall_time_sec"] = report.wall_time_sec;
  nlohmann::json obj = nlohmann::json::array();
  nlohmann::json pg = nlohmann::json::array();
  nlohmann::json steps = nlohmann::json::array();
  for (const IterateRecord& r : report.history) {
    obj.push_back(r.objective);
    pg.push_back(r.pg_norm);
    steps.push_back(r.step_len);
  }
  j["objective_history"] = obj;
  j["pg_norm_history"] = pg;
  j["step_len_history"] = steps;
  j["error_history"] = report.error_history;
  return j;
}

void write_report(const ReconstructionReport& report,
                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("write_report: cannot create " + out_dir.string());

  {
    std::ofstream js(out_dir / "report.json");
    if (!js) throw IoError("write_report: cannot open report.json under " +
                           out_dir.string());
    js << report_to_json(report).dump(2) << "\n";
  }

  if (report.recovered_coeff.size() > 0) {
    FileHandle f(out_dir / "coefficient.csv", "coefficient table");
    std::fprintf(f.get(), "xi,exact,recovered,initial\n");
    const SpatialMesh& mesh = report.recovered_coeff.mesh();
    for (int j = 0; j < mesh.n_nodes(); ++j)
      csv_row(f.get(), {mesh.node(j), report.exact_coeff[j],
                        report.recovered_coeff[j], report.initial_coeff[j]});
  }

  {
    FileHandle f(out_dir / "history.csv", "iteration history");
    std::fprintf(f.get(), "iter,objective,pg_norm,step_len\n");
    for (const IterateRecord& r : report.history)
      csv_row(f.get(), {static_cast<double>(r.iter), r.objective, r.pg_norm,
                        r.step_len});
  }

  if (report.final_state.eta.size() > 0) {
    FileHandle f(out_dir / "final_state.csv", "final state");
    std::fprintf(f.get(), "xi,eta,u,m1,m2\n");
    const SpatialMesh& mesh = report.final_state.eta.mesh();
    for (int j = 0; j < mesh.n_nodes(); ++j)
      csv_row(f.get(), {mesh.node(j), report.final_state.eta[j],
                        report.final_state.vel[j], report.measurement.m1[j],
                        report.measurement.m2[j]});
  }
}

std::vector<ExperimentConfig> experiment_suite(const std::string& id) {
  std::vector<ExperimentConfig> out;
  auto base = []() {
    ExperimentConfig c;
    c.model.beta = 0.1;
    c.model.alpha_tilde = 0.0;
    return c;
  };

  if (id == "exp1") {
    ExperimentConfig c = base();
    c.label = "exp1";
    c.t_final = 15.0;
    c.n_steps = 1500;
    c.n_cells = 500;
    c.coeff_preset = "gauss";
    c.init_preset = "gauss3";
    c.alpha = 0.0;
    c.optim.max_iters = 150;
    out.push_back(c);
  } else if (id == "exp2") {
    ExperimentConfig c = base();
    c.label = "exp2_unreg";
    c.t_final = 20.0;
    c.n_steps = 1500;  // dt = 20/1500, fixing the paper's arithmetic slip
    c.n_cells = 500;
    c.coeff_preset = "step";
    c.init_preset = "gauss0";
    c.alpha = 0.0;
    c.optim.max_iters = 500;
    out.push_back(c);
    c.label = "exp2_reg";
    c.alpha = 1e-5;
    out.push_back(c);
  } else if (id == "exp3") {
    const double alphas_tilde[] = {0.01, 0.03, 0.05, 0.07};
    for (double at : alphas_tilde) {
      ExperimentConfig c = base();
      c.model.alpha_tilde = at;
      c.t_final = 20.0;
      c.coeff_preset = "step";
      c.init_preset = "gauss0";
      c.alpha = 0.0;
      c.optim.max_iters = 500;
      const bool fine = at > 0.05;
      c.n_steps = fine ? 1700 : 1500;
      c.n_cells = fine ? 700 : 500;
      char label[32];
      std::snprintf(label, sizeof label, "exp3_at%03d", static_cast<int>(at * 100));
      c.label = label;
      out.push_back(c);
      c.alpha = 0.001;
      c.variant = ObjectiveVariant::L2_DEV1;
      c.label = std::string(label) + "_l2reg";
      if (at == 0.05 || at == 0.07) out.push_back(c);
      c.variant = ObjectiveVariant::L1_DEV1;
      c.label = std::string(label) + "_l1reg";
      if (at == 0.05 || at == 0.07) out.push_back(c);
    }
  } else if (id == "exp4a" || id == "exp4b" || id == "exp4") {
    ExperimentConfig c = base();
    c.t_final = 20.0;
    c.n_steps = 1700;
    c.n_cells = 700;
    c.init_preset = "gauss3";
    if (id != "exp4b") {
      c.label = "exp4a";
      c.coeff_preset = "piecewise_linear";
      c.alpha = 0.0;
      c.optim.max_iters = 500;
      out.push_back(c);
    }
    if (id != "exp4a") {
      c.label = "exp4b";
      c.coeff_preset = "multi_step";
      c.variant = ObjectiveVariant::L1_DEV1;
      c.alpha = 0.001;
      c.optim.max_iters = 300;
      out.push_back(c);
    }
  } else if (id == "exp5") {
    ExperimentConfig c;
    c.model.beta = 0.01;
    c.model.alpha_tilde = 0.01;
    c.t_final = 15.0;
    c.n_steps = 1500;
    c.n_cells = 800;
    c.coeff_preset = "gauss";
    c.init_preset = "gauss3";
    c.noise.sigma = 0.04;
    c.noise.a = -15.0;
    c.noise.b = 30.0;
    c.noise.seed = 1;
    c.optim.max_iters = 20;
    c.label = "exp5_unreg";
    c.alpha = 0.0;
    out.push_back(c);
    c.label = "exp5_l2reg";
    c.variant = ObjectiveVariant::L2_DEV1;
    c.alpha = 0.01;
    out.push_back(c);
    c.label = "exp5_l1reg";
    c.variant = ObjectiveVariant::L1_DEV1;
    c.alpha = 0.01;
    out.push_back(c);
  } else {
    throw ConfigError("unknown experiment id: " + id);
  }
  return out;
}

}  // namespace bouss
