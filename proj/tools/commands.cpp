#include "commands.hpp"

#include "parot/colorxfer.hpp"
#include "parot/csv.hpp"
#include "parot/estimators.hpp"
#include "parot/hf_ot.hpp"
#include "parot/model_io.hpp"
#include "parot/reconstruct.hpp"
#include "parot/reduction.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace parot::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kTimingReps = 5;

/// Median wall time of kTimingReps calls, in seconds; 0 when timing is off.
template <class F>
double median_time(bool enabled, F&& f) {
  if (!enabled) {
    f();
    return 0.0;
  }
  std::vector<double> t;
  for (int k = 0; k < kTimingReps; ++k) {
    const auto start = std::chrono::steady_clock::now();
    f();
    t.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

std::ofstream open_out(const ExperimentConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out_dir);
  const fs::path p = fs::path(cfg.out_dir) / name;
  std::ofstream out(p, std::ios::binary);
  require(out.is_open(), ErrorCode::Io, "cannot open '" + p.string() + "' for writing");
  return out;
}

SnapshotSolver make_solver(const ExperimentConfig& cfg, const CostMatrix& cost) {
  if (cfg.backend == "sinkhorn") {
    SinkhornOptions so;
    so.epsilon = cfg.eps;
    return sinkhorn_snapshot_solver(cost, so);
  }
  return lp_snapshot_solver(cost);
}

EIMOptions eim_options(const ExperimentConfig& cfg) {
  EIMOptions o;
  o.m_eim = cfg.m_eim;
  o.m_prime = cfg.m_prime;
  return o;
}

std::vector<TrainingCost> training_costs(const ReducedModel& m) {
  std::vector<TrainingCost> t;
  for (Index r = 0; r < m.R(); ++r)
    t.push_back({m.snapshot_alphas[static_cast<std::size_t>(r)], m.reduced_cost[r]});
  return t;
}

std::vector<Alpha> test_set(const ExperimentConfig& cfg, Index kx, Index ky) {
  std::mt19937_64 rng(cfg.seed);
  std::vector<Alpha> out;
  for (int k = 0; k < cfg.test_size; ++k)
    out.push_back(random_alpha(static_cast<int>(kx), static_cast<int>(ky), rng));
  return out;
}

std::string fmt(double v) { return format_double(v); }

}  // namespace

int cmd_build(const ExperimentConfig& cfg) {
  const MeasureFamily family = load_family(cfg);
  const CostMatrix cost = quadratic_cost(family.support_x, family.support_y);
  const auto training =
      training_grid(static_cast<int>(family.kx()), static_cast<int>(family.ky()), cfg.resolution);

  ModelBundle bundle;
  bundle.model = build_offline(family, training, make_solver(cfg, cost), cfg.basis_mode());
  bundle.family = family;
  bundle.eim = build_eim_estimator(bundle.model, cost, family, training, eim_options(cfg));

  fs::create_directories(cfg.out_dir);
  save_model(cfg.model_path(), bundle);
  auto csv = open_out(cfg, "snapshots.csv");
  write_snapshot_csv(csv, bundle.model);
  std::cout << "model=" << cfg.model_path() << " R=" << bundle.model.R()
            << " N_x=" << bundle.model.nx << " N_y=" << bundle.model.ny
            << " N=" << bundle.model.N() << " M=" << bundle.model.M()
            << " M_eim=" << bundle.eim->c_side.size() << "\n";
  return 0;
}

int cmd_solve(const ExperimentConfig& cfg, const SolveArgs& args) {
  const ModelBundle bundle = load_model(cfg.model_path());
  const ReducedModel& model = bundle.model;
  const Alpha alpha = parse_alpha(args.alpha);
  require(alpha.kx() == model.kx && alpha.ky() == model.ky, ErrorCode::InvalidArgument,
          "solve: alpha has block sizes (" + std::to_string(alpha.kx()) + "," +
              std::to_string(alpha.ky()) + "), model expects (" + std::to_string(model.kx) + "," +
              std::to_string(model.ky) + ")");

  ReducedSolution sol;
  const double t_online = median_time(cfg.timing, [&] { sol = solve_reduced(model, alpha); });
  require(sol.status == LPStatus::Optimal, ErrorCode::SolverFailure,
          std::string("solve: reduced LP returned ") + to_string(sol.status));

  const CostMatrix cost = quadratic_cost(bundle.family.support_x, bundle.family.support_y);
  const auto [mu, nu] = blend(bundle.family, alpha);
  const DualPair lifted = lift_potentials(model, sol.a, sol.b);
  const double exact = exact_gap_bound(lifted, cost, mu, nu, sol.I_R);
  const double cont = continuity_bound(training_costs(model), alpha, sol.I_R, cost.sup_norm(),
                                       model.kx, model.ky);
  std::cout << "I_R=" << fmt(sol.I_R) << " bound_exact=" << fmt(exact);
  if (bundle.eim) std::cout << " bound_fast=" << fmt(eim_fast_gap(*bundle.eim, model, sol, alpha));
  std::cout << " bound_continuity=" << fmt(cont) << " time_online=" << fmt(t_online);
  if (args.with_hf) {
    const OTSolution hf = solve_lp(cost, mu, nu);
    const double gap = sol.I_R - hf.cost;
    std::cout << " I_hf=" << fmt(hf.cost) << " true_error=" << fmt(gap)
              << " exact_valid=" << (exact >= gap - 1e-9 ? 1 : 0)
              << " continuity_valid=" << (cont >= std::abs(gap) - 1e-9 ? 1 : 0);
  }
  std::cout << "\n";
  return 0;
}

int cmd_bench(const ExperimentConfig& cfg) {
  const MeasureFamily family = load_family(cfg);
  const CostMatrix cost = quadratic_cost(family.support_x, family.support_y);
  const int kx = static_cast<int>(family.kx());
  const int ky = static_cast<int>(family.ky());
  const auto tests = test_set(cfg, kx, ky);
  const std::size_t n_timed = std::min<std::size_t>(static_cast<std::size_t>(cfg.timing_size), tests.size());

  std::vector<double> truth;
  double hf_time = 0.0;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const auto [mu, nu] = blend(family, tests[k]);
    OTSolution s;
    const double t = median_time(cfg.timing && k < n_timed, [&] { s = solve_lp(cost, mu, nu); });
    if (k < n_timed) hf_time += t / static_cast<double>(n_timed);
    truth.push_back(s.cost);
  }

  auto err_csv = open_out(cfg, "error_vs_snapshots.csv");
  CsvWriter err(err_csv, {"R", "mean_error", "min_error", "max_error"});
  auto par_csv = open_out(cfg, "pareto.csv");
  CsvWriter par(par_csv, {"method", "param", "mean_error", "worst_error", "mean_time"});
  par.cell(std::string("lp")).cell(0.0).cell(0.0).cell(0.0).cell(hf_time);
  par.end_row();

  for (int res : cfg.bench_resolutions) {
    const ReducedModel model =
        build_offline(family, training_grid(kx, ky, res), lp_snapshot_solver(cost), cfg.basis_mode());
    double sum = 0.0, mn = std::numeric_limits<double>::infinity(), mx = 0.0, time = 0.0;
    for (std::size_t k = 0; k < tests.size(); ++k) {
      ReducedSolution sol;
      const double t = median_time(cfg.timing && k < n_timed, [&] { sol = solve_reduced(model, tests[k]); });
      require(sol.status == LPStatus::Optimal, ErrorCode::SolverFailure, "bench: reduced LP failed");
      if (k < n_timed) time += t / static_cast<double>(n_timed);
      const double e = std::abs(sol.I_R - truth[k]);
      sum += e;
      mn = std::min(mn, e);
      mx = std::max(mx, e);
    }
    const double mean = sum / static_cast<double>(tests.size());
    err.cell(static_cast<long long>(model.R())).cell(mean).cell(mn).cell(mx);
    err.end_row();
    par.cell(std::string("reduced")).cell(static_cast<double>(model.R())).cell(mean).cell(mx).cell(time);
    par.end_row();
  }

  for (double eps : cfg.bench_eps) {
    SinkhornOptions so;
    so.epsilon = eps;
    double sum = 0.0, mx = 0.0, time = 0.0;
    for (std::size_t k = 0; k < n_timed; ++k) {
      const auto [mu, nu] = blend(family, tests[k]);
      SinkhornSolution s;
      time += median_time(cfg.timing, [&] { s = solve_sinkhorn(cost, mu, nu, so); }) /
              static_cast<double>(n_timed);
      const double e = std::abs(s.cost - truth[k]);
      sum += e;
      mx = std::max(mx, e);
    }
    par.cell(std::string("sinkhorn")).cell(eps).cell(sum / static_cast<double>(n_timed)).cell(mx).cell(time);
    par.end_row();
  }

  // Estimators on one model size.
  const auto training = training_grid(kx, ky, cfg.estimator_resolution);
  const ReducedModel model = build_offline(family, training, lp_snapshot_solver(cost), cfg.basis_mode());
  const EIMEstimator eim = build_eim_estimator(model, cost, family, training, eim_options(cfg));
  const auto train_costs = training_costs(model);

  std::vector<std::string> header;
  for (int k = 0; k < kx; ++k) header.push_back("alpha_x_" + std::to_string(k + 1));
  for (int l = 0; l < ky; ++l) header.push_back("alpha_y_" + std::to_string(l + 1));
  for (const char* h : {"I_R", "bound_exact", "bound_fast", "bound_continuity", "I_hf", "true_error"})
    header.push_back(h);
  auto est_csv = open_out(cfg, "estimators.csv");
  CsvWriter est(est_csv, header);
  std::vector<double> exact_v, fast_v, cont_v, true_v;
  for (std::size_t k = 0; k < tests.size(); ++k) {
    const Alpha& a = tests[k];
    const ReducedSolution sol = solve_reduced(model, a);
    const auto [mu, nu] = blend(family, a);
    const double exact = exact_gap_bound(lift_potentials(model, sol.a, sol.b), cost, mu, nu, sol.I_R);
    const double fast = eim_fast_gap(eim, model, sol, a);
    const double cont = continuity_bound(train_costs, a, sol.I_R, cost.sup_norm(), kx, ky);
    const double te = sol.I_R - truth[k];
    const Vector s = a.stacked();
    for (Index i = 0; i < s.size(); ++i) est.cell(s[i]);
    est.cell(sol.I_R).cell(exact).cell(fast).cell(cont).cell(truth[k]).cell(te);
    est.end_row();
    exact_v.push_back(exact);
    fast_v.push_back(fast);
    cont_v.push_back(cont);
    true_v.push_back(std::abs(te));
  }

  auto cor_csv = open_out(cfg, "corrections.csv");
  CsvWriter cor(cor_csv, {"estimator", "c_max", "c_min", "c_mean"});
  const std::pair<const char*, const std::vector<double>*> rows[] = {
      {"exact", &exact_v}, {"fast", &fast_v}, {"continuity", &cont_v}};
  for (const auto& [name, values] : rows) {
    cor.cell(std::string(name));
    try {
      const CorrectionConstants c = calibrate_correction(*values, true_v);
      cor.cell(c.c_max).cell(c.c_min).cell(c.c_mean);
    } catch (const Error&) {
      cor.cell(std::string("nan")).cell(std::string("nan")).cell(std::string("nan"));
    }
    cor.end_row();
  }
  std::cout << "bench: wrote error_vs_snapshots.csv, pareto.csv, estimators.csv, corrections.csv to "
            << cfg.out_dir << "\n";
  return 0;
}

int cmd_colorize(const ExperimentConfig& cfg) {
  require(!cfg.source.empty(), ErrorCode::InvalidArgument, "colorize: --source is required");
  require(!cfg.palettes.empty(), ErrorCode::InvalidArgument, "colorize: at least one --palette is required");
  const ImageRGB source = read_png(cfg.source);
  std::vector<ImageRGB> palettes;
  for (const auto& p : cfg.palettes) palettes.push_back(read_png(p));
  const Index ky = static_cast<Index>(palettes.size());

  std::vector<Vector> alphas;
  if (cfg.sweep) {
    require(ky == 2, ErrorCode::InvalidArgument, "colorize: --sweep needs exactly two palettes");
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) alphas.push_back((Vector(2) << 1.0 - t, t).finished());
  } else {
    require(static_cast<Index>(cfg.alpha_y.size()) == ky, ErrorCode::InvalidArgument,
            "colorize: --alpha-y needs one weight per palette");
    alphas.push_back(Eigen::Map<const Vector>(cfg.alpha_y.data(), ky));
  }

  ReducedModel model;
  double t_offline = 0.0;
  if (!cfg.model.empty() && fs::exists(cfg.model)) {
    model = load_model(cfg.model).model;
  } else {
    ColorTransferOptions opts;
    opts.bins = cfg.bins;
    opts.resolution = cfg.color_resolution;
    const MeasureFamily family = color_family(source, palettes, cfg.bins);
    const auto start = std::chrono::steady_clock::now();
    model = build_color_model(family, opts);
    t_offline = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    fs::create_directories(cfg.out_dir);
    const std::string path =
        cfg.model.empty() ? (fs::path(cfg.out_dir) / "color_model.parot").string() : cfg.model;
    save_model(path, ModelBundle{model, family, std::nullopt});
  }

  for (std::size_t k = 0; k < alphas.size(); ++k) {
    ImageRGB out;
    const double t = median_time(cfg.timing, [&] {
      out = transfer_pipeline(source, alphas[k], cfg.bins, model);
    });
    fs::create_directories(cfg.out_dir);
    const std::string name =
        alphas.size() == 1 ? "colorized.png" : "colorized_" + std::to_string(k) + ".png";
    write_png((fs::path(cfg.out_dir) / name).string(), out);
    std::cout << "output=" << name << " alpha_y=";
    for (Index l = 0; l < alphas[k].size(); ++l) std::cout << (l ? "," : "") << fmt(alphas[k][l]);
    std::cout << " time_offline=" << fmt(t_offline) << " time_online=" << fmt(t) << "\n";
  }
  return 0;
}

}  // namespace parot::cli
