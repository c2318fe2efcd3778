// parot: build, query and benchmark reduced models for parametrized OT.

#include "commands.hpp"
#include "config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace {

using namespace parot;
using namespace parot::cli;

constexpr int kBadConfig = 2;
constexpr int kNumerical = 3;

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::NumericalBreakdown:
    case ErrorCode::SolverFailure:
      return kNumerical;
    default:
      return kBadConfig;
  }
}

struct Overrides {
  std::string config;
  std::optional<long long> seed;
  std::string out_dir;
  std::string backend;
  std::optional<double> eps;
  std::optional<int> bins;
  std::optional<int> resolution;
  std::string model;
  bool no_timing = false;
  // colorize
  std::string source;
  std::vector<std::string> palettes;
  std::string alpha_y;
  bool sweep = false;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "key = value configuration file");
  sub->add_option("--seed", o.seed, "RNG seed for test parameters");
  sub->add_option("--out-dir", o.out_dir, "directory for outputs");
  sub->add_option("--backend", o.backend, "snapshot backend: lp or sinkhorn");
  sub->add_option("--eps", o.eps, "entropic regularization for the sinkhorn backend");
  sub->add_option("--bins", o.bins, "histogram bins per color axis");
  sub->add_option("--resolution", o.resolution, "training lattice resolution");
  sub->add_option("--model", o.model, "model file");
  sub->add_flag("--no-timing", o.no_timing, "write 0 for timings (byte-stable outputs)");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) apply_config(cfg, read_key_values(o.config));
  if (o.seed) cfg.seed = static_cast<std::uint64_t>(*o.seed);
  if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
  if (!o.backend.empty()) cfg.backend = o.backend;
  if (o.eps) cfg.eps = *o.eps;
  if (o.bins) cfg.bins = *o.bins;
  if (o.resolution) cfg.resolution = *o.resolution;
  if (!o.model.empty()) cfg.model = o.model;
  if (o.no_timing) cfg.timing = false;
  if (!o.source.empty()) cfg.source = o.source;
  if (!o.palettes.empty()) cfg.palettes = o.palettes;
  if (!o.alpha_y.empty()) cfg.alpha_y = parse_list(o.alpha_y);
  if (o.sweep) cfg.sweep = true;
  validate(cfg);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reduced-basis solver for parametrized discrete optimal transport"};
  app.require_subcommand(1);
  Overrides o;
  SolveArgs solve_args;

  auto* build = app.add_subcommand("build", "solve training snapshots and write a model file");
  add_common(build, o);
  auto* solve = app.add_subcommand("solve", "online reduced solve with error bounds");
  add_common(solve, o);
  solve->add_option("--alpha", solve_args.alpha, "parameter as 'x1,x2;y1,y2'")->required();
  solve->add_flag("--with-hf", solve_args.with_hf, "also solve the full problem and report the true error");
  auto* bench = app.add_subcommand("bench", "error and timing sweeps written as CSV");
  add_common(bench, o);
  auto* color = app.add_subcommand("colorize", "color transfer between images");
  add_common(color, o);
  color->add_option("--source", o.source, "source PNG");
  color->add_option("--palette", o.palettes, "palette PNG (repeatable)");
  color->add_option("--alpha-y", o.alpha_y, "palette weights 'w1,w2,...'");
  color->add_flag("--sweep", o.sweep, "emit outputs for alpha = 0, 0.25, 0.5, 0.75, 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kBadConfig;
  }

  try {
    const ExperimentConfig cfg = resolve(o);
    if (*build) return cmd_build(cfg);
    if (*solve) return cmd_solve(cfg, solve_args);
    if (*bench) return cmd_bench(cfg);
    if (*color) return cmd_colorize(cfg);
  } catch (const Error& e) {
    std::cerr << "parot: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "parot: " << e.what() << "\n";
    return kBadConfig;
  }
  return kBadConfig;
}
