#pragma once

#include "parot/param_family.hpp"
#include "parot/reduction.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace parot::cli {

struct ExperimentConfig {
  // Family source.
  std::string family = "builtin-gaussian";  // or "csv"
  std::string mu_csv;
  std::string nu_csv;
  int nx = 100;
  int ny = 100;

  int resolution = 10;
  std::string backend = "lp";  // or "sinkhorn"
  double eps = 1e-2;
  std::string basis = "gs";    // or "ones"
  int m_eim = 10;
  int m_prime = 3;
  int test_size = 50;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string model;  // defaults to <out_dir>/model.parot

  // bench
  std::vector<int> bench_resolutions = {2, 4, 10, 20};
  std::vector<double> bench_eps = {1e-3, 1e-2, 1e-1, 1.0};
  int estimator_resolution = 10;
  int timing_size = 10;
  bool timing = true;

  // colorize
  std::string source;
  std::vector<std::string> palettes;
  std::vector<double> alpha_y;
  int bins = 16;
  int color_resolution = 3;
  bool sweep = false;

  BasisMode basis_mode() const;
  std::string model_path() const;
};

/// key = value lines; '#' starts a comment; [section] headers are ignored.
std::map<std::string, std::string> read_key_values(const std::string& path);

/// Applies recognised keys; unknown keys are a configuration error.
void apply_config(ExperimentConfig& cfg, const std::map<std::string, std::string>& kv);

/// Throws Error(InvalidArgument) naming the first invalid field.
void validate(const ExperimentConfig& cfg);

MeasureFamily load_family(const ExperimentConfig& cfg);

std::vector<double> parse_list(const std::string& s);
/// "0.3,0.7;0.6,0.4" -> Alpha
Alpha parse_alpha(const std::string& s);

}  // namespace parot::cli
