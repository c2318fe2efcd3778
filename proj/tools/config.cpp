#include "config.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

namespace parot::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  std::string t = s.substr(b, e - b + 1);
  if (t.size() >= 2 && (t.front() == '"' || t.front() == '\'') && t.back() == t.front())
    t = t.substr(1, t.size() - 2);
  return t;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && p == v.data() + v.size() && !v.empty(), ErrorCode::InvalidArgument,
          "config: '" + key + "' expects a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  require(ec == std::errc() && p == v.data() + v.size() && !v.empty(), ErrorCode::InvalidArgument,
          "config: '" + key + "' expects an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error(ErrorCode::InvalidArgument, "config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

BasisMode ExperimentConfig::basis_mode() const {
  return basis == "ones" ? BasisMode::OnesAugmented : BasisMode::GramSchmidt;
}

std::string ExperimentConfig::model_path() const {
  if (!model.empty()) return model;
  return (std::filesystem::path(out_dir) / "model.parot").string();
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  for (const std::string& t : split(s, ',')) {
    if (t.empty()) continue;
    out.push_back(to_double("list", t));
  }
  return out;
}

Alpha parse_alpha(const std::string& s) {
  const auto blocks = split(s, ';');
  require(blocks.size() == 2, ErrorCode::InvalidArgument,
          "alpha: expected 'x1,x2,...;y1,y2,...', got '" + s + "'");
  const auto x = parse_list(blocks[0]);
  const auto y = parse_list(blocks[1]);
  require(!x.empty() && !y.empty(), ErrorCode::InvalidArgument, "alpha: empty block in '" + s + "'");
  return Alpha(Eigen::Map<const Vector>(x.data(), static_cast<Index>(x.size())),
               Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size())));
}

std::map<std::string, std::string> read_key_values(const std::string& path) {
  std::ifstream in(path);
  require(in.is_open(), ErrorCode::Io, "config: cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    require(eq != std::string::npos, ErrorCode::InvalidArgument,
            "config line " + std::to_string(line_no) + ": expected key = value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

void apply_config(ExperimentConfig& c, const std::map<std::string, std::string>& kv) {
  for (const auto& [k, v] : kv) {
    if (k == "family") c.family = v;
    else if (k == "mu_csv") c.mu_csv = v;
    else if (k == "nu_csv") c.nu_csv = v;
    else if (k == "nx") c.nx = static_cast<int>(to_int(k, v));
    else if (k == "ny") c.ny = static_cast<int>(to_int(k, v));
    else if (k == "resolution") c.resolution = static_cast<int>(to_int(k, v));
    else if (k == "backend") c.backend = v;
    else if (k == "eps") c.eps = to_double(k, v);
    else if (k == "basis") c.basis = v;
    else if (k == "m_eim") c.m_eim = static_cast<int>(to_int(k, v));
    else if (k == "m_prime") c.m_prime = static_cast<int>(to_int(k, v));
    else if (k == "test_size") c.test_size = static_cast<int>(to_int(k, v));
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(to_int(k, v));
    else if (k == "out_dir") c.out_dir = v;
    else if (k == "model") c.model = v;
    else if (k == "bench_resolutions") {
      c.bench_resolutions.clear();
      for (double d : parse_list(v)) c.bench_resolutions.push_back(static_cast<int>(d));
    } else if (k == "bench_eps") c.bench_eps = parse_list(v);
    else if (k == "estimator_resolution") c.estimator_resolution = static_cast<int>(to_int(k, v));
    else if (k == "timing_size") c.timing_size = static_cast<int>(to_int(k, v));
    else if (k == "timing") c.timing = to_bool(k, v);
    else if (k == "source") c.source = v;
    else if (k == "palettes") c.palettes = split(v, ',');
    else if (k == "alpha_y") c.alpha_y = parse_list(v);
    else if (k == "bins") c.bins = static_cast<int>(to_int(k, v));
    else if (k == "color_resolution") c.color_resolution = static_cast<int>(to_int(k, v));
    else if (k == "sweep") c.sweep = to_bool(k, v);
    else throw Error(ErrorCode::InvalidArgument, "config: unknown key '" + k + "'");
  }
}

void validate(const ExperimentConfig& c) {
  auto need = [](bool ok, const std::string& what) {
    require(ok, ErrorCode::InvalidArgument, "config: " + what);
  };
  need(c.family == "builtin-gaussian" || c.family == "csv", "family must be builtin-gaussian or csv");
  if (c.family == "csv") need(!c.mu_csv.empty() && !c.nu_csv.empty(), "csv family needs mu_csv and nu_csv");
  need(c.nx >= 1 && c.ny >= 1, "nx, ny must be >= 1");
  need(c.resolution >= 2, "resolution must be >= 2");
  need(c.backend == "lp" || c.backend == "sinkhorn", "backend must be lp or sinkhorn");
  need(c.eps > 0.0, "eps must be > 0");
  need(c.basis == "gs" || c.basis == "ones", "basis must be gs or ones");
  need(c.m_eim >= 1 && c.m_prime >= 1, "m_eim and m_prime must be >= 1");
  need(c.test_size >= 1, "test_size must be >= 1");
  need(!c.bench_resolutions.empty(), "bench_resolutions must not be empty");
  for (int r : c.bench_resolutions) need(r >= 2, "bench_resolutions entries must be >= 2");
  for (double e : c.bench_eps) need(e > 0.0, "bench_eps entries must be > 0");
  need(c.estimator_resolution >= 2, "estimator_resolution must be >= 2");
  need(c.timing_size >= 1, "timing_size must be >= 1");
  need(c.bins >= 2 && c.bins <= 64, "bins must be in [2, 64]");
  need(c.color_resolution >= 2, "color_resolution must be >= 2");
}

MeasureFamily load_family(const ExperimentConfig& c) {
  if (c.family == "builtin-gaussian") return builtin_gaussian_family(c.nx, c.ny);
  const FamilySide mu = read_family_csv_file(c.mu_csv);
  const FamilySide nu = read_family_csv_file(c.nu_csv);
  MeasureFamily f{mu.members, nu.members, mu.support, nu.support};
  f.validate();
  return f;
}

}  // namespace parot::cli
