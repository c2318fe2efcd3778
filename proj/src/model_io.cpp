#include "parot/model_io.hpp"

#include "parot/csv.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace parot {

static_assert(std::endian::native == std::endian::little,
              "model files are written in host byte order, which must be little-endian");

namespace {

constexpr char kMagic[8] = {'P', 'A', 'R', 'O', 'T', 'R', 'B', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::uint64_t kHasAggregates = 1;
constexpr std::uint64_t kHasEim = 2;

class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void raw(const void* p, std::size_t n) {
    out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    require(out_.good(), ErrorCode::Io, "write_model: stream write failed");
  }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void f64s(const double* p, Index n) { raw(p, static_cast<std::size_t>(n) * sizeof(double)); }
  void vec(const Vector& v) { f64s(v.data(), v.size()); }
  void mat(const Matrix& m) { f64s(m.data(), m.size()); }
  void sized_mat(const Matrix& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    mat(m);
  }
  void indices(const std::vector<Index>& v) {
    u64(v.size());
    for (Index i : v) u64(static_cast<std::uint64_t>(i));
  }

 private:
  std::ostream& out_;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  void raw(void* p, std::size_t n) {
    in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    require(in_.gcount() == static_cast<std::streamsize>(n), ErrorCode::Format,
            "read_model: truncated file");
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
  }
  std::uint64_t u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
  }
  Index size(std::uint64_t limit = std::uint64_t{1} << 32) {
    const std::uint64_t v = u64();
    require(v <= limit, ErrorCode::Format, "read_model: implausible dimension");
    return static_cast<Index>(v);
  }
  Vector vec(Index n) {
    Vector v(n);
    raw(v.data(), static_cast<std::size_t>(n) * sizeof(double));
    return v;
  }
  Matrix mat(Index r, Index c) {
    Matrix m(r, c);
    raw(m.data(), static_cast<std::size_t>(m.size()) * sizeof(double));
    return m;
  }
  Matrix sized_mat() {
    const Index r = size();
    const Index c = size();
    return mat(r, c);
  }
  std::vector<Index> indices() {
    const Index n = size();
    std::vector<Index> v(static_cast<std::size_t>(n));
    for (auto& i : v) i = static_cast<Index>(u64());
    return v;
  }

 private:
  std::istream& in_;
};

void write_basis(Writer& w, const EIMBasis& b) {
  w.sized_mat(b.Q);
  w.indices(b.J);
  w.indices(b.I);
  w.sized_mat(b.interp);
  w.indices(b.greedy);
  w.sized_mat(b.member_products);
}

EIMBasis read_basis(Reader& r) {
  EIMBasis b;
  b.Q = r.sized_mat();
  b.J = r.indices();
  b.I = r.indices();
  b.interp = r.sized_mat();
  b.greedy = r.indices();
  b.member_products = r.sized_mat();
  require(static_cast<Index>(b.J.size()) == b.Q.cols() && b.interp.rows() == b.Q.cols(),
          ErrorCode::Format, "read_model: inconsistent EIM section");
  return b;
}

}  // namespace

void write_model(std::ostream& out, const ModelBundle& bundle) {
  const ReducedModel& m = bundle.model;
  const MeasureFamily& f = bundle.family;
  require(f.kx() == m.kx && f.ky() == m.ky && f.nx() == m.nx && f.ny() == m.ny,
          ErrorCode::DimensionMismatch, "write_model: family does not match the model");
  Writer w(out);
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  std::uint64_t flags = 0;
  if (m.has_aggregates()) flags |= kHasAggregates;
  if (bundle.eim) flags |= kHasEim;
  for (Index d : {m.R(), m.nx, m.ny, m.N(), m.M(), m.kx, m.ky, m.target_bins,
                  static_cast<Index>(m.target_dims)})
    w.u64(static_cast<std::uint64_t>(d));
  w.u64(flags);

  for (const Alpha& a : m.snapshot_alphas) w.vec(a.stacked());
  w.vec(m.reduced_cost);
  w.mat(m.stacked_marginals);
  w.mat(m.U_hat);
  w.mat(m.V_hat);
  w.mat(m.A_hat);
  w.mat(m.proj_mu);
  w.mat(m.proj_nu);

  w.sized_mat(f.support_x);
  w.sized_mat(f.support_y);
  w.mat(f.mu_matrix());
  w.mat(f.nu_matrix());

  if (flags & kHasAggregates) {
    w.u64(static_cast<std::uint64_t>(m.map_aggregates.front().cols()));
    for (const Matrix& a : m.map_aggregates) w.mat(a);
  }
  if (flags & kHasEim) {
    const EIMEstimator& e = *bundle.eim;
    write_basis(w, e.c_side);
    write_basis(w, e.cbar_side);
    w.sized_mat(e.U_rows);
    w.sized_mat(e.V_rows);
    w.sized_mat(e.cost_c);
    w.sized_mat(e.cost_cbar);
  }
}

ModelBundle read_model(std::istream& in) {
  Reader r(in);
  char magic[8];
  r.raw(magic, sizeof magic);
  require(std::memcmp(magic, kMagic, sizeof magic) == 0, ErrorCode::Format,
          "read_model: not a reduced-model file");
  const std::uint32_t version = r.u32();
  require(version == kVersion, ErrorCode::Format,
          "read_model: unsupported version " + std::to_string(version));

  ModelBundle b;
  ReducedModel& m = b.model;
  const Index R = r.size();
  m.nx = r.size();
  m.ny = r.size();
  const Index N = r.size();
  const Index M = r.size();
  m.kx = r.size();
  m.ky = r.size();
  m.target_bins = r.size();
  m.target_dims = static_cast<int>(r.size(16));
  const std::uint64_t flags = r.u64();

  for (Index k = 0; k < R; ++k) {
    const Vector s = r.vec(m.kx + m.ky);
    m.snapshot_alphas.emplace_back(s.head(m.kx), s.tail(m.ky));
  }
  m.reduced_cost = r.vec(R);
  m.stacked_marginals = r.mat(m.nx + m.ny, R);
  m.U_hat = r.mat(m.nx, N);
  m.V_hat = r.mat(m.ny, M);
  m.A_hat = r.mat(N + M, R);
  m.proj_mu = r.mat(N, m.kx);
  m.proj_nu = r.mat(M, m.ky);

  MeasureFamily& f = b.family;
  f.support_x = r.sized_mat();
  f.support_y = r.sized_mat();
  require(f.support_x.rows() == m.nx && f.support_y.rows() == m.ny, ErrorCode::Format,
          "read_model: support sizes disagree with the header");
  const Matrix mus = r.mat(m.nx, m.kx);
  const Matrix nus = r.mat(m.ny, m.ky);
  for (Index k = 0; k < m.kx; ++k) f.mus.push_back(GridMeasure::from_normalized(mus.col(k)));
  for (Index l = 0; l < m.ky; ++l) f.nus.push_back(GridMeasure::from_normalized(nus.col(l)));

  if (flags & kHasAggregates) {
    const Index cols = r.size(64);
    for (Index k = 0; k < R; ++k) m.map_aggregates.push_back(r.mat(m.nx, cols));
  }
  if (flags & kHasEim) {
    EIMEstimator e;
    e.c_side = read_basis(r);
    e.cbar_side = read_basis(r);
    e.U_rows = r.sized_mat();
    e.V_rows = r.sized_mat();
    e.cost_c = r.sized_mat();
    e.cost_cbar = r.sized_mat();
    b.eim = std::move(e);
  }
  return b;
}

void save_model(const std::string& path, const ModelBundle& bundle) {
  std::ofstream out(path, std::ios::binary);
  require(out.is_open(), ErrorCode::Io, "save_model: cannot open '" + path + "' for writing");
  write_model(out, bundle);
  out.close();
  require(!out.fail(), ErrorCode::Io, "save_model: writing '" + path + "' failed");
}

ModelBundle load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.is_open(), ErrorCode::Io, "load_model: cannot open '" + path + "'");
  return read_model(in);
}

void write_snapshot_csv(std::ostream& out, const ReducedModel& model) {
  std::vector<std::string> header;
  for (Index k = 0; k < model.kx; ++k) header.push_back("alpha_x_" + std::to_string(k + 1));
  for (Index l = 0; l < model.ky; ++l) header.push_back("alpha_y_" + std::to_string(l + 1));
  header.push_back("c_hat");
  CsvWriter w(out, header);
  for (Index r = 0; r < model.R(); ++r) {
    const Vector s = model.snapshot_alphas[static_cast<std::size_t>(r)].stacked();
    for (Index k = 0; k < s.size(); ++k) w.cell(s[k]);
    w.cell(model.reduced_cost[r]);
    w.end_row();
  }
}

}  // namespace parot
