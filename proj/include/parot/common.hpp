#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace parot {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

enum class ErrorCode {
  DimensionMismatch,
  InvalidArgument,
  MissingExtremePoints,
  LinearDependence,
  NumericalBreakdown,
  SolverFailure,
  Io,
  Format,
};

const char* to_string(ErrorCode code);

/// Structured failure raised by every module. The code drives CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) throw Error(code, what);
}

/// Optional flop/comparison tally used to check online cost claims.
struct OpCounter {
  std::uint64_t ops = 0;
  void add(std::uint64_t n) { ops += n; }
};

inline void count(OpCounter* c, std::uint64_t n) {
  if (c) c->add(n);
}

}  // namespace parot
