#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfw {

using Cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

constexpr double kTolAlg = 1e-12;
constexpr double kTolRank = 1e-9;   // relative to largest singular value
constexpr double kTolSpace = 1e-9;

struct DimensionMismatch : std::runtime_error {
  explicit DimensionMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct NotInRealForm : std::runtime_error {
  explicit NotInRealForm(const std::string& w) : std::runtime_error(w) {}
};
struct NotInU1 : std::runtime_error {
  explicit NotInU1(const std::string& w) : std::runtime_error(w) {}
};
struct DegenerateForm : std::runtime_error {
  explicit DegenerateForm(const std::string& w) : std::runtime_error(w) {}
};
struct UnknownPair : std::runtime_error {
  explicit UnknownPair(const std::string& w) : std::runtime_error(w) {}
};
struct WrongValueSpace : std::runtime_error {
  explicit WrongValueSpace(const std::string& w) : std::runtime_error(w) {}
};
struct GridTooSmall : std::runtime_error {
  explicit GridTooSmall(const std::string& w) : std::runtime_error(w) {}
};
struct GridMismatch : std::runtime_error {
  explicit GridMismatch(const std::string& w) : std::runtime_error(w) {}
};
struct SingularFrame : std::runtime_error {
  explicit SingularFrame(const std::string& w) : std::runtime_error(w) {}
};
struct StepRejected : std::runtime_error {
  explicit StepRejected(const std::string& w) : std::runtime_error(w) {}
};
struct EvaluationFailure : std::runtime_error {
  explicit EvaluationFailure(const std::string& w) : std::runtime_error(w) {}
};
struct RealityUnsolvable : std::runtime_error {
  explicit RealityUnsolvable(const std::string& w) : std::runtime_error(w) {}
};
struct FactorizationSingular : std::runtime_error {
  explicit FactorizationSingular(const std::string& w) : std::runtime_error(w) {}
};
struct SpaceViolation : std::runtime_error {
  explicit SpaceViolation(const std::string& w) : std::runtime_error(w) {}
};
struct DepthOverflow : std::runtime_error {
  explicit DepthOverflow(const std::string& w) : std::runtime_error(w) {}
};
struct NonRegularBasis : std::runtime_error {
  explicit NonRegularBasis(const std::string& w) : std::runtime_error(w) {}
};
struct UnsupportedRank : std::runtime_error {
  explicit UnsupportedRank(const std::string& w) : std::runtime_error(w) {}
};
struct NotIntegral : std::runtime_error {
  explicit NotIntegral(const std::string& w) : std::runtime_error(w) {}
};
struct InvalidFlag : std::runtime_error {
  explicit InvalidFlag(const std::string& w) : std::runtime_error(w) {}
};
struct ProbeFailed : std::runtime_error {
  explicit ProbeFailed(const std::string& w) : std::runtime_error(w) {}
};
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& w) : std::runtime_error(w) {}
};

// Frobenius norm of the difference, the workhorse residual measure.
inline double dist(const Mat& a, const Mat& b) { return (a - b).norm(); }

// Flatten an n x n complex matrix into a real vector of length 2n^2.
inline RVec flatten(const Mat& m) {
  const Eigen::Index n2 = m.size();
  RVec v(2 * n2);
  for (Eigen::Index i = 0; i < n2; ++i) {
    v(2 * i) = m(i).real();
    v(2 * i + 1) = m(i).imag();
  }
  return v;
}

inline Mat unflatten(const RVec& v, Eigen::Index n) {
  Mat m(n, n);
  for (Eigen::Index i = 0; i < n * n; ++i) m(i) = Cplx(v(2 * i), v(2 * i + 1));
  return m;
}

}  // namespace cfw
