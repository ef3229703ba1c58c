#include "cfw/algebra.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace cfw {

Mat Involution::apply(const Mat& X) const {
  Mat Y = conjugates ? X.conjugate() : X;
  if (transposes) Y = Y.transpose().eval();
  if (J.size() > 0 && !J.isIdentity(0.0)) Y = J * Y * J.inverse();
  return sign * Y;
}

Mat Involution::group(const Mat& g) const {
  Mat Y = conjugates ? g.conjugate() : g;
  if (transposes) Y = Y.transpose().inverse().eval();
  if (J.size() > 0 && !J.isIdentity(0.0)) Y = J * Y * J.inverse();
  return Y;
}

Mat bracket(const Mat& X, const Mat& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw DimensionMismatch("bracket: size mismatch");
  return X * Y - Y * X;
}

double inner(const SymmetricPair& p, const Mat& X, const Mat& Y) {
  if (X.rows() != Y.rows()) throw DimensionMismatch("inner: size mismatch");
  return p.form_normalization * (X * Y).trace().real();
}

std::pair<Mat, Mat> sigma_split(const SymmetricPair& p, const Mat& X) {
  if ((p.tau.apply(X) - X).norm() > kTolAlg * std::max(1.0, X.norm()) * 100)
    throw NotInRealForm("sigma_split: tau X != X");
  Mat sX = p.sigma.apply(X);
  return {0.5 * (X + sX), 0.5 * (X - sX)};
}

RMat basis_matrix(const Subspace& S) {
  RMat B(2 * S.n * S.n, S.dim());
  for (int j = 0; j < S.dim(); ++j) B.col(j) = flatten(S.basis[j]);
  return B;
}

int numeric_rank(const RMat& M, double rel_tol) {
  if (M.size() == 0) return 0;
  Eigen::JacobiSVD<RMat> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > rel_tol * s(0)) ++r;
  return r;
}

RVec coordinates(const Subspace& S, const Mat& X) {
  RMat B = basis_matrix(S);
  return B.colPivHouseholderQr().solve(flatten(X));
}

double membership_residual(const Subspace& S, const Mat& X) {
  if (S.dim() == 0) return X.norm();
  RMat B = basis_matrix(S);
  RVec x = flatten(X);
  RVec c = B.colPivHouseholderQr().solve(x);
  return (B * c - x).norm();
}

Subspace nullspace_in(const Subspace& S, const std::vector<Mat>& L_of_basis) {
  Subspace out{S.n, {}};
  if (S.dim() == 0) return out;
  const Eigen::Index rows = 2 * L_of_basis[0].size();
  RMat M(rows, S.dim());
  for (int j = 0; j < S.dim(); ++j) {
    if (2 * L_of_basis[j].size() != rows)
      throw DimensionMismatch("nullspace_in: inconsistent constraint sizes");
    const Mat& L = L_of_basis[j];
    for (Eigen::Index i = 0; i < L.size(); ++i) {
      M(2 * i, j) = L(i).real();
      M(2 * i + 1, j) = L(i).imag();
    }
  }
  Eigen::JacobiSVD<RMat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  for (int j = 0; j < S.dim(); ++j) {
    double sj = j < s.size() ? s(j) : 0.0;
    if (sj <= kTolRank * std::max(smax, 1.0)) {
      RVec c = svd.matrixV().col(j);
      Mat v = Mat::Zero(S.n, S.n);
      for (int b = 0; b < S.dim(); ++b) v += c(b) * S.basis[b];
      out.basis.push_back(v);
    }
  }
  return out;
}

Subspace centralizer(const SymmetricPair& p, const Mat& a, const Subspace& S) {
  std::vector<Mat> ad;
  ad.reserve(S.dim());
  for (const auto& y : S.basis) ad.push_back(bracket(a, y));
  return nullspace_in(S, ad);
}

RegularityDiag is_regular(const SymmetricPair& p, const Mat& a) {
  if ((p.sigma.apply(a) + a).norm() > kTolSpace * std::max(1.0, a.norm()))
    throw NotInU1("is_regular: sigma a != -a");
  RegularityDiag d;
  d.centralizer_dim = centralizer(p, a, p.U1).dim();
  RMat M(2 * p.n * p.n, p.U0.dim());
  for (int j = 0; j < p.U0.dim(); ++j) M.col(j) = flatten(bracket(a, p.U0.basis[j]));
  d.ad_rank = numeric_rank(M);
  d.regular = (d.centralizer_dim == p.rank()) &&
              (d.ad_rank == p.U1.dim() - p.rank());
  return d;
}

static RMat gram(const SymmetricPair& p, const Subspace& S) {
  RMat G(S.dim(), S.dim());
  for (int i = 0; i < S.dim(); ++i)
    for (int j = 0; j < S.dim(); ++j)
      G(i, j) = inner(p, S.basis[i], S.basis[j]);
  return G;
}

Subspace orth_complement(const SymmetricPair& p, const Subspace& S,
                         const Subspace& within) {
  RMat G = gram(p, within);
  if (numeric_rank(G) < within.dim())
    throw DegenerateForm("orth_complement: form degenerate on `within`");
  // rows: inner(s_a, w_b)
  RMat C(S.dim(), within.dim());
  for (int a = 0; a < S.dim(); ++a)
    for (int b = 0; b < within.dim(); ++b)
      C(a, b) = inner(p, S.basis[a], within.basis[b]);
  Subspace out{within.n, {}};
  if (S.dim() == 0) return within;
  Eigen::JacobiSVD<RMat> svd(C, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  for (int j = 0; j < within.dim(); ++j) {
    double sj = j < s.size() ? s(j) : 0.0;
    if (sj <= kTolRank * std::max(smax, 1.0)) {
      RVec c = svd.matrixV().col(j);
      Mat v = Mat::Zero(within.n, within.n);
      for (int b = 0; b < within.dim(); ++b) v += c(b) * within.basis[b];
      out.basis.push_back(v);
    }
  }
  return out;
}

Mat project(const SymmetricPair& p, const Mat& X, const Subspace& S) {
  if (S.dim() == 0) return Mat::Zero(X.rows(), X.cols());
  RMat G = gram(p, S);
  if (numeric_rank(G) < S.dim())
    throw DegenerateForm("project: form degenerate on S");
  RVec b(S.dim());
  for (int a = 0; a < S.dim(); ++a) b(a) = inner(p, X, S.basis[a]);
  RVec c = G.colPivHouseholderQr().solve(b);
  Mat out = Mat::Zero(X.rows(), X.cols());
  for (int a = 0; a < S.dim(); ++a) out += c(a) * S.basis[a];
  return out;
}

// Orthonormalize the flattened basis (plain QR) for conditioning.
static void orthonormalize(Subspace& S) {
  if (S.dim() == 0) return;
  RMat B = basis_matrix(S);
  Eigen::HouseholderQR<RMat> qr(B);
  RMat Q = qr.householderQ() * RMat::Identity(B.rows(), S.dim());
  for (int j = 0; j < S.dim(); ++j) S.basis[j] = unflatten(Q.col(j), S.n);
}

SymmetricPair builtin_pair(const std::string& name, int n) {
  if (name != "sun_son" || n < 2) throw UnknownPair("unknown pair: " + name);
  SymmetricPair p;
  p.n = n;
  p.name = name;
  const Cplx I1(0.0, 1.0);
  p.tau = Involution{true, true, -1.0, Mat::Identity(n, n)};
  p.sigma = Involution{true, false, 1.0, Mat::Identity(n, n)};

  p.U0.n = p.U1.n = p.A.n = p.U.n = p.U1perpA.n = n;
  // U0 = real antisymmetric
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Mat e = Mat::Zero(n, n);
      e(k, l) = 1.0;
      e(l, k) = -1.0;
      p.U0.basis.push_back(e);
    }
  // U1 = i * (real symmetric traceless)
  for (int k = 0; k < n; ++k)
    for (int l = k + 1; l < n; ++l) {
      Mat e = Mat::Zero(n, n);
      e(k, l) = I1;
      e(l, k) = I1;
      p.U1.basis.push_back(e);
    }
  for (int m = 0; m + 1 < n; ++m) {
    Mat e = Mat::Zero(n, n);
    e(m, m) = I1;
    e(m + 1, m + 1) = -I1;
    p.U1.basis.push_back(e);
    p.A.basis.push_back(e);
  }
  orthonormalize(p.U0);
  orthonormalize(p.U1);
  orthonormalize(p.A);

  // Regular basis of A: a_k = i * diag(m^k - mean), distinct entries by
  // monotonicity, independent by the Vandermonde argument.
  for (int k = 1; k < n; ++k) {
    RVec d(n);
    for (int m = 0; m < n; ++m) d(m) = std::pow(double(m + 1), double(k));
    d.array() -= d.mean();
    d /= d.norm();
    Mat a = Mat::Zero(n, n);
    for (int m = 0; m < n; ++m) a(m, m) = I1 * d(m);
    p.a.push_back(a);
  }

  p.U = p.U0;
  p.U.basis.insert(p.U.basis.end(), p.U1.basis.begin(), p.U1.basis.end());
  p.U1perpA = orth_complement(p, p.A, p.U1);
  return p;
}

std::vector<CheckResult> validate_pair(const SymmetricPair& p, double tol) {
  std::vector<CheckResult> out;
  auto push = [&](const std::string& name, double res, double t) {
    out.push_back({name, res, t, res <= t});
  };

  double r = 0.0;
  for (const auto& X : p.U.basis) r = std::max(r, std::abs(X.trace()));
  push("traceless", r, tol);

  r = 0.0;
  for (const auto& X : p.U.basis) {
    r = std::max(r, (p.tau.apply(p.tau.apply(X)) - X).norm());
    r = std::max(r, (p.sigma.apply(p.sigma.apply(X)) - X).norm());
  }
  push("involutive", r, tol);

  r = 0.0;
  for (const auto& X : p.U.basis)
    r = std::max(r, (p.tau.apply(p.sigma.apply(X)) -
                     p.sigma.apply(p.tau.apply(X))).norm());
  push("tau_sigma_commute", r, tol);

  r = 0.0;
  for (const auto& X : p.U.basis) r = std::max(r, (p.tau.apply(X) - X).norm());
  push("tau_fixes_U", r, tol);

  r = 0.0;
  for (const auto& X : p.U0.basis) r = std::max(r, (p.sigma.apply(X) - X).norm());
  for (const auto& X : p.U1.basis) r = std::max(r, (p.sigma.apply(X) + X).norm());
  push("sigma_eigenspaces", r, tol);

  // bracket relations, via membership residuals
  double r00 = 0, r01 = 0, r11 = 0;
  for (const auto& X : p.U0.basis)
    for (const auto& Y : p.U0.basis)
      r00 = std::max(r00, membership_residual(p.U0, bracket(X, Y)));
  for (const auto& X : p.U0.basis)
    for (const auto& Y : p.U1.basis)
      r01 = std::max(r01, membership_residual(p.U1, bracket(X, Y)));
  for (const auto& X : p.U1.basis)
    for (const auto& Y : p.U1.basis)
      r11 = std::max(r11, membership_residual(p.U0, bracket(X, Y)));
  push("bracket_U0_U0_in_U0", r00, tol * 100);
  push("bracket_U0_U1_in_U1", r01, tol * 100);
  push("bracket_U1_U1_in_U0", r11, tol * 100);

  r = 0.0;
  for (const auto& ai : p.a)
    for (const auto& aj : p.a) r = std::max(r, bracket(ai, aj).norm());
  push("A_abelian", r, tol);

  bool all_regular = true;
  for (const auto& ai : p.a) all_regular = all_regular && is_regular(p, ai).regular;
  push("regular_basis", all_regular ? 0.0 : 1.0, 0.5);

  RMat G(p.U.dim(), p.U.dim());
  for (int i = 0; i < p.U.dim(); ++i)
    for (int j = 0; j < p.U.dim(); ++j)
      G(i, j) = inner(p, p.U.basis[i], p.U.basis[j]);
  push("form_nondegenerate", numeric_rank(G) == p.U.dim() ? 0.0 : 1.0, 0.5);

  push("dim_split", std::abs(p.U0.dim() + p.U1.dim() - p.U.dim()), 0.5);
  push("U1_decomposition",
       std::abs(p.A.dim() + p.U1perpA.dim() - p.U1.dim()), 0.5);

  // ad(a1) injective on U1 ∩ A^perp
  if (!p.a.empty() && p.U1perpA.dim() > 0) {
    RMat M(2 * p.n * p.n, p.U1perpA.dim());
    for (int j = 0; j < p.U1perpA.dim(); ++j)
      M.col(j) = flatten(bracket(p.a[0], p.U1perpA.basis[j]));
    Eigen::JacobiSVD<RMat> svd(M);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    double smax = svd.singularValues()(0);
    push("ad_a1_injective_on_U1perpA", smin > kTolRank * smax ? 0.0 : 1.0, 0.5);
  }
  return out;
}

}  // namespace cfw
