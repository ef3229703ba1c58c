#pragma once

// Matrix realization of a symmetric pair (U, U0): involutions, Cartan
// decomposition, the trace form, centralizers and regularity tests.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cfw/types.hpp"

namespace cfw {

// An involution of the ambient complex algebra, X -> sign * J * op(X) * J^-1,
// where op optionally conjugates entrywise and/or transposes.  Conjugate-linear
// maps with sign -1 carry the transpose so that the map stays a Lie algebra
// automorphism (e.g. tau X = -conj(X)^T for su(n)).
struct Involution {
  bool conjugates = false;
  bool transposes = false;
  double sign = 1.0;
  Mat J;  // invertible; identity for the builtin pairs

  Mat apply(const Mat& X) const;
  // The lift to the group: conjugation becomes entrywise conjugation, the
  // sign -1 + transpose combination becomes inverse-transpose.
  Mat group(const Mat& g) const;
};

struct Subspace {
  int n = 0;  // ambient matrix size
  std::vector<Mat> basis;
  int dim() const { return static_cast<int>(basis.size()); }
};

struct SymmetricPair {
  int n = 0;
  Involution tau, sigma;
  Subspace U;         // basis of the whole real form (U0 followed by U1)
  Subspace U0, U1;    // +1 / -1 eigenspaces of sigma
  Subspace A;         // maximal abelian subspace of U1
  Subspace U1perpA;   // U1 ∩ A^perp
  std::vector<Mat> a;  // regular basis of A
  double form_normalization = 1.0;
  std::string name = "custom";

  int rank() const { return static_cast<int>(a.size()); }
};

// ---- basic operations -------------------------------------------------------

Mat bracket(const Mat& X, const Mat& Y);

double inner(const SymmetricPair& p, const Mat& X, const Mat& Y);

// Cartan split X = X0 + X1 with sigma X0 = X0, sigma X1 = -X1.
// Throws NotInRealForm if tau X != X.
std::pair<Mat, Mat> sigma_split(const SymmetricPair& p, const Mat& X);

Subspace centralizer(const SymmetricPair& p, const Mat& a, const Subspace& S);

struct RegularityDiag {
  bool regular = false;
  int centralizer_dim = 0;  // dim of the centralizer of a in U1
  int ad_rank = 0;          // rank of ad(a): U0 -> U1
};
RegularityDiag is_regular(const SymmetricPair& p, const Mat& a);

// Orthogonal complement of S inside `within` w.r.t. the trace form.
Subspace orth_complement(const SymmetricPair& p, const Subspace& S,
                         const Subspace& within);

// Trace-form orthogonal projection of X onto S.
Mat project(const SymmetricPair& p, const Mat& X, const Subspace& S);

SymmetricPair builtin_pair(const std::string& name, int n);

// ---- subspace utilities -----------------------------------------------------

// Columns are the flattened basis vectors.
RMat basis_matrix(const Subspace& S);

// Distance from X to span(S) in the Frobenius sense (Euclidean least squares).
double membership_residual(const Subspace& S, const Mat& X);

// Coordinates of X in the basis of S (least squares); the residual is the
// caller's problem.
RVec coordinates(const Subspace& S, const Mat& X);

// Basis of {y in S : L(y) = 0} where L is given by its action on the basis.
Subspace nullspace_in(const Subspace& S, const std::vector<Mat>& L_of_basis);

int numeric_rank(const RMat& M, double rel_tol = kTolRank);

// ---- validation -------------------------------------------------------------

struct CheckResult {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
};

// Runs every SymmetricPair invariant; each result is named.
std::vector<CheckResult> validate_pair(const SymmetricPair& p,
                                       double tol = kTolAlg);

}  // namespace cfw
