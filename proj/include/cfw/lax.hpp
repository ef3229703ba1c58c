#pragma once

// Uniform grids, 4th-order stencils, connection fields, curvature residuals,
// parallel-frame integration and the geometric constructions built from
// frames (curved flats, Cartan lifts, flat abelian maps).

#include <functional>
#include <utility>
#include <vector>

#include "cfw/algebra.hpp"

namespace cfw {

struct Grid {
  int r = 2;
  std::vector<double> xmin, xmax;  // per axis
  std::vector<int> N;              // nodes per axis, odd so 0 is a node

  static Grid make_uniform(int r, double half_extent, int nodes_per_axis);

  double h(int axis) const { return (xmax[axis] - xmin[axis]) / (N[axis] - 1); }
  long num_nodes() const;
  long index(const std::vector<int>& idx) const;
  std::vector<int> multi_index(long flat) const;
  double coord(int axis, int i) const { return xmin[axis] + i * h(axis); }
  std::vector<double> coords(long flat) const;
  std::vector<int> origin_index() const;
  bool same(const Grid& o) const;
};

enum class ValueSpace { None, U, U0, U1, U1perpA, Group };

struct GridField {
  Grid grid;
  int n = 0;
  ValueSpace space = ValueSpace::None;
  std::vector<Mat> v;  // per node, flat order

  Mat& at(long i) { return v[i]; }
  const Mat& at(long i) const { return v[i]; }
};

GridField make_field(const Grid& g, int n, ValueSpace space);

double max_norm(const GridField& f);

// Max per-node residual of membership in the tagged space.
double space_residual(const GridField& f, const SymmetricPair& p);

// 4th-order derivative along one axis (central interior, one-sided edges).
GridField deriv(const GridField& f, int axis);

struct ConnectionField {
  Grid grid;
  int n = 0;
  std::vector<GridField> coef;  // one field per axis
};

struct CurvatureReport {
  std::vector<std::pair<int, int>> pairs;
  std::vector<GridField> F;  // residual field per pair
  double max = 0.0;
};

CurvatureReport curvature(const ConnectionField& C);

struct ResidualReport {
  std::vector<GridField> fields;
  double max = 0.0;
};

// Residual of the first-order system for v (values in U1 ∩ A^perp).
ResidualReport uu0_residual(const GridField& v, const SymmetricPair& p);

ConnectionField lax_theta(const GridField& v, Cplx lambda,
                          const SymmetricPair& p);

ConnectionField curvedflat_omega(const ConnectionField& A, Cplx lambda);

// Max over samples of the two reality identities for a lambda-family.
// Uses the conjugate-linear tau lift and the complex-linear extension of
// sigma at the group level.
double reality_residual(const std::function<Mat(Cplx)>& F,
                        const std::vector<Cplx>& lambda_samples,
                        const SymmetricPair& p);

Mat group_tau(const SymmetricPair& p, const Mat& g);
Mat group_sigma(const SymmetricPair& p, const Mat& g);       // entrywise lift
Mat group_sigma_ext(const SymmetricPair& p, const Mat& g);   // complex-linear lift

struct FrameField {
  Grid grid;
  Cplx lambda;
  int n = 0;
  std::vector<Mat> E;  // per node; E at the origin node is the identity
};

struct FrameReport {
  FrameField frame;
  double path_independence = 0.0;  // staircase order swap, max node distance
  double log_derivative = 0.0;     // stencil E^-1 dE vs the connection
};

struct FrameOptions {
  double max_step_norm = 2.0;  // exponent-norm bound before sub-stepping
  int max_substeps = 64;
};

FrameReport parallel_frame(const GridField& v, Cplx lambda,
                           const SymmetricPair& p, const FrameOptions& opt = {});

ConnectionField gauge(const GridField& g, const ConnectionField& C);

// psi = E(.,1) E(.,-1)^-1 given precomputed frames.
GridField curved_flat(const FrameField& E_plus, const FrameField& E_minus);

// Max node residual of sigma(psi) psi = I (Cartan-embedding membership).
double cartan_embedding_residual(const GridField& psi, const SymmetricPair& p);

// f = E(.,1) E(.,0)^-1.
GridField cartan_lift(const FrameField& E_one, const FrameField& E_zero);

struct CartanLiftReport {
  double u1_membership = 0.0;     // f^-1 f_xi in U1
  double commutation = 0.0;       // [f^-1 f_xi, f^-1 f_xj]
  double g_equation = 0.0;        // g^-1 g_xi - [a_i, v]
};
CartanLiftReport cartan_lift_residuals(const GridField& f, const GridField& g,
                                       const GridField& v,
                                       const SymmetricPair& p);

// Y = d/dlambda E . E^-1 at lambda = 0 by central difference + one Richardson
// level across delta, delta/2.
GridField flat_abelian(const FrameField& E_pd, const FrameField& E_md,
                       const FrameField& E_pd2, const FrameField& E_md2,
                       const FrameField& E_zero, double delta);

struct FlatAbelianReport {
  double u1_membership = 0.0;
  double bracket = 0.0;        // [Y_xi, Y_xj]
  double gram_drift = 0.0;     // inner(Y_xi, Y_xj) constancy over the grid
};
FlatAbelianReport flat_abelian_residuals(const GridField& Y,
                                         const SymmetricPair& p);

}  // namespace cfw
