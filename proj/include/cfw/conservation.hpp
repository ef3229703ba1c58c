#pragma once

// Q-recursion and its generated sequences, conservation-law forms and
// closedness, flow residuals in time, the flux identity and conserved
// integrals over the grid box.

#include "cfw/dressing.hpp"

namespace cfw {

struct RecursionReport {
  std::vector<double> per_level;  // levels 0 .. depth-1
  double max = 0.0;
};

// Residual of (Q_n)_{x_i} + [[a_i,v],Q_n] - [Q_{n+1},a_i] for every axis.
RecursionReport q_recursion_residual(const GridField& v, const QSequence& q,
                                     const SymmetricPair& p);

// Builds Q_{c,0..N} from v alone: the off-kernel part of each level by
// inverting ad(a_1), the ker ad(a_1) part by integrating its x_1-ODE from the
// left edge.  Edge values come from `edge_source` (levels >= 1) when given,
// else zero.
QSequence q_generate(const GridField& v, const Mat& c, int N,
                     const SymmetricPair& p,
                     const QSequence* edge_source = nullptr);

struct ScalarFieldReport {
  std::vector<GridField> fields;  // 1x1 per-node values
  double max = 0.0;
};

// d(phi) for phi = sum_i (Q_n, a_i) dx_i: antisymmetrized cross derivatives.
ScalarFieldReport closedness_residual(const QSequence& q, int n,
                                      const SymmetricPair& p);

struct ConservationForm {
  int degree = 0;                            // r - 1
  std::vector<std::vector<int>> index_sets;  // dx multi-index per component
  std::vector<GridField> comp;               // scalar component fields
  double d_residual = 0.0;
};

// phi ^ *(dx_i ^ dx_j); r = 2 and r = 3 supported.
ConservationForm eds_conservation_form(const QSequence& q, int n, int i, int j,
                                       const SymmetricPair& p);

struct FlowFamily {
  Mat b;
  int j = 3;
  std::vector<double> times;        // uniform, >= 5 samples
  std::vector<DressedGrid> slices;  // one per time, shared spatial grid
  std::vector<GridField> v;         // extracted per slice

  double dt() const;
  const SymmetricPair& pair() const { return slices.front().pair; }
  const Grid& grid() const { return slices.front().grid; }
};

FlowFamily make_flow_family(const SymmetricPair& p, const Grid& g,
                            const RationalLoop& f, const Mat& b, int j,
                            double t0, double t1, int slices,
                            const DressOptions& opt = {});

// 4th-order time derivative of per-time fields (5-point stencils).
std::vector<GridField> time_deriv(const std::vector<GridField>& f, double dt);

struct FlowReport {
  double t_residual = 0.0;  // [a_i, v_t] - (Q_{b,j})_{x_i} - [[a_i,v],Q_{b,j}]
  double x_residual = 0.0;  // per-slice first-order system residual
};

FlowReport flow_residual(const FlowFamily& F);

struct FluxReport {
  double flux_residual = 0.0;       // d/dt density vs divergence of the flux
  double stepping_residual = 0.0;   // ([Q_{c,n},Q_{b,j}],a_i) vs x_i-sum
  double base_case_residual = 0.0;  // the j = 1 chain ((Q_{c,n})_{x_i}, b)
};

FluxReport flux_identity_residual(const FlowFamily& F, const Mat& c, int n,
                                  int axis);

struct ConservedReport {
  std::vector<double> integral;       // per time sample
  double drift = 0.0;                 // max |I(t) - I(t_0)|
  double boundary_flux_bound = 0.0;   // (t_M - t_0) * max net face flux
  double boundary_density = 0.0;      // max |density| on the spatial boundary
};

ConservedReport conserved_quantity(const FlowFamily& F, const Mat& c, int n,
                                   int axis);

}  // namespace cfw
