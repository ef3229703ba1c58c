#pragma once

// Birkhoff factorization of rational loops against the vacuum frame:
// reality loops, the per-node residue linear system, solution extraction
// and the Q-coefficient expansions of m^-1 c m.

#include <functional>
#include <optional>
#include <vector>

#include "cfw/lax.hpp"

namespace cfw {

// f(lambda) = I + sum_k R_k / (lambda - p_k), equal to I at infinity.
struct RationalLoop {
  int n = 0;
  std::vector<Cplx> poles;
  std::vector<Mat> residues;

  static RationalLoop identity(int n) { return {n, {}, {}}; }
  bool is_identity() const { return poles.empty(); }
  Mat eval(Cplx lambda) const;
  // Inverse via the tau-reality identity f^-1(l) = J conj(f(conj l))^T J^-1;
  // only valid for loops satisfying the reality condition.
  RationalLoop inverse_by_reality(const SymmetricPair& p) const;
  // Taylor coefficients at infinity: m = I + M_1/l + M_2/l^2 + ...
  std::vector<Mat> series_at_infinity(int depth) const;
};

// Throws RealityUnsolvable if the pole multiset is not closed under
// conjugation and negation, or if poles sit at 0 / collide.
void validate_loop_poles(const RationalLoop& f);

// Max reality residual of the loop over a sample set.
double loop_reality_residual(const RationalLoop& f, const SymmetricPair& p,
                             const std::vector<Cplx>& samples);

// Builds the 4-pole reality loop from a pole seed and a direction seed
// (two real n-vectors stacked; made orthonormal, v = a + ib isotropic).
RationalLoop make_reality_loop(Cplx pole_seed, const RVec& direction_seed,
                               const SymmetricPair& p);

// Deterministic direction seed from an integer.
RVec loop_seed_vector(int n, unsigned seed);

// exp((a_1 x_1 + ... + a_r x_r) lambda + sum_m b_m lambda^{j_m} t_m)
struct FlowTerm {
  Mat b;     // in A
  int j = 0; // odd, > 1
  double t = 0.0;
};

struct VacuumExponent {
  const SymmetricPair* pair = nullptr;
  std::vector<double> x;
  std::vector<FlowTerm> flows;
  bool reverse_product = false;  // evaluate the commuting product in reverse

  Mat linear_coefficient() const;  // sum a_i x_i
  Mat value(Cplx lambda) const;
  Mat dvalue(Cplx lambda) const;   // d/dlambda
};

struct FactorizationPoint {
  RationalLoop m;
  double condition = 0.0;       // of the residue linear system
  double solve_residual = 0.0;  // least-squares defect
  Mat m_minus1() const;         // sum of m's residues
};

struct BirkhoffOptions {
  double condition_cutoff = 1e12;
  bool use_svd = false;  // alternative solver, for uniqueness cross-checks
};

// Solves for m with f's pole set such that E = f^-1 e^A m is entire.
// Throws FactorizationSingular past the condition cutoff.
FactorizationPoint birkhoff_factor(const RationalLoop& f,
                                   const RationalLoop& finv,
                                   const VacuumExponent& X,
                                   const BirkhoffOptions& opt = {});

// E(lambda) = f^-1(l) e^A(l) m(l); entire when the factorization succeeded.
Mat eval_plus_factor(const RationalLoop& finv, const VacuumExponent& X,
                     const FactorizationPoint& pt, Cplx lambda);

// Max over poles of |contour integral of E/(l - p_k)| (entirety check).
double entirety_residual(const RationalLoop& finv, const VacuumExponent& X,
                         const FactorizationPoint& pt, int contour_points = 16);

// Max over a contour of ||f^-1 e^A - E m^-1||.
double product_identity_residual(const RationalLoop& f,
                                 const RationalLoop& finv,
                                 const VacuumExponent& X,
                                 const FactorizationPoint& pt,
                                 int contour_points = 16);

// Q_{c,0..N}: Laurent coefficients of m^-1 c m at infinity, by exact series
// arithmetic on the rational loop.
std::vector<Mat> q_expand(const FactorizationPoint& pt, const Mat& c, int N);

constexpr int kMaxSeriesDepth = 12;

// ---- grid-level driver ------------------------------------------------------

struct DressedGrid {
  SymmetricPair pair;
  Grid grid;
  RationalLoop f, finv;
  std::vector<FlowTerm> flows;
  std::vector<FactorizationPoint> points;  // per node
  std::vector<long> holes;                 // nodes past the condition cutoff
  double max_condition = 0.0;
  double max_solve_residual = 0.0;

  VacuumExponent exponent_at(long node) const;
  Mat E_raw(long node, Cplx lambda) const;
  // Frame normalized to the identity at x = 0: E(0,l)^-1 E(x,l).
  FrameField frame(Cplx lambda) const;
};

struct DressOptions {
  BirkhoffOptions birkhoff;
  bool strict = false;  // throw on holes instead of recording them
};

DressedGrid dress_grid(const SymmetricPair& p, const Grid& g,
                       const RationalLoop& f, std::vector<FlowTerm> flows = {},
                       const DressOptions& opt = {});

// v = (m_-1)^perp; throws SpaceViolation if m_-1 leaves U1.
GridField extract_solution(const DressedGrid& d);

// Q-sequence of c over the whole grid.
struct QSequence {
  Mat c;
  int depth = 0;
  Grid grid;
  std::vector<std::vector<Mat>> Q;  // Q[level][node]

  GridField level(int k, int n_mat) const;
};

QSequence q_expand_grid(const DressedGrid& d, const Mat& c, int N);

// Max parity residual: sigma Q_n - (-1)^(n+1) Q_n (Q_0 = c is sigma-antifixed).
double q_parity_residual(const QSequence& q, const SymmetricPair& p);

// Max residual over levels n <= depth of the lambda^-n coefficients of
// [m^-1 c1 m, m^-1 c2 m] (they all vanish in exact arithmetic).
double q_commutation_residual(const FactorizationPoint& pt, const Mat& c1,
                              const Mat& c2, int depth);

struct FrameEquationReport {
  double x_residual = 0.0;   // E^-1 E_xi vs a_i l + [a_i, v]
};

FrameEquationReport frame_equation_check(const DressedGrid& d,
                                         const GridField& v,
                                         const std::vector<Cplx>& lambdas);

}  // namespace cfw
