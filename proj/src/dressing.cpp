#include "cfw/dressing.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace cfw {

namespace {

constexpr double kPoleTol = 1e-9;

Mat tau_J(const SymmetricPair& p) {
  if (p.tau.J.size() == 0) return Mat::Identity(p.n, p.n);
  return p.tau.J;
}

bool is_diagonal(const Mat& M) {
  double off = 0.0, d = 0.0;
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j)
      (i == j ? d : off) = std::max(i == j ? d : off, std::abs(M(i, j)));
  return off <= 1e-14 * (1.0 + d);
}

Mat exp_of(const Mat& M) {
  if (is_diagonal(M)) {
    Mat r = Mat::Zero(M.rows(), M.cols());
    for (Eigen::Index i = 0; i < M.rows(); ++i) r(i, i) = std::exp(M(i, i));
    return r;
  }
  return M.exp();
}

// vec(L * S) = (I kron L) vec(S); writes the block for one left multiplier.
void add_left_block(Eigen::MatrixXcd& A, long row0, long col0, const Mat& L) {
  const long n = L.rows();
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r)
      for (long q = 0; q < n; ++q) A(row0 + c * n + r, col0 + c * n + q) += L(r, q);
}

void vec_into(Eigen::VectorXcd& b, long row0, const Mat& M) {
  const long n = M.rows();
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) b(row0 + c * n + r) = M(r, c);
}

Mat unvec(const Eigen::VectorXcd& s, long off, long n) {
  Mat M(n, n);
  for (long c = 0; c < n; ++c)
    for (long r = 0; r < n; ++r) M(r, c) = s(off + c * n + r);
  return M;
}

}  // namespace

Mat RationalLoop::eval(Cplx lambda) const {
  Mat r = Mat::Identity(n, n);
  for (size_t k = 0; k < poles.size(); ++k) {
    const Cplx d = lambda - poles[k];
    if (std::abs(d) < 1e-13)
      throw EvaluationFailure("rational loop evaluated at a pole");
    r += residues[k] / d;
  }
  return r;
}

RationalLoop RationalLoop::inverse_by_reality(const SymmetricPair& p) const {
  const Mat J = tau_J(p);
  const Mat Jinv = J.inverse();
  RationalLoop inv;
  inv.n = n;
  for (size_t k = 0; k < poles.size(); ++k) {
    inv.poles.push_back(std::conj(poles[k]));
    inv.residues.push_back(J * residues[k].conjugate().transpose() * Jinv);
  }
  // Guard: the formula only inverts loops satisfying the reality condition.
  double worst = 0.0;
  for (double s : {2.31, -1.57, 0.73}) {
    for (double u : {1.91, -0.41}) {
      const Cplx lam(s, u);
      bool near_pole = false;
      for (Cplx pp : poles)
        if (std::abs(lam - pp) < 0.3 || std::abs(lam - std::conj(pp)) < 0.3)
          near_pole = true;
      if (near_pole) continue;
      worst = std::max(worst,
                       dist(eval(lam) * inv.eval(lam), Mat::Identity(n, n)));
    }
  }
  if (worst > 1e-8)
    throw RealityUnsolvable(
        "loop does not satisfy the reality condition; mirrored inverse "
        "formula fails (residual " +
        std::to_string(worst) + ")");
  return inv;
}

std::vector<Mat> RationalLoop::series_at_infinity(int depth) const {
  if (depth > kMaxSeriesDepth)
    throw DepthOverflow("series depth " + std::to_string(depth) + " > " +
                        std::to_string(kMaxSeriesDepth));
  std::vector<Mat> M(depth + 1, Mat::Zero(n, n));
  M[0] = Mat::Identity(n, n);
  for (int d = 1; d <= depth; ++d)
    for (size_t k = 0; k < poles.size(); ++k)
      M[d] += residues[k] * std::pow(poles[k], d - 1);
  return M;
}

void validate_loop_poles(const RationalLoop& f) {
  const auto& ps = f.poles;
  auto has = [&](Cplx z) {
    for (Cplx p : ps)
      if (std::abs(p - z) < kPoleTol) return true;
    return false;
  };
  for (size_t i = 0; i < ps.size(); ++i) {
    if (std::abs(ps[i]) < kPoleTol)
      throw RealityUnsolvable("pole at the origin");
    for (size_t j = i + 1; j < ps.size(); ++j)
      if (std::abs(ps[i] - ps[j]) < kPoleTol)
        throw RealityUnsolvable("repeated pole");
    if (!has(std::conj(ps[i])) || !has(-ps[i]))
      throw RealityUnsolvable(
          "pole set is not closed under conjugation and negation");
  }
}

double loop_reality_residual(const RationalLoop& f, const SymmetricPair& p,
                             const std::vector<Cplx>& samples) {
  double worst = 0.0;
  for (Cplx lam : samples) {
    const Mat v = f.eval(lam);
    worst = std::max(worst, dist(v, group_tau(p, f.eval(std::conj(lam)))));
    worst = std::max(worst, dist(v, group_sigma_ext(p, f.eval(-lam))));
  }
  return worst;
}

RationalLoop make_reality_loop(Cplx pole_seed, const RVec& direction_seed,
                               const SymmetricPair& p) {
  const int n = p.n;
  const Cplx al = pole_seed;
  if (direction_seed.size() != 2 * n)
    throw DimensionMismatch("direction seed must have length 2n");
  RVec a = direction_seed.head(n), b = direction_seed.tail(n);
  if (a.norm() < 1e-13 && b.norm() < 1e-13) return RationalLoop::identity(n);
  if (std::abs(al.real()) < kPoleTol * std::abs(al) ||
      std::abs(al.imag()) < kPoleTol * std::abs(al) || std::abs(al) < kPoleTol)
    throw RealityUnsolvable(
        "pole seed on the real or imaginary axis cannot close a 4-pole orbit");
  if (a.norm() < 1e-13)
    throw RealityUnsolvable("degenerate direction seed (zero real part)");
  a.normalize();
  b -= a.dot(b) * a;
  if (b.norm() < 1e-13)
    throw RealityUnsolvable("degenerate direction seed (collinear parts)");
  b.normalize();
  // v = a + ib isotropic; P and conj(P) are commuting rank-1 projections.
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = Cplx(a(i), b(i));
  const Mat P = (v * v.adjoint()) / v.squaredNorm();
  const Mat Pc = P.conjugate();
  const Cplx crho = std::conj(al) * std::conj(al) - al * al;
  RationalLoop f;
  f.n = n;
  f.poles = {std::conj(al), -std::conj(al), al, -al};
  f.residues = {(crho / (2.0 * std::conj(al))) * P,
                (-crho / (2.0 * std::conj(al))) * P,
                (-crho / (2.0 * al)) * Pc, (crho / (2.0 * al)) * Pc};
  return f;
}

RVec loop_seed_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  RVec v(2 * n);
  for (int i = 0; i < 2 * n; ++i) v(i) = g(rng);
  return v;
}

Mat VacuumExponent::linear_coefficient() const {
  Mat X = Mat::Zero(pair->n, pair->n);
  for (size_t i = 0; i < x.size(); ++i) X += x[i] * pair->a[i];
  return X;
}

Mat VacuumExponent::value(Cplx lambda) const {
  std::vector<Mat> terms;
  terms.push_back(linear_coefficient() * lambda);
  for (const auto& fl : flows)
    terms.push_back(fl.b * std::pow(lambda, fl.j) * fl.t);
  if (reverse_product) std::reverse(terms.begin(), terms.end());
  Mat r = exp_of(terms[0]);
  for (size_t i = 1; i < terms.size(); ++i) r = r * exp_of(terms[i]);
  return r;
}

Mat VacuumExponent::dvalue(Cplx lambda) const {
  Mat c = linear_coefficient();
  for (const auto& fl : flows)
    c += fl.b * (static_cast<double>(fl.j) * std::pow(lambda, fl.j - 1) * fl.t);
  return c * value(lambda);
}

Mat FactorizationPoint::m_minus1() const {
  Mat s = Mat::Zero(m.n, m.n);
  for (const auto& R : m.residues) s += R;
  return s;
}

FactorizationPoint birkhoff_factor(const RationalLoop& f,
                                   const RationalLoop& finv,
                                   const VacuumExponent& X,
                                   const BirkhoffOptions& opt) {
  const int n = X.pair->n;
  if (f.is_identity()) {
    FactorizationPoint pt;
    pt.m = RationalLoop::identity(n);
    pt.condition = 1.0;
    return pt;
  }
  const int K = static_cast<int>(f.poles.size());
  const long nn = static_cast<long>(n) * n;
  const Mat I = Mat::Identity(n, n);

  auto finv_res_at = [&](Cplx z) -> Mat {
    for (size_t j = 0; j < finv.poles.size(); ++j)
      if (std::abs(finv.poles[j] - z) < kPoleTol) return finv.residues[j];
    return Mat::Zero(n, n);
  };
  auto finv_reg_at = [&](Cplx z) -> Mat {
    Mat r = I;
    for (size_t j = 0; j < finv.poles.size(); ++j)
      if (std::abs(finv.poles[j] - z) >= kPoleTol)
        r += finv.residues[j] / (z - finv.poles[j]);
    return r;
  };

  // Extra conditions at poles of f^-1 that m does not share.
  std::vector<Cplx> extra;
  for (Cplx q : finv.poles) {
    bool shared = false;
    for (Cplx pp : f.poles)
      if (std::abs(pp - q) < kPoleTol) shared = true;
    if (!shared) extra.push_back(q);
  }

  long rows = 0;
  for (int k = 0; k < K; ++k)
    rows += (finv_res_at(f.poles[k]).norm() > 0 ? 2 : 1) * nn;
  rows += static_cast<long>(extra.size()) * nn;
  const long cols = static_cast<long>(K) * nn;

  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(rows, cols);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(rows);

  long row = 0;
  for (int k = 0; k < K; ++k) {
    const Cplx pk = f.poles[k];
    const Mat eA = X.value(pk);
    const Mat deA = X.dvalue(pk);
    const Mat Rk = finv_res_at(pk);
    const Mat Ck = finv_reg_at(pk);
    const bool has_pole = Rk.norm() > 0;
    if (has_pole) {
      // (lambda - pk)^-2 coefficient of f^-1 e^A m.
      add_left_block(A, row, k * nn, Rk * eA);
      row += nn;
    }
    // (lambda - pk)^-1 coefficient.
    if (has_pole) {
      for (int j = 0; j < K; ++j)
        if (j != k)
          add_left_block(A, row, j * nn, Rk * eA / (pk - f.poles[j]));
      add_left_block(A, row, k * nn, Rk * deA);
    }
    add_left_block(A, row, k * nn, Ck * eA);
    if (has_pole) vec_into(b, row, -(Rk * eA));
    row += nn;
  }
  for (Cplx q : extra) {
    const Mat Rq = finv_res_at(q);
    const Mat eA = X.value(q);
    for (int j = 0; j < K; ++j)
      add_left_block(A, row, j * nn, Rq * eA / (q - f.poles[j]));
    vec_into(b, row, -(Rq * eA));
    row += nn;
  }

  Eigen::VectorXcd s;
  double cond;
  if (opt.use_svd) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(A,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    s = svd.solve(b);
    const auto& sv = svd.singularValues();
    cond = sv(0) / std::max(sv(sv.size() - 1), 1e-300);
  } else {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    s = qr.solve(b);
    const auto diag = qr.matrixR().diagonal().head(cols);
    double dmax = 0.0, dmin = std::numeric_limits<double>::infinity();
    for (long i = 0; i < cols; ++i) {
      dmax = std::max(dmax, std::abs(diag(i)));
      dmin = std::min(dmin, std::abs(diag(i)));
    }
    cond = dmax / std::max(dmin, 1e-300);
  }
  if (!std::isfinite(cond) || cond > opt.condition_cutoff)
    throw FactorizationSingular("residue system condition " +
                                std::to_string(cond));

  FactorizationPoint pt;
  pt.m.n = n;
  pt.m.poles = f.poles;
  for (int k = 0; k < K; ++k) pt.m.residues.push_back(unvec(s, k * nn, n));
  pt.condition = cond;
  pt.solve_residual = (A * s - b).norm() / std::max(1.0, b.norm());
  return pt;
}

Mat eval_plus_factor(const RationalLoop& finv, const VacuumExponent& X,
                     const FactorizationPoint& pt, Cplx lambda) {
  return finv.eval(lambda) * X.value(lambda) * pt.m.eval(lambda);
}

double entirety_residual(const RationalLoop& finv, const VacuumExponent& X,
                         const FactorizationPoint& pt, int contour_points) {
  double worst = 0.0;
  const auto& ps = pt.m.poles;
  for (size_t k = 0; k < ps.size(); ++k) {
    double sep = std::abs(ps[k]);
    for (size_t j = 0; j < ps.size(); ++j)
      if (j != k) sep = std::min(sep, std::abs(ps[k] - ps[j]));
    const double rho = 0.25 * sep;
    Mat res1 = Mat::Zero(pt.m.n, pt.m.n), res2 = res1;
    double scale = 0.0;
    for (int mth = 0; mth < contour_points; ++mth) {
      const double th = 2.0 * M_PI * mth / contour_points;
      const Cplx e(std::cos(th), std::sin(th));
      const Mat E = eval_plus_factor(finv, X, pt, ps[k] + rho * e);
      scale = std::max(scale, E.norm());
      res1 += (rho / contour_points) * e * E;
      res2 += (rho * rho / contour_points) * e * e * E;
    }
    worst = std::max(worst,
                     std::max(res1.norm(), res2.norm()) / std::max(1.0, scale));
  }
  return worst;
}

double product_identity_residual(const RationalLoop& f,
                                 const RationalLoop& finv,
                                 const VacuumExponent& X,
                                 const FactorizationPoint& pt,
                                 int contour_points) {
  double pmax = 0.0;
  for (Cplx p : f.poles) pmax = std::max(pmax, std::abs(p));
  const double R = std::max(2.0, 1.7 * pmax);
  double worst = 0.0;
  for (int mth = 0; mth < contour_points; ++mth) {
    const double th = 2.0 * M_PI * (mth + 0.5) / contour_points;
    const Cplx lam = R * Cplx(std::cos(th), std::sin(th));
    const Mat lhs = finv.eval(lam) * X.value(lam);
    const Mat rhs =
        eval_plus_factor(finv, X, pt, lam) * pt.m.eval(lam).inverse();
    worst = std::max(worst, dist(lhs, rhs) / std::max(1.0, lhs.norm()));
  }
  return worst;
}

std::vector<Mat> q_expand(const FactorizationPoint& pt, const Mat& c, int N) {
  const int n = pt.m.n;
  const auto M = pt.m.series_at_infinity(N);
  std::vector<Mat> W(N + 1, Mat::Zero(n, n));
  W[0] = Mat::Identity(n, n);
  for (int d = 1; d <= N; ++d)
    for (int u = 1; u <= d; ++u) W[d] -= M[u] * W[d - u];
  std::vector<Mat> Q(N + 1, Mat::Zero(n, n));
  for (int d = 0; d <= N; ++d)
    for (int u = 0; u <= d; ++u) Q[d] += W[u] * c * M[d - u];
  return Q;
}

double q_commutation_residual(const FactorizationPoint& pt, const Mat& c1,
                              const Mat& c2, int depth) {
  const auto A = q_expand(pt, c1, depth);
  const auto B = q_expand(pt, c2, depth);
  double worst = 0.0;
  for (int d = 0; d <= depth; ++d) {
    Mat C = Mat::Zero(pt.m.n, pt.m.n);
    for (int u = 0; u <= d; ++u) C += A[u] * B[d - u] - B[u] * A[d - u];
    worst = std::max(worst, C.norm());
  }
  return worst;
}

// ---- grid-level driver ------------------------------------------------------

VacuumExponent DressedGrid::exponent_at(long node) const {
  VacuumExponent X;
  X.pair = &pair;
  X.x = grid.coords(node);
  X.flows = flows;
  return X;
}

Mat DressedGrid::E_raw(long node, Cplx lambda) const {
  return eval_plus_factor(finv, exponent_at(node), points[node], lambda);
}

FrameField DressedGrid::frame(Cplx lambda) const {
  FrameField F;
  F.grid = grid;
  F.lambda = lambda;
  F.n = pair.n;
  const long origin = grid.index(grid.origin_index());
  const Mat E0inv = E_raw(origin, lambda).inverse();
  F.E.resize(grid.num_nodes());
  for (long i = 0; i < grid.num_nodes(); ++i) F.E[i] = E0inv * E_raw(i, lambda);
  F.E[origin] = Mat::Identity(pair.n, pair.n);
  return F;
}

DressedGrid dress_grid(const SymmetricPair& p, const Grid& g,
                       const RationalLoop& f, std::vector<FlowTerm> flows,
                       const DressOptions& opt) {
  if (!f.is_identity()) validate_loop_poles(f);
  for (const auto& fl : flows) {
    if (fl.j <= 1 || fl.j % 2 == 0)
      throw ConfigError("flow degree must be odd and > 1");
    if (membership_residual(p.A, fl.b) > kTolSpace * (1.0 + fl.b.norm()))
      throw WrongValueSpace("flow direction b is not in A");
  }
  DressedGrid d;
  d.pair = p;
  d.grid = g;
  d.f = f;
  d.finv = f.is_identity() ? RationalLoop::identity(p.n)
                           : f.inverse_by_reality(p);
  d.flows = std::move(flows);
  d.points.resize(g.num_nodes());
  for (long i = 0; i < g.num_nodes(); ++i) {
    VacuumExponent X;
    X.pair = &d.pair;
    X.x = g.coords(i);
    X.flows = d.flows;
    try {
      d.points[i] = birkhoff_factor(d.f, d.finv, X, opt.birkhoff);
      d.max_condition = std::max(d.max_condition, d.points[i].condition);
      d.max_solve_residual =
          std::max(d.max_solve_residual, d.points[i].solve_residual);
    } catch (const FactorizationSingular&) {
      if (opt.strict) throw;
      d.points[i].m = RationalLoop::identity(p.n);
      d.points[i].condition = std::numeric_limits<double>::infinity();
      d.holes.push_back(i);
    }
  }
  return d;
}

GridField extract_solution(const DressedGrid& d) {
  GridField v = make_field(d.grid, d.pair.n, ValueSpace::U1perpA);
  for (long i = 0; i < d.grid.num_nodes(); ++i) {
    const Mat m1 = d.points[i].m_minus1();
    const double res = membership_residual(d.pair.U1, m1);
    if (res > kTolSpace * (1.0 + m1.norm()))
      throw SpaceViolation("m_-1 leaves U1 at node " + std::to_string(i) +
                           " (residual " + std::to_string(res) + ")");
    v.at(i) = project(d.pair, m1, d.pair.U1perpA);
  }
  return v;
}

GridField QSequence::level(int k, int n_mat) const {
  GridField f;
  f.grid = grid;
  f.n = n_mat;
  f.space = ValueSpace::U;
  f.v = Q[k];
  return f;
}

QSequence q_expand_grid(const DressedGrid& d, const Mat& c, int N) {
  QSequence q;
  q.c = c;
  q.depth = N;
  q.grid = d.grid;
  q.Q.assign(N + 1, std::vector<Mat>(d.grid.num_nodes()));
  for (long i = 0; i < d.grid.num_nodes(); ++i) {
    const auto Qi = q_expand(d.points[i], c, N);
    for (int k = 0; k <= N; ++k) q.Q[k][i] = Qi[k];
  }
  return q;
}

double q_parity_residual(const QSequence& q, const SymmetricPair& p) {
  double worst = 0.0;
  // sigma(m(-lambda)) = m(lambda) and sigma(c) = -c force
  // sigma(Q_n) = (-1)^{n+1} Q_n (Q_0 = c is sigma-antifixed).
  for (int k = 0; k <= q.depth; ++k) {
    const double sign = (k % 2 == 0) ? -1.0 : 1.0;
    for (const Mat& Q : q.Q[k])
      worst = std::max(worst, dist(p.sigma.apply(Q), sign * Q));
  }
  return worst;
}

FrameEquationReport frame_equation_check(const DressedGrid& d,
                                         const GridField& v,
                                         const std::vector<Cplx>& lambdas) {
  if (!d.holes.empty())
    throw EvaluationFailure("frame equation check requires a hole-free grid");
  FrameEquationReport rep;
  const int r = d.grid.r;
  for (Cplx lam : lambdas) {
    const FrameField F = d.frame(lam);
    GridField Ef;
    Ef.grid = d.grid;
    Ef.n = d.pair.n;
    Ef.space = ValueSpace::Group;
    Ef.v = F.E;
    for (int axis = 0; axis < r; ++axis) {
      const GridField dE = deriv(Ef, axis);
      for (long i = 0; i < d.grid.num_nodes(); ++i) {
        const Mat rhs = d.pair.a[axis] * lam + bracket(d.pair.a[axis], v.at(i));
        const Mat lhs = Ef.at(i).partialPivLu().solve(dE.at(i));
        rep.x_residual = std::max(rep.x_residual, dist(lhs, rhs));
      }
    }
  }
  return rep;
}

}  // namespace cfw
