#include "cfw/lax.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cfw {

Grid Grid::make_uniform(int r, double half_extent, int nodes_per_axis) {
  Grid g;
  g.r = r;
  g.xmin.assign(r, -half_extent);
  g.xmax.assign(r, half_extent);
  g.N.assign(r, nodes_per_axis);
  for (int k = 0; k < r; ++k) {
    if (nodes_per_axis % 2 == 0 || nodes_per_axis < 9)
      throw GridTooSmall("grid needs odd N >= 9 per axis");
  }
  return g;
}

long Grid::num_nodes() const {
  long t = 1;
  for (int k = 0; k < r; ++k) t *= N[k];
  return t;
}

long Grid::index(const std::vector<int>& idx) const {
  long f = 0;
  for (int k = 0; k < r; ++k) f = f * N[k] + idx[k];
  return f;
}

std::vector<int> Grid::multi_index(long flat) const {
  std::vector<int> idx(r);
  for (int k = r - 1; k >= 0; --k) {
    idx[k] = int(flat % N[k]);
    flat /= N[k];
  }
  return idx;
}

std::vector<double> Grid::coords(long flat) const {
  auto idx = multi_index(flat);
  std::vector<double> x(r);
  for (int k = 0; k < r; ++k) x[k] = coord(k, idx[k]);
  return x;
}

std::vector<int> Grid::origin_index() const {
  std::vector<int> idx(r);
  for (int k = 0; k < r; ++k) {
    double s = -xmin[k] / h(k);
    idx[k] = int(std::lround(s));
    if (std::abs(s - idx[k]) > 1e-9)
      throw GridTooSmall("origin is not a grid node");
  }
  return idx;
}

bool Grid::same(const Grid& o) const {
  return r == o.r && N == o.N && xmin == o.xmin && xmax == o.xmax;
}

GridField make_field(const Grid& g, int n, ValueSpace space) {
  GridField f;
  f.grid = g;
  f.n = n;
  f.space = space;
  f.v.assign(g.num_nodes(), Mat::Zero(n, n));
  return f;
}

double max_norm(const GridField& f) {
  double m = 0.0;
  for (const auto& x : f.v) m = std::max(m, x.norm());
  return m;
}

double space_residual(const GridField& f, const SymmetricPair& p) {
  const Subspace* S = nullptr;
  switch (f.space) {
    case ValueSpace::U: S = &p.U; break;
    case ValueSpace::U0: S = &p.U0; break;
    case ValueSpace::U1: S = &p.U1; break;
    case ValueSpace::U1perpA: S = &p.U1perpA; break;
    case ValueSpace::Group: {
      double m = 0.0;
      for (const auto& g : f.v) m = std::max(m, std::abs(g.determinant() - 1.0));
      return m;
    }
    case ValueSpace::None: return 0.0;
  }
  double m = 0.0;
  for (const auto& x : f.v) m = std::max(m, membership_residual(*S, x));
  return m;
}

static long stride_of(const Grid& g, int axis) {
  long s = 1;
  for (int k = axis + 1; k < g.r; ++k) s *= g.N[k];
  return s;
}

// 4th-order first derivative coefficients for offset patterns.
GridField deriv(const GridField& f, int axis) {
  const Grid& g = f.grid;
  const int Nk = g.N[axis];
  if (Nk < 5) throw GridTooSmall("deriv: axis too short for 4th-order stencil");
  const double h = g.h(axis);
  const long st = stride_of(g, axis);
  GridField out = make_field(g, f.n, ValueSpace::None);
  const long total = g.num_nodes();
  for (long fl = 0; fl < total; ++fl) {
    int i = g.multi_index(fl)[axis];
    Mat d;
    auto at = [&](int off) -> const Mat& { return f.v[fl + long(off) * st]; };
    if (i >= 2 && i <= Nk - 3) {
      d = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
    } else if (i == 0) {
      d = (-25.0 * at(0) + 48.0 * at(1) - 36.0 * at(2) + 16.0 * at(3) -
           3.0 * at(4)) / (12.0 * h);
    } else if (i == 1) {
      d = (-3.0 * at(-1) - 10.0 * at(0) + 18.0 * at(1) - 6.0 * at(2) + at(3)) /
          (12.0 * h);
    } else if (i == Nk - 2) {
      d = (3.0 * at(1) + 10.0 * at(0) - 18.0 * at(-1) + 6.0 * at(-2) - at(-3)) /
          (12.0 * h);
    } else {  // i == Nk-1
      d = (25.0 * at(0) - 48.0 * at(-1) + 36.0 * at(-2) - 16.0 * at(-3) +
           3.0 * at(-4)) / (12.0 * h);
    }
    out.v[fl] = d;
  }
  return out;
}

CurvatureReport curvature(const ConnectionField& C) {
  const Grid& g = C.grid;
  if (g.r < 2) throw GridTooSmall("curvature needs r >= 2");
  CurvatureReport rep;
  for (int i = 0; i < g.r; ++i) {
    for (int j = i + 1; j < g.r; ++j) {
      GridField dAj = deriv(C.coef[j], i);
      GridField dAi = deriv(C.coef[i], j);
      GridField F = make_field(g, C.n, ValueSpace::None);
      for (long fl = 0; fl < g.num_nodes(); ++fl) {
        F.v[fl] = dAj.v[fl] - dAi.v[fl] +
                  bracket(C.coef[i].v[fl], C.coef[j].v[fl]);
        rep.max = std::max(rep.max, F.v[fl].norm());
      }
      rep.pairs.emplace_back(i, j);
      rep.F.push_back(std::move(F));
    }
  }
  return rep;
}

ResidualReport uu0_residual(const GridField& v, const SymmetricPair& p) {
  if (v.space != ValueSpace::U1perpA)
    throw WrongValueSpace("uu0_residual: v must be tagged U1 ∩ A^perp");
  const Grid& g = v.grid;
  const int r = p.rank();
  if (g.r != r) throw GridMismatch("grid rank != pair rank");
  std::vector<GridField> dv;
  for (int k = 0; k < r; ++k) dv.push_back(deriv(v, k));
  ResidualReport rep;
  for (int i = 0; i < r; ++i) {
    for (int j = i + 1; j < r; ++j) {
      GridField R = make_field(g, v.n, ValueSpace::None);
      for (long fl = 0; fl < g.num_nodes(); ++fl) {
        R.v[fl] = bracket(p.a[i], dv[j].v[fl]) - bracket(p.a[j], dv[i].v[fl]) -
                  bracket(bracket(p.a[i], v.v[fl]), bracket(p.a[j], v.v[fl]));
        rep.max = std::max(rep.max, R.v[fl].norm());
      }
      rep.fields.push_back(std::move(R));
    }
  }
  return rep;
}

ConnectionField lax_theta(const GridField& v, Cplx lambda,
                          const SymmetricPair& p) {
  if (v.space != ValueSpace::U1perpA)
    throw WrongValueSpace("lax_theta: v must be tagged U1 ∩ A^perp");
  ConnectionField C;
  C.grid = v.grid;
  C.n = v.n;
  for (int i = 0; i < p.rank(); ++i) {
    GridField c = make_field(v.grid, v.n, ValueSpace::None);
    for (long fl = 0; fl < v.grid.num_nodes(); ++fl)
      c.v[fl] = lambda * p.a[i] + bracket(p.a[i], v.v[fl]);
    C.coef.push_back(std::move(c));
  }
  return C;
}

ConnectionField curvedflat_omega(const ConnectionField& A, Cplx lambda) {
  ConnectionField C;
  C.grid = A.grid;
  C.n = A.n;
  for (const auto& a : A.coef) {
    GridField c = a;
    for (auto& m : c.v) m *= lambda;
    C.coef.push_back(std::move(c));
  }
  return C;
}

Mat group_tau(const SymmetricPair& p, const Mat& g) { return p.tau.group(g); }

Mat group_sigma(const SymmetricPair& p, const Mat& g) { return p.sigma.group(g); }

Mat group_sigma_ext(const SymmetricPair& p, const Mat& g) {
  // Complex-linear extension of sigma from U to G: entrywise conjugation on
  // the real form becomes inverse-transpose on the complexification.
  Mat Y = g;
  if (p.sigma.conjugates) Y = Y.transpose().inverse().eval();
  const Mat& J = p.sigma.J;
  if (J.size() > 0 && !J.isIdentity(0.0)) Y = J * Y * J.inverse();
  return Y;
}

double reality_residual(const std::function<Mat(Cplx)>& F,
                        const std::vector<Cplx>& lambda_samples,
                        const SymmetricPair& p) {
  double m = 0.0;
  for (Cplx l : lambda_samples) {
    Mat Fl = F(l);
    m = std::max(m, (group_tau(p, F(std::conj(l))) - Fl).norm());
    m = std::max(m, (group_sigma_ext(p, F(-l)) - Fl).norm());
  }
  return m;
}

// ---- parallel frame ---------------------------------------------------------

namespace {

// 5-point Lagrange interpolation of matrices along one axis line, at real
// node coordinate s (in index units).
Mat interp_line(const GridField& f, const std::vector<int>& base_idx, int axis,
                double s) {
  const Grid& g = f.grid;
  const int Nk = g.N[axis];
  int w = int(std::lround(s)) - 2;
  w = std::clamp(w, 0, Nk - 5);
  std::vector<int> idx = base_idx;
  Mat out = Mat::Zero(f.n, f.n);
  for (int a = 0; a < 5; ++a) {
    double L = 1.0;
    for (int b = 0; b < 5; ++b)
      if (b != a) L *= (s - (w + b)) / double(a - b);
    idx[axis] = w + a;
    out += L * f.v[f.grid.index(idx)];
  }
  return out;
}

struct StepContext {
  const GridField* v;
  const SymmetricPair* pair;
  Cplx lambda;
  int axis;
  std::vector<int> line_idx;  // indices on the other axes
  const FrameOptions* opt;
};

Mat coef_at(const StepContext& c, double s) {
  Mat vv = interp_line(*c.v, c.line_idx, c.axis, s);
  return c.lambda * c.pair->a[c.axis] + bracket(c.pair->a[c.axis], vv);
}

// One commutator-free 4th-order step over index interval [s0, s1] (signed).
Mat cf4_increment(const StepContext& c, double s0, double s1, int depth) {
  const double h_idx = s1 - s0;
  const double h = h_idx * c.v->grid.h(c.axis);
  const double g1 = 0.5 - std::sqrt(3.0) / 6.0, g2 = 0.5 + std::sqrt(3.0) / 6.0;
  Mat C1 = coef_at(c, s0 + g1 * h_idx);
  Mat C2 = coef_at(c, s0 + g2 * h_idx);
  Mat Om = 0.5 * h * (C1 + C2) +
           (std::sqrt(3.0) / 12.0) * h * h * bracket(C1, C2);
  if (Om.norm() > c.opt->max_step_norm) {
    if ((1 << depth) > c.opt->max_substeps)
      throw StepRejected("parallel_frame: step exponent too large");
    double mid = 0.5 * (s0 + s1);
    return cf4_increment(c, s0, mid, depth + 1) *
           cf4_increment(c, mid, s1, depth + 1);
  }
  return Om.exp();
}

// Fill the frame by staircase integration in the given axis order.
std::vector<Mat> integrate_frames(const GridField& v, Cplx lambda,
                                  const SymmetricPair& p,
                                  const std::vector<int>& axis_order,
                                  const FrameOptions& opt) {
  const Grid& g = v.grid;
  std::vector<Mat> E(g.num_nodes());
  std::vector<char> done(g.num_nodes(), 0);
  auto origin = g.origin_index();
  E[g.index(origin)] = Mat::Identity(v.n, v.n);
  done[g.index(origin)] = 1;

  for (int axis : axis_order) {
    // For every already-filled node, sweep the line through it along `axis`.
    std::vector<long> seeds;
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      if (done[fl]) seeds.push_back(fl);
    for (long seed : seeds) {
      auto idx = g.multi_index(seed);
      StepContext c{&v, &p, lambda, axis, idx, &opt};
      const long st = stride_of(g, axis);
      for (int dir : {+1, -1}) {
        long fl = seed;
        int i = idx[axis];
        while ((dir > 0 && i + 1 < g.N[axis]) || (dir < 0 && i > 0)) {
          Mat inc = cf4_increment(c, double(i), double(i + dir), 0);
          long nfl = fl + dir * st;
          E[nfl] = E[fl] * inc;
          done[nfl] = 1;
          fl = nfl;
          i += dir;
        }
      }
    }
  }
  return E;
}

}  // namespace

FrameReport parallel_frame(const GridField& v, Cplx lambda,
                           const SymmetricPair& p, const FrameOptions& opt) {
  const Grid& g = v.grid;
  std::vector<int> fwd(g.r), rev(g.r);
  std::iota(fwd.begin(), fwd.end(), 0);
  rev = fwd;
  std::reverse(rev.begin(), rev.end());

  FrameReport rep;
  rep.frame.grid = g;
  rep.frame.lambda = lambda;
  rep.frame.n = v.n;
  rep.frame.E = integrate_frames(v, lambda, p, fwd, opt);
  auto E2 = integrate_frames(v, lambda, p, rev, opt);
  for (long fl = 0; fl < g.num_nodes(); ++fl)
    rep.path_independence =
        std::max(rep.path_independence, (rep.frame.E[fl] - E2[fl]).norm());

  GridField Ef = make_field(g, v.n, ValueSpace::None);
  Ef.v = rep.frame.E;
  for (int k = 0; k < g.r; ++k) {
    GridField dE = deriv(Ef, k);
    for (long fl = 0; fl < g.num_nodes(); ++fl) {
      Mat C = lambda * p.a[k] + bracket(p.a[k], v.v[fl]);
      rep.log_derivative = std::max(
          rep.log_derivative,
          (rep.frame.E[fl].partialPivLu().solve(dE.v[fl]) - C).norm());
    }
  }
  return rep;
}

ConnectionField gauge(const GridField& g, const ConnectionField& C) {
  if (!g.grid.same(C.grid)) throw GridMismatch("gauge: grids differ");
  ConnectionField out;
  out.grid = C.grid;
  out.n = C.n;
  for (int k = 0; k < C.grid.r; ++k) {
    GridField dg = deriv(g, k);
    GridField c = make_field(C.grid, C.n, ValueSpace::None);
    for (long fl = 0; fl < C.grid.num_nodes(); ++fl) {
      Eigen::PartialPivLU<Mat> lu(g.v[fl]);
      if (std::abs(lu.determinant()) < 1e-12)
        throw SingularFrame("gauge: g not invertible at a node");
      Mat ginv = lu.inverse();
      c.v[fl] = g.v[fl] * C.coef[k].v[fl] * ginv - dg.v[fl] * ginv;
    }
    out.coef.push_back(std::move(c));
  }
  return out;
}

GridField curved_flat(const FrameField& E_plus, const FrameField& E_minus) {
  if (!E_plus.grid.same(E_minus.grid)) throw GridMismatch("curved_flat");
  GridField psi = make_field(E_plus.grid, E_plus.n, ValueSpace::Group);
  for (long fl = 0; fl < E_plus.grid.num_nodes(); ++fl)
    psi.v[fl] = E_plus.E[fl] * E_minus.E[fl].inverse();
  return psi;
}

double cartan_embedding_residual(const GridField& psi, const SymmetricPair& p) {
  double m = 0.0;
  Mat I = Mat::Identity(psi.n, psi.n);
  for (const auto& g : psi.v)
    m = std::max(m, (group_sigma(p, g) * g - I).norm());
  return m;
}

GridField cartan_lift(const FrameField& E_one, const FrameField& E_zero) {
  if (!E_one.grid.same(E_zero.grid)) throw GridMismatch("cartan_lift");
  GridField f = make_field(E_one.grid, E_one.n, ValueSpace::Group);
  for (long fl = 0; fl < E_one.grid.num_nodes(); ++fl)
    f.v[fl] = E_one.E[fl] * E_zero.E[fl].inverse();
  return f;
}

CartanLiftReport cartan_lift_residuals(const GridField& f, const GridField& g,
                                       const GridField& v,
                                       const SymmetricPair& p) {
  CartanLiftReport rep;
  const Grid& gr = f.grid;
  std::vector<GridField> W;  // f^-1 f_xi
  for (int k = 0; k < gr.r; ++k) {
    GridField df = deriv(f, k);
    GridField w = make_field(gr, f.n, ValueSpace::None);
    for (long fl = 0; fl < gr.num_nodes(); ++fl)
      w.v[fl] = f.v[fl].partialPivLu().solve(df.v[fl]);
    W.push_back(std::move(w));
  }
  for (int k = 0; k < gr.r; ++k)
    for (long fl = 0; fl < gr.num_nodes(); ++fl)
      rep.u1_membership =
          std::max(rep.u1_membership, membership_residual(p.U1, W[k].v[fl]));
  for (int i = 0; i < gr.r; ++i)
    for (int j = i + 1; j < gr.r; ++j)
      for (long fl = 0; fl < gr.num_nodes(); ++fl)
        rep.commutation =
            std::max(rep.commutation, bracket(W[i].v[fl], W[j].v[fl]).norm());
  for (int k = 0; k < gr.r; ++k) {
    GridField dg = deriv(g, k);
    for (long fl = 0; fl < gr.num_nodes(); ++fl) {
      Mat lhs = g.v[fl].partialPivLu().solve(dg.v[fl]);
      rep.g_equation = std::max(
          rep.g_equation, (lhs - bracket(p.a[k], v.v[fl])).norm());
    }
  }
  return rep;
}

GridField flat_abelian(const FrameField& E_pd, const FrameField& E_md,
                       const FrameField& E_pd2, const FrameField& E_md2,
                       const FrameField& E_zero, double delta) {
  const Grid& g = E_zero.grid;
  GridField Y = make_field(g, E_zero.n, ValueSpace::U1);
  for (long fl = 0; fl < g.num_nodes(); ++fl) {
    Mat inv0 = E_zero.E[fl].inverse();
    Mat D = (E_pd.E[fl] - E_md.E[fl]) * inv0 / (2.0 * delta);
    Mat D2 = (E_pd2.E[fl] - E_md2.E[fl]) * inv0 / delta;  // step delta/2
    Y.v[fl] = (4.0 * D2 - D) / 3.0;
  }
  return Y;
}

FlatAbelianReport flat_abelian_residuals(const GridField& Y,
                                         const SymmetricPair& p) {
  FlatAbelianReport rep;
  const Grid& g = Y.grid;
  for (const auto& y : Y.v)
    rep.u1_membership = std::max(rep.u1_membership, membership_residual(p.U1, y));
  std::vector<GridField> dY;
  for (int k = 0; k < g.r; ++k) dY.push_back(deriv(Y, k));
  long o = g.index(g.origin_index());
  for (int i = 0; i < g.r; ++i) {
    for (int j = i + 1; j < g.r; ++j)
      for (long fl = 0; fl < g.num_nodes(); ++fl)
        rep.bracket = std::max(rep.bracket,
                               bracket(dY[i].v[fl], dY[j].v[fl]).norm());
    for (int j = i; j < g.r; ++j) {
      double base = inner(p, dY[i].v[o], dY[j].v[o]);
      for (long fl = 0; fl < g.num_nodes(); ++fl)
        rep.gram_drift = std::max(
            rep.gram_drift,
            std::abs(inner(p, dY[i].v[fl], dY[j].v[fl]) - base));
    }
  }
  return rep;
}

}  // namespace cfw
