#include "cfw/conservation.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace cfw {

namespace {

GridField scalar_field(const Grid& g) { return make_field(g, 1, ValueSpace::None); }

double smax(const GridField& f) {
  double m = 0.0;
  for (const auto& x : f.v) m = std::max(m, std::abs(x(0, 0)));
  return m;
}

// inner(Q_level, w) as a scalar field.
GridField density_field(const QSequence& q, int level, const Mat& w,
                        const SymmetricPair& p) {
  GridField f = scalar_field(q.grid);
  for (long i = 0; i < q.grid.num_nodes(); ++i)
    f.v[i](0, 0) = inner(p, q.Q[level][i], w);
  return f;
}

// 5-point Lagrange interpolation along an x_1 line at fractional index s.
Mat interp_x1(const std::vector<Mat>& line, double s) {
  const int Nk = static_cast<int>(line.size());
  int w = int(std::lround(s)) - 2;
  w = std::clamp(w, 0, Nk - 5);
  Mat out = Mat::Zero(line[0].rows(), line[0].cols());
  for (int a = 0; a < 5; ++a) {
    double L = 1.0;
    for (int b = 0; b < 5; ++b)
      if (b != a) L *= (s - (w + b)) / double(a - b);
    out += L * line[w + a];
  }
  return out;
}

// 6th-order first derivative along axis 0 (7-point stencils).  The recursion
// differentiates its own output repeatedly, so closure error near the edges
// must sit one order below the 4th-order target to keep the final level clean.
GridField deriv6_x0(const GridField& f) {
  const Grid& g = f.grid;
  const int N0 = g.N[0];
  if (N0 < 7) throw GridTooSmall("deriv6_x0 needs >= 7 nodes per line");
  const double h = g.h(0);
  static const double e0[7] = {-49.0 / 20, 6.0, -15.0 / 2, 20.0 / 3,
                               -15.0 / 4,  6.0 / 5, -1.0 / 6};
  static const double e1[7] = {-1.0 / 6, -77.0 / 60, 5.0 / 2, -5.0 / 3,
                               5.0 / 6,  -1.0 / 4,   1.0 / 30};
  static const double e2[7] = {1.0 / 30, -2.0 / 5, -7.0 / 12, 4.0 / 3,
                               -1.0 / 2, 2.0 / 15, -1.0 / 60};
  GridField out = make_field(g, f.n, ValueSpace::None);
  for (long fl = 0; fl < g.num_nodes(); ++fl) {
    auto idx = g.multi_index(fl);
    const int i0 = idx[0];
    auto at = [&](int i) -> const Mat& {
      auto jdx = idx;
      jdx[0] = i;
      return f.v[g.index(jdx)];
    };
    Mat r = Mat::Zero(f.v[fl].rows(), f.v[fl].cols());
    if (i0 >= 3 && i0 <= N0 - 4) {
      r = (-at(i0 - 3) + 9.0 * at(i0 - 2) - 45.0 * at(i0 - 1) +
           45.0 * at(i0 + 1) - 9.0 * at(i0 + 2) + at(i0 + 3)) / 60.0;
    } else if (i0 <= 2) {
      const double* cst = (i0 == 0) ? e0 : (i0 == 1) ? e1 : e2;
      for (int k = 0; k < 7; ++k) r += cst[k] * at(k);
    } else {
      const int m0 = N0 - 1 - i0;
      const double* cst = (m0 == 0) ? e0 : (m0 == 1) ? e1 : e2;
      for (int k = 0; k < 7; ++k) r -= cst[k] * at(N0 - 1 - k);
    }
    out.v[fl] = r / h;
  }
  return out;
}

}  // namespace

RecursionReport q_recursion_residual(const GridField& v, const QSequence& q,
                                     const SymmetricPair& p) {
  if (!v.grid.same(q.grid)) throw GridMismatch("q_recursion_residual");
  RecursionReport rep;
  const int r = p.rank();
  for (int n = 0; n < q.depth; ++n) {
    double lvl = 0.0;
    GridField Qn = q.level(n, p.n);
    for (int i = 0; i < r; ++i) {
      GridField dQ = deriv(Qn, i);
      for (long fl = 0; fl < q.grid.num_nodes(); ++fl) {
        const Mat ui = bracket(p.a[i], v.v[fl]);
        const Mat R = dQ.v[fl] + bracket(ui, q.Q[n][fl]) -
                      bracket(q.Q[n + 1][fl], p.a[i]);
        lvl = std::max(lvl, R.norm());
      }
    }
    rep.per_level.push_back(lvl);
    rep.max = std::max(rep.max, lvl);
  }
  return rep;
}

QSequence q_generate(const GridField& v, const Mat& c, int N,
                     const SymmetricPair& p, const QSequence* edge_source) {
  if (N > kMaxSeriesDepth)
    throw DepthOverflow("q_generate depth " + std::to_string(N));
  const Grid& g = v.grid;
  if (edge_source && !edge_source->grid.same(g))
    throw GridMismatch("q_generate: edge source grid differs");
  const int d = p.U.dim();
  const Mat& a1 = p.a[0];

  // ad(a_1) on the basis of U, with its kernel (the centralizer of a_1).
  RMat Ad1(d, d);
  for (int jcol = 0; jcol < d; ++jcol)
    Ad1.col(jcol) = coordinates(p.U, bracket(a1, p.U.basis[jcol]));
  Eigen::JacobiSVD<RMat> svd(Ad1, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Subspace ker = centralizer(p, a1, p.U);
  const double scut = kTolRank * svd.singularValues()(0);
  int rank = 0;
  for (int i = 0; i < d; ++i)
    if (svd.singularValues()(i) > scut) ++rank;
  if (rank != d - ker.dim())
    throw NonRegularBasis("ad(a_1) rank " + std::to_string(rank) +
                          " inconsistent with its centralizer");

  auto ad1_pinv = [&](const Mat& W) -> Mat {
    const RVec wc = coordinates(p.U, W);
    RVec y = svd.matrixU().transpose() * wc;
    for (int i = 0; i < d; ++i)
      y(i) = (svd.singularValues()(i) > scut) ? y(i) / svd.singularValues()(i)
                                              : 0.0;
    const RVec qc = svd.matrixV() * y;
    Mat Q = Mat::Zero(p.n, p.n);
    for (int i = 0; i < d; ++i) Q += qc(i) * p.U.basis[i];
    return Q;
  };

  // u_1 = [a_1, v] per node.
  std::vector<Mat> u1(g.num_nodes());
  for (long fl = 0; fl < g.num_nodes(); ++fl)
    u1[fl] = bracket(a1, v.v[fl]);

  QSequence out;
  out.c = c;
  out.depth = N;
  out.grid = g;
  out.Q.assign(N + 1, std::vector<Mat>(g.num_nodes()));
  for (long fl = 0; fl < g.num_nodes(); ++fl) out.Q[0][fl] = c;

  const int N0 = g.N[0];
  const double h0 = g.h(0);
  for (int n = 0; n < N; ++n) {
    // Off-kernel part from ad(a_1)^-1 of the recursion's right side.
    GridField Qn = out.level(n, p.n);
    GridField dQ = deriv6_x0(Qn);
    std::vector<Mat> Qperp(g.num_nodes());
    for (long fl = 0; fl < g.num_nodes(); ++fl) {
      const Mat W = dQ.v[fl] + bracket(u1[fl], out.Q[n][fl]);
      Qperp[fl] = ad1_pinv(-W);  // [a_1, Q_{n+1}] = -W on the image part
    }
    // Kernel part: integrate kappa_{x_1} = P_ker([Q_perp + kappa, u_1])
    // along every x_1 line from the left edge.
    const long lines = g.num_nodes() / N0;
    for (long ln = 0; ln < lines; ++ln) {
      // Decode the fixed indices of this x_1 line.
      std::vector<int> idx(g.r, 0);
      long rest = ln;
      for (int k = g.r - 1; k >= 1; --k) {
        idx[k] = int(rest % g.N[k]);
        rest /= g.N[k];
      }
      std::vector<long> node(N0);
      for (int i0 = 0; i0 < N0; ++i0) {
        idx[0] = i0;
        node[i0] = g.index(idx);
      }
      std::vector<Mat> qline(N0), uline(N0);
      for (int i0 = 0; i0 < N0; ++i0) {
        qline[i0] = Qperp[node[i0]];
        uline[i0] = u1[node[i0]];
      }
      Mat kappa = Mat::Zero(p.n, p.n);
      if (edge_source)
        kappa = project(p, edge_source->Q[n + 1][node[0]], ker);
      out.Q[n + 1][node[0]] = Qperp[node[0]] + kappa;
      auto rhs = [&](double s, const Mat& k) -> Mat {
        const Mat q = interp_x1(qline, s);
        const Mat u = interp_x1(uline, s);
        return h0 * project(p, bracket(q + k, u), ker);
      };
      for (int i0 = 0; i0 + 1 < N0; ++i0) {
        const double s = i0;
        const Mat k1 = rhs(s, kappa);
        const Mat k2 = rhs(s + 0.5, kappa + 0.5 * k1);
        const Mat k3 = rhs(s + 0.5, kappa + 0.5 * k2);
        const Mat k4 = rhs(s + 1.0, kappa + k3);
        kappa += (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        out.Q[n + 1][node[i0 + 1]] = Qperp[node[i0 + 1]] + kappa;
      }
    }
  }
  return out;
}

ScalarFieldReport closedness_residual(const QSequence& q, int n,
                                      const SymmetricPair& p) {
  const Grid& g = q.grid;
  std::vector<GridField> phi;
  for (int i = 0; i < g.r; ++i) phi.push_back(density_field(q, n, p.a[i], p));
  ScalarFieldReport rep;
  for (int i = 0; i < g.r; ++i) {
    for (int j = i + 1; j < g.r; ++j) {
      GridField di = deriv(phi[i], j);
      GridField dj = deriv(phi[j], i);
      GridField R = scalar_field(g);
      for (long fl = 0; fl < g.num_nodes(); ++fl)
        R.v[fl] = di.v[fl] - dj.v[fl];
      rep.max = std::max(rep.max, smax(R));
      rep.fields.push_back(std::move(R));
    }
  }
  return rep;
}

ConservationForm eds_conservation_form(const QSequence& q, int n, int i, int j,
                                       const SymmetricPair& p) {
  const Grid& g = q.grid;
  const int r = g.r;
  if (r > 3) throw UnsupportedRank("eds_conservation_form supports r <= 3");
  if (i == j || i < 0 || j < 0 || i >= r || j >= r)
    throw DimensionMismatch("eds_conservation_form: bad axis pair");
  std::vector<GridField> phi;
  for (int l = 0; l < r; ++l) phi.push_back(density_field(q, n, p.a[l], p));
  ConservationForm form;
  form.degree = r - 1;
  if (r == 2) {
    // *(dx_i ^ dx_j) = ±1; psi = ±phi.
    const double sgn = (i < j) ? 1.0 : -1.0;
    for (int l = 0; l < 2; ++l) {
      GridField c = phi[l];
      for (auto& m : c.v) m *= sgn;
      form.index_sets.push_back({l});
      form.comp.push_back(std::move(c));
    }
    GridField d0 = deriv(form.comp[1], 0);
    GridField d1 = deriv(form.comp[0], 1);
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      form.d_residual =
          std::max(form.d_residual, std::abs((d0.v[fl] - d1.v[fl])(0, 0)));
    return form;
  }
  // r == 3: *(dx_i ^ dx_j) = eps_{ijk} dx_k.
  int k = 3 - i - j;
  const double eps = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;  // parity of (i,j,k)
  // psi = eps * sum_{l != k} phi_l dx_l ^ dx_k; store on ordered pairs.
  std::vector<std::vector<double>> comp2(3, std::vector<double>());
  auto pair_slot = [&](int a, int b) {  // 0:(0,1) 1:(0,2) 2:(1,2)
    int lo = std::min(a, b), hi = std::max(a, b);
    if (lo == 0 && hi == 1) return 0;
    if (lo == 0 && hi == 2) return 1;
    return 2;
  };
  std::vector<GridField> psi(3, scalar_field(g));
  for (int l = 0; l < 3; ++l) {
    if (l == k) continue;
    const double sgn = eps * ((l < k) ? 1.0 : -1.0);
    GridField& target = psi[pair_slot(l, k)];
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      target.v[fl] += sgn * phi[l].v[fl];
  }
  form.index_sets = {{0, 1}, {0, 2}, {1, 2}};
  form.comp = psi;
  GridField d0 = deriv(form.comp[2], 0);  // d/dx0 psi_{12}
  GridField d1 = deriv(form.comp[1], 1);  // d/dx1 psi_{02}
  GridField d2 = deriv(form.comp[0], 2);  // d/dx2 psi_{01}
  for (long fl = 0; fl < g.num_nodes(); ++fl)
    form.d_residual = std::max(
        form.d_residual,
        std::abs((d0.v[fl] - d1.v[fl] + d2.v[fl])(0, 0)));
  return form;
}

double FlowFamily::dt() const {
  if (times.size() < 2) throw GridTooSmall("flow family needs >= 2 times");
  return times[1] - times[0];
}

FlowFamily make_flow_family(const SymmetricPair& p, const Grid& g,
                            const RationalLoop& f, const Mat& b, int j,
                            double t0, double t1, int slices,
                            const DressOptions& opt) {
  if (slices < 5) throw GridTooSmall("flow family needs >= 5 time samples");
  FlowFamily F;
  F.b = b;
  F.j = j;
  for (int m = 0; m < slices; ++m) {
    const double t = t0 + (t1 - t0) * m / (slices - 1);
    F.times.push_back(t);
    F.slices.push_back(dress_grid(p, g, f, {{b, j, t}}, opt));
    F.v.push_back(extract_solution(F.slices.back()));
  }
  return F;
}

std::vector<GridField> time_deriv(const std::vector<GridField>& f, double dt) {
  const int M = static_cast<int>(f.size());
  if (M < 5) throw GridTooSmall("time_deriv needs >= 5 samples");
  std::vector<GridField> out;
  for (int m = 0; m < M; ++m) {
    GridField d = make_field(f[0].grid, f[0].n, ValueSpace::None);
    auto at = [&](int off) -> const std::vector<Mat>& { return f[m + off].v; };
    for (long fl = 0; fl < f[0].grid.num_nodes(); ++fl) {
      Mat r;
      if (m >= 2 && m <= M - 3) {
        r = (at(-2)[fl] - 8.0 * at(-1)[fl] + 8.0 * at(1)[fl] - at(2)[fl]) /
            (12.0 * dt);
      } else if (m == 0) {
        r = (-25.0 * at(0)[fl] + 48.0 * at(1)[fl] - 36.0 * at(2)[fl] +
             16.0 * at(3)[fl] - 3.0 * at(4)[fl]) / (12.0 * dt);
      } else if (m == 1) {
        r = (-3.0 * at(-1)[fl] - 10.0 * at(0)[fl] + 18.0 * at(1)[fl] -
             6.0 * at(2)[fl] + at(3)[fl]) / (12.0 * dt);
      } else if (m == M - 2) {
        r = (3.0 * at(1)[fl] + 10.0 * at(0)[fl] - 18.0 * at(-1)[fl] +
             6.0 * at(-2)[fl] - at(-3)[fl]) / (12.0 * dt);
      } else {
        r = (25.0 * at(0)[fl] - 48.0 * at(-1)[fl] + 36.0 * at(-2)[fl] -
             16.0 * at(-3)[fl] + 3.0 * at(-4)[fl]) / (12.0 * dt);
      }
      d.v[fl] = r;
    }
    out.push_back(std::move(d));
  }
  return out;
}

FlowReport flow_residual(const FlowFamily& F) {
  const SymmetricPair& p = F.pair();
  const Grid& g = F.grid();
  FlowReport rep;
  const auto vt = time_deriv(F.v, F.dt());
  for (size_t m = 0; m < F.slices.size(); ++m) {
    QSequence qb = q_expand_grid(F.slices[m], F.b, F.j);
    GridField Qbj = qb.level(F.j, p.n);
    for (int i = 0; i < g.r; ++i) {
      GridField dQ = deriv(Qbj, i);
      for (long fl = 0; fl < g.num_nodes(); ++fl) {
        const Mat R = bracket(p.a[i], vt[m].v[fl]) - dQ.v[fl] -
                      bracket(bracket(p.a[i], F.v[m].v[fl]), Qbj.v[fl]);
        rep.t_residual = std::max(rep.t_residual, R.norm());
      }
    }
    rep.x_residual = std::max(rep.x_residual, uu0_residual(F.v[m], p).max);
  }
  return rep;
}

FluxReport flux_identity_residual(const FlowFamily& F, const Mat& c, int n,
                                  int axis) {
  const SymmetricPair& p = F.pair();
  const Grid& g = F.grid();
  const int j = F.j;
  FluxReport rep;
  std::vector<GridField> dens, flux;
  for (size_t m = 0; m < F.slices.size(); ++m) {
    QSequence qc = q_expand_grid(F.slices[m], c, n + j);
    QSequence qb = q_expand_grid(F.slices[m], F.b, j);
    dens.push_back(density_field(qc, n, p.a[axis], p));
    GridField G = scalar_field(g);
    for (long fl = 0; fl < g.num_nodes(); ++fl) {
      double s = 0.0;
      for (int l = 0; l < j; ++l)
        for (int ss = 1; ss <= j - l; ++ss)
          s += inner(p, qc.Q[n + l + ss - 1][fl], qb.Q[j - l - ss][fl]);
      G.v[fl](0, 0) = s;
    }
    flux.push_back(std::move(G));

    // Stepping identity with the s-inner / l-outer index convention.
    GridField lhs = scalar_field(g);
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      lhs.v[fl](0, 0) = inner(p, bracket(qc.Q[n][fl], qb.Q[j][fl]), p.a[axis]);
    GridField rhs = scalar_field(g);
    for (int ss = 1; ss <= j; ++ss) {
      GridField ip = scalar_field(g);
      for (long fl = 0; fl < g.num_nodes(); ++fl)
        ip.v[fl](0, 0) = inner(p, qc.Q[n + ss - 1][fl], qb.Q[j - ss][fl]);
      GridField dip = deriv(ip, axis);
      for (long fl = 0; fl < g.num_nodes(); ++fl) rhs.v[fl] += dip.v[fl];
    }
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      rep.stepping_residual = std::max(
          rep.stepping_residual, std::abs((lhs.v[fl] - rhs.v[fl])(0, 0)));

    // j = 1 base case: ([Q_{c,n}, Q_{b,1}], a_i) = ((Q_{c,n})_{x_i}, b).
    GridField Qn = qc.level(n, p.n);
    GridField dQn = deriv(Qn, axis);
    for (long fl = 0; fl < g.num_nodes(); ++fl) {
      const double l1 = inner(p, bracket(qc.Q[n][fl], qb.Q[1][fl]), p.a[axis]);
      const double r1 = inner(p, dQn.v[fl], F.b);
      rep.base_case_residual =
          std::max(rep.base_case_residual, std::abs(l1 - r1));
    }
  }
  const auto ddt = time_deriv(dens, F.dt());
  for (size_t m = 0; m < F.slices.size(); ++m) {
    GridField dG = deriv(flux[m], axis);
    for (long fl = 0; fl < g.num_nodes(); ++fl)
      rep.flux_residual = std::max(
          rep.flux_residual, std::abs((ddt[m].v[fl] - dG.v[fl])(0, 0)));
  }
  return rep;
}

ConservedReport conserved_quantity(const FlowFamily& F, const Mat& c, int n,
                                   int axis) {
  const SymmetricPair& p = F.pair();
  const Grid& g = F.grid();
  auto weight = [&](const std::vector<int>& idx) {
    double w = 1.0;
    for (int k = 0; k < g.r; ++k)
      w *= ((idx[k] == 0 || idx[k] == g.N[k] - 1) ? 0.5 : 1.0) * g.h(k);
    return w;
  };
  ConservedReport rep;
  double net_flux_max = 0.0;
  for (size_t m = 0; m < F.slices.size(); ++m) {
    QSequence qc = q_expand_grid(F.slices[m], c, n + F.j);
    QSequence qb = q_expand_grid(F.slices[m], F.b, F.j);
    double I = 0.0, net = 0.0;
    for (long fl = 0; fl < g.num_nodes(); ++fl) {
      const auto idx = g.multi_index(fl);
      const double d = inner(p, qc.Q[n][fl], p.a[axis]);
      I += weight(idx) * d;
      bool boundary = false;
      for (int k = 0; k < g.r; ++k)
        if (idx[k] == 0 || idx[k] == g.N[k] - 1) boundary = true;
      if (boundary)
        rep.boundary_density = std::max(rep.boundary_density, std::abs(d));
      if (idx[axis] == 0 || idx[axis] == g.N[axis] - 1) {
        double G = 0.0;
        for (int l = 0; l < F.j; ++l)
          for (int ss = 1; ss <= F.j - l; ++ss)
            G += inner(p, qc.Q[n + l + ss - 1][fl], qb.Q[F.j - l - ss][fl]);
        const double wface = weight(idx) / (0.5 * g.h(axis));
        net += (idx[axis] == 0 ? -1.0 : 1.0) * wface * G;
      }
    }
    rep.integral.push_back(I);
    net_flux_max = std::max(net_flux_max, std::abs(net));
  }
  for (double I : rep.integral)
    rep.drift = std::max(rep.drift, std::abs(I - rep.integral.front()));
  rep.boundary_flux_bound =
      (F.times.back() - F.times.front()) * net_flux_max;
  return rep;
}

}  // namespace cfw
