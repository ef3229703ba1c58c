#include "cfw/eds.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace cfw {

namespace {

// Coordinates of the U0-component of w (w need not be tau-real here; the
// component is read off by least squares against the U0 basis).
RVec u0_coords(const SymmetricPair& p, const Mat& w) {
  return coordinates(p.U0, 0.5 * (w + p.sigma.apply(w)));
}

Mat random_u1(const SymmetricPair& p, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat x = Mat::Zero(p.n, p.n);
  for (const Mat& b : p.U1.basis) x += g(rng) * b;
  return x;
}

}  // namespace

void validate_integral(const SymmetricPair& p, const IntegralElement& E,
                       double tol) {
  for (const Mat& x : E.basis) {
    if (membership_residual(p.U1, x) > tol * (1.0 + x.norm()))
      throw NotIntegral("integral element basis vector leaves U1");
  }
  for (size_t a = 0; a < E.basis.size(); ++a)
    for (size_t b = a + 1; b < E.basis.size(); ++b)
      if (bracket(E.basis[a], E.basis[b]).norm() >
          tol * (1.0 + E.basis[a].norm() * E.basis[b].norm()))
        throw NotIntegral("integral element basis fails to commute");
}

Subspace polar_space(const SymmetricPair& p, const IntegralElement& E) {
  validate_integral(p, E);
  if (E.dim() == 0) return p.U1;
  std::vector<Mat> L;
  L.reserve(p.U1.dim());
  for (const Mat& y : p.U1.basis) {
    // Stack [x_a, y] over a into one tall matrix per basis vector.
    Mat st(p.n * E.dim(), p.n);
    for (int a = 0; a < E.dim(); ++a)
      st.block(a * p.n, 0, p.n, p.n) = bracket(E.basis[a], y);
    L.push_back(std::move(st));
  }
  return nullspace_in(p.U1, L);
}

int polar_rank(const SymmetricPair& p, const IntegralElement& E) {
  return polar_space(p, E).dim() - E.dim() - 1;
}

Flag canonical_flag(const SymmetricPair& p) {
  Flag F;
  IntegralElement E;
  F.levels.push_back(E);
  for (int k = 0; k < p.rank(); ++k) {
    E.basis.push_back(p.a[k]);
    F.levels.push_back(E);
  }
  return F;
}

void validate_flag(const SymmetricPair& p, const Flag& F) {
  if (F.levels.empty()) throw InvalidFlag("empty flag");
  for (size_t j = 0; j < F.levels.size(); ++j) {
    if (F.levels[j].dim() != static_cast<int>(j))
      throw InvalidFlag("level " + std::to_string(j) + " has wrong dimension");
    validate_integral(p, F.levels[j]);
    // Nesting: each previous basis vector must lie in the current span.
    if (j > 0) {
      Subspace S{p.n, F.levels[j].basis};
      for (const Mat& x : F.levels[j - 1].basis)
        if (membership_residual(S, x) > kTolSpace * (1.0 + x.norm()))
          throw InvalidFlag("flag levels are not nested");
    }
  }
}

CartanReport cartan_characters(const SymmetricPair& p, const Flag& F) {
  validate_flag(p, F);
  CartanReport rep;
  const int dimU = p.U.dim();
  int prev = dimU;  // H(E_{-1}) = the whole tangent space
  for (const auto& E : F.levels) {
    const int dh = polar_space(p, E).dim();
    rep.dimH.push_back(dh);
    rep.polar_r.push_back(dh - E.dim() - 1);
    rep.c.push_back(dimU - dh);
    rep.s.push_back(prev - dh);
    prev = dh;
  }
  const int n = F.terminus_dim();
  for (int j = 0; j < n; ++j) rep.cF += rep.c[j];
  return rep;
}

bool regularity_probe(const SymmetricPair& p, const IntegralElement& E,
                      int samples, unsigned seed) {
  const int k = E.dim();
  if (k == 0) return true;
  const int base_dim = polar_space(p, E).dim();
  std::mt19937 rng(seed);
  const double eps = 1e-2;
  const int d1 = p.U1.dim();
  for (int s = 0; s < samples; ++s) {
    IntegralElement Ep;
    for (const Mat& x : E.basis) {
      Mat y = x + eps * random_u1(p, rng);
      Ep.basis.push_back(y / std::max(y.norm(), 1e-12));
    }
    // Newton re-projection onto the commutation constraints.
    bool ok = (k == 1);
    for (int it = 0; it < 5 && !ok; ++it) {
      double res = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          res = std::max(res, bracket(Ep.basis[a], Ep.basis[b]).norm());
      if (res < 1e-10) {
        ok = true;
        break;
      }
      const int rows = k * (k - 1) / 2 * p.U0.dim();
      RMat A = RMat::Zero(rows, k * d1);
      RVec rhs = RVec::Zero(rows);
      int row = 0;
      for (int a = 0; a < k; ++a) {
        for (int b = a + 1; b < k; ++b) {
          for (int w = 0; w < d1; ++w) {
            const RVec ca = u0_coords(p, bracket(p.U1.basis[w], Ep.basis[b]));
            const RVec cb = u0_coords(p, bracket(Ep.basis[a], p.U1.basis[w]));
            A.block(row, a * d1 + w, p.U0.dim(), 1) = ca;
            A.block(row, b * d1 + w, p.U0.dim(), 1) += cb;
          }
          rhs.segment(row, p.U0.dim()) =
              -u0_coords(p, bracket(Ep.basis[a], Ep.basis[b]));
          row += p.U0.dim();
        }
      }
      const RVec sol = A.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV)
                           .solve(rhs);
      for (int a = 0; a < k; ++a)
        for (int w = 0; w < d1; ++w)
          Ep.basis[a] += sol(a * d1 + w) * p.U1.basis[w];
    }
    if (!ok) {
      double res = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
          res = std::max(res, bracket(Ep.basis[a], Ep.basis[b]).norm());
      if (res >= 1e-10)
        throw ProbeFailed("re-projection did not reach the constraint set");
    }
    try {
      if (polar_space(p, Ep).dim() != base_dim) return false;
    } catch (const NotIntegral&) {
      throw ProbeFailed("projected sample failed the integral check");
    }
  }
  return true;
}

CartanReport cartan_test(const SymmetricPair& p, const Flag& F) {
  CartanReport rep = cartan_characters(p, F);
  const IntegralElement& E = F.levels.back();
  const int n = E.dim();
  const int dimU = p.U.dim();

  // Complement of E inside U (trace-form orthogonal) models U/E.
  Subspace Es{p.n, E.basis};
  Subspace W = orth_complement(p, Es, p.U);
  const int dw = W.dim();
  if (dw != dimU - n) throw InvalidFlag("terminus complement has wrong size");

  // Unknowns: phi(x_a) = sum_w phi_{a,w} W.basis[w].
  const int d0 = p.U0.dim();
  const int rows = n * d0 + n * (n - 1) / 2 * d0;
  RMat A = RMat::Zero(rows, n * dw);
  int row = 0;
  // (a) the U0 component of phi(x_a) vanishes.
  for (int a = 0; a < n; ++a) {
    for (int w = 0; w < dw; ++w)
      A.block(row, a * dw + w, d0, 1) = u0_coords(p, W.basis[w]);
    row += d0;
  }
  // (b) the U0 component of [x_a, phi(x_b)] + [phi(x_a), x_b] vanishes.
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int w = 0; w < dw; ++w) {
        A.block(row, b * dw + w, d0, 1) =
            u0_coords(p, bracket(E.basis[a], W.basis[w]));
        A.block(row, a * dw + w, d0, 1) +=
            u0_coords(p, bracket(W.basis[w], E.basis[b]));
      }
      row += d0;
    }
  }
  rep.codim = numeric_rank(A);
  rep.regular_flag = (rep.codim == rep.cF);
  bool tail_zero = true;
  for (size_t j = 2; j < rep.s.size(); ++j)
    if (rep.s[j] != 0) tail_zero = false;
  rep.involutive = rep.regular_flag && tail_zero;
  return rep;
}

CartanReport involutivity_report(const SymmetricPair& p, unsigned seed,
                                 int probe_samples) {
  const Flag F = canonical_flag(p);
  CartanReport rep = cartan_test(p, F);
  for (int j = 0; j < F.terminus_dim(); ++j)
    rep.probe_regular.push_back(
        regularity_probe(p, F.levels[j], probe_samples, seed + j));
  for (size_t j = 2; j < rep.s.size(); ++j)
    if (rep.s[j] != 0)
      throw InvalidFlag("character tail s_" + std::to_string(j) +
                        " is nonzero");
  return rep;
}

}  // namespace cfw
