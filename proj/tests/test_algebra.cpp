#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "cfw/algebra.hpp"
#include "doctest.h"

using namespace cfw;

namespace {

std::mt19937 rng(12345);

Mat random_in(const Subspace& S) {
  std::normal_distribution<double> g;
  Mat X = Mat::Zero(S.n, S.n);
  for (const Mat& e : S.basis) X += g(rng) * e;
  return X;
}

}  // namespace

TEST_CASE("builtin pair invariants hold for n = 2, 3, 4") {
  for (int n : {2, 3, 4}) {
    SymmetricPair p = builtin_pair("sun_son", n);
    for (const auto& c : validate_pair(p)) {
      INFO("n=", n, " check=", c.name, " residual=", c.residual);
      CHECK(c.pass);
    }
  }
}

TEST_CASE("unknown pair name throws") {
  CHECK_THROWS_AS(builtin_pair("nope", 3), UnknownPair);
}

TEST_CASE("2x2 spin basis brackets close cyclically") {
  // e_k = -(i/2) * (Pauli k); oracle entries from direct 2x2 products.
  Mat e1(2, 2), e2(2, 2), e3(2, 2);
  const Cplx I(0, 1);
  e1 << 0, -0.5 * I, -0.5 * I, 0;
  e2 << 0, -0.5, 0.5, 0;
  e3 << -0.5 * I, 0, 0, 0.5 * I;
  CHECK(dist(e1 * e2 - e2 * e1, e3) < 1e-15);
  CHECK(dist(e2 * e3 - e3 * e2, e1) < 1e-15);
  CHECK(dist(e3 * e1 - e1 * e3, e2) < 1e-15);
  CHECK(dist(bracket(e1, e2), e3) < 1e-15);
}

TEST_CASE("bracket antisymmetry and Jacobi identity") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  for (int trial = 0; trial < 50; ++trial) {
    Mat X = random_in(p.U), Y = random_in(p.U), Z = random_in(p.U);
    CHECK(std::abs(inner(p, X, bracket(X, Y)) + inner(p, bracket(Y, X), X)) <
          1e-10);
    Mat J = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) +
            bracket(Z, bracket(X, Y));
    CHECK(J.norm() < 1e-12 * (1 + X.norm() * Y.norm() * Z.norm()));
  }
}

TEST_CASE("trace form: symmetry, ad-invariance, explicit value") {
  SymmetricPair p = builtin_pair("sun_son", 2);
  for (int trial = 0; trial < 50; ++trial) {
    Mat X = random_in(p.U), Y = random_in(p.U), Z = random_in(p.U);
    CHECK(std::abs(inner(p, X, Y) - inner(p, Y, X)) < 1e-12);
    CHECK(std::abs(inner(p, bracket(X, Y), Z) + inner(p, Y, bracket(X, Z))) <
          1e-10);
  }
  Mat D(2, 2);
  D << Cplx(0, 1), 0, 0, Cplx(0, -1);
  // tr(D^2) = -2, so the form gives -2 times the normalization constant.
  CHECK(std::abs(inner(p, D, D) + 2.0 * p.form_normalization) < 1e-14);
}

TEST_CASE("sigma split: eigenspace membership and reassembly") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  for (int trial = 0; trial < 20; ++trial) {
    Mat X = random_in(p.U);
    auto [X0, X1] = sigma_split(p, X);
    CHECK(dist(p.sigma.apply(X0), X0) < 1e-12);
    CHECK(dist(p.sigma.apply(X1), -X1) < 1e-12);
    CHECK(dist(X0 + X1, X) < 1e-12);
    CHECK(membership_residual(p.U0, X0) < 1e-10);
    CHECK(membership_residual(p.U1, X1) < 1e-10);
  }
  // A matrix outside the real form is rejected.
  Mat bad = Mat::Zero(3, 3);
  bad(0, 1) = 1.0;  // not anti-hermitian
  CHECK_THROWS_AS(sigma_split(p, bad), NotInRealForm);
}

TEST_CASE("centralizers: abelian part, U1 slice, degenerate argument") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  CHECK(centralizer(p, p.a[0], p.A).dim() == p.rank());
  CHECK(centralizer(p, p.a[0], p.U1).dim() == 2);
  CHECK(centralizer(p, Mat::Zero(3, 3), p.U1).dim() == p.U1.dim());
}

TEST_CASE("regularity diagnostics") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RegularityDiag d = is_regular(p, p.a[0]);
  CHECK(d.regular);
  CHECK(d.centralizer_dim == 2);
  CHECK(d.ad_rank == 3);
  CHECK_FALSE(is_regular(p, Mat::Zero(3, 3)).regular);
  // Two equal diagonal entries: the centralizer jumps above the rank.
  Mat x = Mat::Zero(3, 3);
  x.diagonal() << Cplx(0, 1), Cplx(0, 1), Cplx(0, -2);
  RegularityDiag dd = is_regular(p, x);
  CHECK_FALSE(dd.regular);
  CHECK(dd.centralizer_dim > 2);
}

TEST_CASE("orthogonal complement and projection") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  Subspace comp = orth_complement(p, p.A, p.U1);
  CHECK(comp.dim() == p.U1.dim() - p.A.dim());
  CHECK(orth_complement(p, p.U1, p.U1).dim() == 0);
  // U1 = A  +  (A-perp within U1) as a direct sum: dimension count plus
  // reconstruction of a random element from its two projections.
  for (int trial = 0; trial < 20; ++trial) {
    Mat X = random_in(p.U1);
    Mat XA = project(p, X, p.A), Xc = project(p, X, comp);
    CHECK(dist(XA + Xc, X) < 1e-10);
  }
  for (const Mat& w : comp.basis) {
    CHECK(dist(project(p, p.a[0] + w, comp), w) < 1e-10);
    CHECK(dist(project(p, w, comp), w) < 1e-10);
  }
  CHECK(project(p, random_in(p.A), comp).norm() < 1e-10);
}

TEST_CASE("dimension table") {
  SymmetricPair p3 = builtin_pair("sun_son", 3);
  CHECK(p3.U.dim() == 8);
  CHECK(p3.U0.dim() == 3);
  CHECK(p3.U1.dim() == 5);
  CHECK(p3.rank() == 2);
  SymmetricPair p2 = builtin_pair("sun_son", 2);
  CHECK(p2.U.dim() == 3);
  CHECK(p2.U1.dim() == 2);
  CHECK(p2.rank() == 1);
  SymmetricPair p4 = builtin_pair("sun_son", 4);
  CHECK(p4.U.dim() == 15);
  CHECK(p4.U0.dim() == 6);
  CHECK(p4.U1.dim() == 9);
  CHECK(p4.rank() == 3);
}

TEST_CASE("pair with non-commuting involutions fails the named invariant") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  Mat S = Mat::Identity(3, 3);
  S(1, 1) = Cplx(0, 1);
  p.tau.J = S;
  bool commute_failed = false;
  for (const auto& c : validate_pair(p))
    if (c.name == "tau_sigma_commute" && !c.pass) commute_failed = true;
  CHECK(commute_failed);
}

TEST_CASE("nullspace_in handles stacked rectangular constraints") {
  // Constraint operator y -> ([a_1, y]; [a_2, y]) stacked to a 2n x n block;
  // its kernel inside U1 is the centralizer of the abelian part, i.e. A.
  SymmetricPair p = builtin_pair("sun_son", 3);
  std::vector<Mat> L;
  for (const Mat& y : p.U1.basis) {
    Mat stacked(2 * p.n, p.n);
    stacked.topRows(p.n) = bracket(p.a[0], y);
    stacked.bottomRows(p.n) = bracket(p.a[1], y);
    L.push_back(stacked);
  }
  Subspace K = nullspace_in(p.U1, L);
  CHECK(K.dim() == p.A.dim());
  for (const Mat& k : K.basis) CHECK(membership_residual(p.A, k) < 1e-9);
  // Mixed constraint sizes are rejected.
  L[0] = Mat::Zero(p.n, p.n);
  CHECK_THROWS_AS(nullspace_in(p.U1, L), DimensionMismatch);
}
