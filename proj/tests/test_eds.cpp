#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "cfw/eds.hpp"
#include "doctest.h"

using namespace cfw;

TEST_CASE("polar spaces along the canonical chain") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  IntegralElement empty;
  Subspace H0 = polar_space(p, empty);
  CHECK(H0.dim() == p.U1.dim());
  CHECK(polar_rank(p, empty) == p.U1.dim() - 1);

  IntegralElement line{{p.a[0]}};
  Subspace H1 = polar_space(p, line);
  CHECK(H1.dim() == 2);
  // Independent oracle: the polar space of a regular line is the abelian part.
  for (const Mat& h : H1.basis) CHECK(membership_residual(p.A, h) < 1e-9);
  CHECK(polar_rank(p, line) == 0);

  IntegralElement plane{{p.a[0], p.a[1]}};
  Subspace H2 = polar_space(p, plane);
  CHECK(H2.dim() == 2);
  CHECK(polar_rank(p, plane) == -1);  // terminus
}

TEST_CASE("integral-element validation") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  CHECK_NOTHROW(validate_integral(p, {{p.a[0], p.a[1]}}));
  // Non-commuting pair inside U1.
  Mat x = p.U1perpA.basis[0], y = p.U1perpA.basis[1];
  if (bracket(x, y).norm() < 1e-9) y = p.U1perpA.basis[2];
  CHECK_THROWS_AS(validate_integral(p, {{x, y}}), NotIntegral);
  // Element outside U1.
  CHECK_THROWS_AS(validate_integral(p, {{p.U0.basis[0]}}), NotIntegral);
}

TEST_CASE("Cartan characters match the closed-form counts") {
  for (int n : {2, 3, 4}) {
    SymmetricPair p = builtin_pair("sun_son", n);
    Flag F = canonical_flag(p);
    CHECK_NOTHROW(validate_flag(p, F));
    CartanReport r = cartan_test(p, F);
    // s_0 = dim U - dim U1, s_1 = dim U1 - r, the tail vanishes.
    REQUIRE(static_cast<int>(r.s.size()) == p.rank() + 1);
    CHECK(r.s[0] == p.U.dim() - p.U1.dim());
    if (p.rank() >= 1) CHECK(r.s[1] == p.U1.dim() - p.rank());
    for (size_t k = 2; k < r.s.size(); ++k) CHECK(r.s[k] == 0);
    CHECK(r.codim == r.cF);
    CHECK(r.regular_flag);
  }
  // Explicit values.
  CartanReport r2 = cartan_test(builtin_pair("sun_son", 2),
                                canonical_flag(builtin_pair("sun_son", 2)));
  CHECK(r2.s == std::vector<int>{1, 1});
  CHECK(r2.cF == 1);
  CartanReport r3 = cartan_test(builtin_pair("sun_son", 3),
                                canonical_flag(builtin_pair("sun_son", 3)));
  CHECK(r3.s == std::vector<int>{3, 3, 0});
  CHECK(r3.cF == 9);
  CartanReport r4 = cartan_test(builtin_pair("sun_son", 4),
                                canonical_flag(builtin_pair("sun_son", 4)));
  CHECK(r4.s == std::vector<int>{6, 6, 0, 0});
  CHECK(r4.cF == 30);
}

TEST_CASE("involutivity report on the builtin pairs") {
  for (int n : {2, 3, 4}) {
    SymmetricPair p = builtin_pair("sun_son", n);
    CartanReport r = involutivity_report(p, 7, 25);
    CHECK(r.involutive);
    for (bool ok : r.probe_regular) CHECK(ok);
  }
}

TEST_CASE("regularity probe distinguishes regular and degenerate lines") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  CHECK(regularity_probe(p, {{p.a[0]}}, 25, 7));
  // Two equal diagonal entries: the polar dimension jumps nearby.
  Mat x = Mat::Zero(3, 3);
  x.diagonal() << Cplx(0, 1), Cplx(0, 1), Cplx(0, -2);
  x /= x.norm();
  CHECK(polar_space(p, {{x}}).dim() > 2);
  CHECK_FALSE(regularity_probe(p, {{x}}, 25, 7));
}
