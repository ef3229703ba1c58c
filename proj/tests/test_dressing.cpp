#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "cfw/dressing.hpp"
#include "doctest.h"

using namespace cfw;

namespace {

const std::vector<Cplx> kSamples = {{0.7, 0.3},  {-1.1, 0.5}, {0.2, -0.9},
                                    {2.3, 0.1},  {-0.4, -1.7}, {1.9, 1.2},
                                    {-2.6, 0.8}, {0.9, 2.1}};

}  // namespace

TEST_CASE("reality loop: identity seed, reality, inverse, pole orbit") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RVec zero = RVec::Zero(2 * p.n);
  CHECK(make_reality_loop({1.0, 0.55}, zero, p).is_identity());

  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  CHECK(f.poles.size() == 4);
  // The pole multiset is closed under conjugation and negation.
  CHECK_NOTHROW(validate_loop_poles(f));
  CHECK(loop_reality_residual(f, p, kSamples) < 1e-10);
  for (Cplx l : kSamples)
    CHECK(std::abs(f.eval(l).determinant() - Cplx(1, 0)) < 1e-10);

  RationalLoop finv = f.inverse_by_reality(p);
  for (Cplx l : kSamples)
    CHECK(dist(f.eval(l) * finv.eval(l), Mat::Identity(3, 3)) < 1e-10);
}

TEST_CASE("degenerate loop requests are rejected") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RVec s = loop_seed_vector(p.n, 7);
  CHECK_THROWS_AS(make_reality_loop({1.0, 0.0}, s, p), RealityUnsolvable);
  CHECK_THROWS_AS(make_reality_loop({0.0, 1.0}, s, p), RealityUnsolvable);
  // A pole without its mirror images.
  RationalLoop bad;
  bad.n = 3;
  bad.poles = {{1.0, 0.55}};
  bad.residues = {Mat::Identity(3, 3)};
  CHECK_THROWS_AS(validate_loop_poles(bad), RealityUnsolvable);
}

TEST_CASE("factorization of the identity loop is trivial") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop id = RationalLoop::identity(p.n);
  VacuumExponent X;
  X.pair = &p;
  X.x = {0.4, -0.3};
  FactorizationPoint pt = birkhoff_factor(id, id, X);
  CHECK(pt.m.is_identity());
  for (Cplx l : kSamples)
    CHECK(dist(eval_plus_factor(id, X, pt, l), X.value(l)) < 1e-12);
}

TEST_CASE("factorization at the origin and uniqueness across solvers") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  RationalLoop finv = f.inverse_by_reality(p);
  VacuumExponent X;
  X.pair = &p;
  X.x = {0.0, 0.0};
  FactorizationPoint pt = birkhoff_factor(f, finv, X);
  CHECK(product_identity_residual(f, finv, X, pt) < 1e-10);
  CHECK(entirety_residual(finv, X, pt) < 1e-10);

  X.x = {0.37, -0.61};
  FactorizationPoint qr = birkhoff_factor(f, finv, X);
  BirkhoffOptions svd_opt;
  svd_opt.use_svd = true;
  FactorizationPoint sv = birkhoff_factor(f, finv, X, svd_opt);
  for (size_t k = 0; k < qr.m.residues.size(); ++k)
    CHECK(dist(qr.m.residues[k], sv.m.residues[k]) < 1e-8);
}

TEST_CASE("grid factorization: holes, membership, product identity") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  Grid g = Grid::make_uniform(2, 1.6, 17);
  DressedGrid d = dress_grid(p, g, f);
  CHECK(d.holes.empty());
  CHECK(d.max_solve_residual < 1e-10);
  GridField v = extract_solution(d);
  CHECK(max_norm(v) > 1e-2);
  CHECK(space_residual(v, p) < 1e-9);
  for (long fl : {0L, g.num_nodes() / 2, g.num_nodes() - 1}) {
    CHECK(membership_residual(p.U1, d.points[fl].m_minus1()) < 1e-9);
    CHECK(product_identity_residual(f, d.finv, d.exponent_at(fl),
                                    d.points[fl]) < 1e-9);
  }
  FrameEquationReport fe = frame_equation_check(d, v, {Cplx(1, 0), Cplx(0.5, 0.5)});
  CHECK(fe.x_residual < 1.0);  // finite-difference scale; tightness is checked
                               // by the h-halving study in the suite
}

TEST_CASE("strict mode raises on singular nodes; lax mode records holes") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  Grid g = Grid::make_uniform(2, 1.6, 9);
  DressOptions opt;
  opt.birkhoff.condition_cutoff = 1.0;  // everything counts as singular
  opt.strict = true;
  CHECK_THROWS_AS(dress_grid(p, g, f, {}, opt), FactorizationSingular);
  opt.strict = false;
  DressedGrid d = dress_grid(p, g, f, {}, opt);
  CHECK(!d.holes.empty());
}

TEST_CASE("flow terms must be odd and above degree one") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  Grid g = Grid::make_uniform(2, 1.0, 9);
  CHECK_THROWS_AS(dress_grid(p, g, f, {{p.a[0], 2, 0.1}}), ConfigError);
  CHECK_THROWS_AS(dress_grid(p, g, f, {{p.a[0], 1, 0.1}}), ConfigError);
}

TEST_CASE("Q expansion: base level, vanishing tail, parity, commutation") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  // Identity m: Q_0 = c, higher levels vanish.
  FactorizationPoint triv;
  triv.m = RationalLoop::identity(p.n);
  auto Q = q_expand(triv, p.a[0], 5);
  CHECK(dist(Q[0], p.a[0]) < 1e-15);
  for (int k = 1; k <= 5; ++k) CHECK(Q[k].norm() < 1e-15);

  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  Grid g = Grid::make_uniform(2, 1.2, 9);
  DressedGrid d = dress_grid(p, g, f);
  GridField v = extract_solution(d);
  QSequence qe = q_expand_grid(d, p.a[0], 6);
  CHECK(q_parity_residual(qe, p) < 1e-10);
  for (long fl = 0; fl < g.num_nodes(); ++fl)
    CHECK(dist(qe.Q[1][fl], bracket(p.a[0], v.v[fl])) < 1e-10);
  for (long fl : {0L, g.num_nodes() / 2})
    CHECK(q_commutation_residual(d.points[fl], p.a[0], p.a[1], 6) < 1e-10);
}

TEST_CASE("series depth is capped") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  Grid g = Grid::make_uniform(2, 1.0, 9);
  DressedGrid d = dress_grid(p, g, f);
  CHECK_THROWS_AS(q_expand_grid(d, p.a[0], kMaxSeriesDepth + 1), DepthOverflow);
}

TEST_CASE("first-order residual converges at 4th order") {
  SymmetricPair p = builtin_pair("sun_son", 3);
  RationalLoop f = make_reality_loop({1.0, 0.55}, loop_seed_vector(p.n, 7), p);
  double res[2];
  int idx = 0;
  for (int nodes : {17, 33}) {
    Grid g = Grid::make_uniform(2, 1.6, nodes);
    GridField v = extract_solution(dress_grid(p, g, f));
    res[idx++] = uu0_residual(v, p).max;
  }
  const double ratio = res[0] / res[1];
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);
}
