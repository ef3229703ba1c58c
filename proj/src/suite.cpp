#include "cfw/suite.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <chrono>
#include <cmath>
#include <random>

#include "json.hpp"

#include "cfw/report.hpp"

namespace cfw {

namespace {

// Pinned suite tolerances.
constexpr double kTolAlgebra = 1e-12;
constexpr double kTolAdInv = 1e-10;
constexpr double kTolVacuum = 1e-10;
constexpr double kTolProduct = 1e-9;
constexpr double kTolReality = 1e-9;
constexpr double kTolEntire = 1e-9;
constexpr double kTolParity = 1e-9;
constexpr double kTolCommute = 1e-9;
constexpr double kTolCartanEmbed = 1e-8;
constexpr double kVNonzero = 1e-4;
// h-halving windows: strict 16 +/- 20% where the criterion pins it, a wider
// window where several 4th-order error sources mix.
constexpr double kRatioLo = 12.8, kRatioHi = 19.2;
constexpr double kRatioLoWide = 8.0, kRatioHiWide = 32.0;
// Bound constants for the lambda-derivative (Richardson) pipeline and the
// conserved-integral discretization term.
constexpr double kFlatAbelianC = 100.0, kFlatAbelianCdelta = 10.0;
constexpr double kConservedC = 100.0;
constexpr double kConservedBase = 500.0;
constexpr double kVacuumDelta = 0.002;

using Clock = std::chrono::steady_clock;

struct Timer {
  Clock::time_point t0 = Clock::now();
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - t0).count();
  }
};

CheckItem item(const std::string& name, double value, double tol) {
  return {name, value, tol, value <= tol, ""};
}

CheckItem ratio_item(const std::string& name, double coarse, double fine,
                     double lo, double hi) {
  CheckItem it;
  it.name = name;
  it.value = (fine > 0) ? coarse / fine : 0.0;
  it.tol = hi;
  it.note = "ratio, window [" + format_double(lo) + "," + format_double(hi) + "]";
  it.pass = it.value >= lo && it.value <= hi;
  return it;
}

CheckItem flag_item(const std::string& name, bool ok) {
  CheckItem it;
  it.name = name;
  it.value = ok ? 1.0 : 0.0;
  it.tol = 1.0;
  it.note = "boolean";
  it.pass = ok;
  return it;
}

Mat random_in(const Subspace& S, std::mt19937& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat x = Mat::Zero(S.n, S.n);
  for (const Mat& b : S.basis) x += g(rng) * b;
  return x;
}

// Shared dressed-solution artifacts.
struct Ctx {
  SymmetricPair pair;
  RationalLoop loop;
  DressedGrid coarse, fine;
  GridField v_coarse, v_fine;
  bool has_fine = false;
};

// ---- criterion 1 ------------------------------------------------------------

CriterionResult crit_algebra(const SuiteConfig& cfg) {
  Timer tm;
  CriterionResult res;
  res.name = "algebra invariants";
  for (int n : {2, 3, 4}) {
    SymmetricPair p = builtin_pair("sun_son", n);
    double worst = 0.0;
    bool all = true;
    for (const auto& c : validate_pair(p, kTolAlgebra)) {
      worst = std::max(worst, c.residual);
      all = all && c.pass;
    }
    CheckItem it = item("pair invariants n=" + std::to_string(n), worst,
                        kTolAlgebra);
    it.pass = it.pass && all;
    res.checks.push_back(it);
  }
  {
    SymmetricPair p = builtin_pair("sun_son", 3);
    std::mt19937 rng(cfg.seed);
    double worst = 0.0;
    for (int t = 0; t < 1000; ++t) {
      Mat X = random_in(p.U, rng), Y = random_in(p.U, rng),
          Z = random_in(p.U, rng);
      const double lhs = inner(p, bracket(X, Y), Z);
      const double rhs = -inner(p, Y, bracket(X, Z));
      const double scale =
          std::max(1.0, X.norm() * Y.norm() * Z.norm());
      worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    res.checks.push_back(item("ad-invariance of the form", worst, kTolAdInv));
  }
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 2 ------------------------------------------------------------

CriterionResult crit_vacuum(const SuiteConfig& cfg) {
  Timer tm;
  CriterionResult res;
  res.name = "vacuum exactness";
  SymmetricPair p = builtin_pair("sun_son", 3);
  Grid g = Grid::make_uniform(2, cfg.extent, cfg.vacuum_nodes);
  DressedGrid d = dress_grid(p, g, RationalLoop::identity(3));
  GridField v = extract_solution(d);
  res.checks.push_back(item("v = 0", max_norm(v), kTolVacuum));

  double eres = 0.0;
  std::mt19937 rng(cfg.seed + 1);
  std::uniform_int_distribution<long> pick(0, g.num_nodes() - 1);
  for (int s = 0; s < 32; ++s) {
    const long fl = pick(rng);
    const Cplx lam(0.8 - 0.11 * s, 0.3 * ((s % 3) - 1));
    Mat X = d.exponent_at(fl).linear_coefficient();
    eres = std::max(eres, dist(d.E_raw(fl, lam), (lam * X).exp()));
  }
  res.checks.push_back(item("E = exp(lambda X)", eres, kTolVacuum));

  FrameField Ep = d.frame(1.0), Em = d.frame(-1.0);
  GridField psi = curved_flat(Ep, Em);
  double pres = 0.0;
  for (long fl = 0; fl < g.num_nodes(); ++fl) {
    Mat X = d.exponent_at(fl).linear_coefficient();
    pres = std::max(pres, dist(psi.v[fl], (2.0 * X).exp()));
  }
  res.checks.push_back(item("psi = exp(2X)", pres, kTolVacuum));

  const double del = kVacuumDelta;
  GridField Y = flat_abelian(d.frame(del), d.frame(-del), d.frame(del / 2),
                             d.frame(-del / 2), d.frame(0.0), del);
  double yres = 0.0;
  for (long fl = 0; fl < g.num_nodes(); ++fl) {
    Mat X = d.exponent_at(fl).linear_coefficient();
    yres = std::max(yres, dist(Y.v[fl], X));
  }
  res.checks.push_back(item("Y = X", yres, kTolVacuum));
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 3 ------------------------------------------------------------

CriterionResult crit_dressed(const SuiteConfig& cfg, Ctx& ctx) {
  Timer tm;
  CriterionResult res;
  res.name = "dressed solution validity";
  ctx.pair = builtin_pair("sun_son", 3);
  ctx.loop =
      make_reality_loop(cfg.pole, loop_seed_vector(3, cfg.seed), ctx.pair);

  Grid g = Grid::make_uniform(2, cfg.extent, cfg.dressed_nodes);
  ctx.coarse = dress_grid(ctx.pair, g, ctx.loop);
  res.checks.push_back(
      flag_item("factorization hole-free", ctx.coarse.holes.empty()));
  ctx.v_coarse = extract_solution(ctx.coarse);
  {
    CheckItem it;
    it.name = "v nonzero";
    it.value = max_norm(ctx.v_coarse);
    it.tol = kVNonzero;
    it.pass = it.value >= kVNonzero;
    it.note = "lower bound";
    res.checks.push_back(it);
  }
  const double res_c = uu0_residual(ctx.v_coarse, ctx.pair).max;
  if (cfg.convergence) {
    Grid gf = Grid::make_uniform(2, cfg.extent, 2 * cfg.dressed_nodes - 1);
    ctx.fine = dress_grid(ctx.pair, gf, ctx.loop);
    ctx.v_fine = extract_solution(ctx.fine);
    ctx.has_fine = ctx.fine.holes.empty();
    const double res_f = uu0_residual(ctx.v_fine, ctx.pair).max;
    res.checks.push_back(ratio_item("first-order system order", res_c, res_f,
                                    kRatioLo, kRatioHi));
  }

  double prod = 0.0;
  for (long fl = 0; fl < g.num_nodes(); ++fl)
    prod = std::max(prod,
                    product_identity_residual(ctx.coarse.f, ctx.coarse.finv,
                                              ctx.coarse.exponent_at(fl),
                                              ctx.coarse.points[fl]));
  res.checks.push_back(item("product identity", prod, kTolProduct));

  double entire = 0.0, reality = 0.0;
  std::vector<long> sample_nodes = {0, g.num_nodes() - 1,
                                    g.index(g.origin_index()),
                                    g.num_nodes() / 3, (2 * g.num_nodes()) / 3};
  const std::vector<Cplx> lams = {{0.31, 0.72}, {-1.13, 0.21}, {0.84, -0.47}};
  for (long fl : sample_nodes) {
    entire = std::max(entire,
                      entirety_residual(ctx.coarse.finv,
                                        ctx.coarse.exponent_at(fl),
                                        ctx.coarse.points[fl]));
    auto F = [&](Cplx l) { return ctx.coarse.E_raw(fl, l); };
    reality = std::max(reality, reality_residual(F, lams, ctx.pair));
  }
  res.checks.push_back(item("plus-factor entire", entire, kTolEntire));
  res.checks.push_back(item("reality on lambda quadruples", reality,
                            kTolReality));
  res.checks.push_back(item("loop reality",
                            loop_reality_residual(ctx.loop, ctx.pair, lams),
                            kTolReality));
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 4 ------------------------------------------------------------

struct GeomResiduals {
  double bi_membership, bi_commutation, bj_frame, bj_g;
  double fa_bracket, fa_gram, fa_membership;
  double cartan_embed, path_indep;
};

GeomResiduals geometry_residuals(const SymmetricPair& p, const GridField& v,
                                 double delta) {
  GeomResiduals r{};
  FrameReport E1 = parallel_frame(v, 1.0, p);
  FrameReport Em1 = parallel_frame(v, -1.0, p);
  FrameReport E0 = parallel_frame(v, 0.0, p);
  r.path_indep = std::max({E1.path_independence, Em1.path_independence,
                           E0.path_independence});

  GridField psi = curved_flat(E1.frame, Em1.frame);
  r.cartan_embed = cartan_embedding_residual(psi, p);

  GridField f = cartan_lift(E1.frame, E0.frame);
  GridField gfield = make_field(f.grid, p.n, ValueSpace::Group);
  gfield.v = E0.frame.E;
  CartanLiftReport lift = cartan_lift_residuals(f, gfield, v, p);
  r.bi_membership = lift.u1_membership;
  r.bi_commutation = lift.commutation;
  r.bj_g = lift.g_equation;

  // Direct check of f^-1 f_xi = g a_i g^-1.
  for (int k = 0; k < f.grid.r; ++k) {
    GridField df = deriv(f, k);
    for (long fl = 0; fl < f.grid.num_nodes(); ++fl) {
      const Mat W = f.v[fl].partialPivLu().solve(df.v[fl]);
      const Mat rhs = gfield.v[fl] * p.a[k] * gfield.v[fl].inverse();
      r.bj_frame = std::max(r.bj_frame, dist(W, rhs));
    }
  }

  FrameReport Epd = parallel_frame(v, delta, p);
  FrameReport Emd = parallel_frame(v, -delta, p);
  FrameReport Epd2 = parallel_frame(v, delta / 2, p);
  FrameReport Emd2 = parallel_frame(v, -delta / 2, p);
  GridField Y = flat_abelian(Epd.frame, Emd.frame, Epd2.frame, Emd2.frame,
                             E0.frame, delta);
  FlatAbelianReport fa = flat_abelian_residuals(Y, p);
  r.fa_bracket = fa.bracket;
  r.fa_gram = fa.gram_drift;
  r.fa_membership = fa.u1_membership;
  return r;
}

CriterionResult crit_geometry(const SuiteConfig& cfg, const Ctx& ctx) {
  Timer tm;
  CriterionResult res;
  res.name = "geometry";
  const double h = ctx.coarse.grid.h(0);
  GeomResiduals c = geometry_residuals(ctx.pair, ctx.v_coarse, cfg.delta);
  res.checks.push_back(item("Cartan embedding sigma(psi)psi = I",
                            c.cartan_embed, kTolCartanEmbed));
  const double fa_bound =
      std::max(kFlatAbelianC * std::pow(h, 4),
               kFlatAbelianCdelta * std::pow(cfg.delta, 4));
  res.checks.push_back(item("flat abelian bracket", c.fa_bracket, fa_bound));
  res.checks.push_back(item("flat abelian Gram constancy", c.fa_gram, fa_bound));
  res.checks.push_back(
      item("flat abelian U1 membership", c.fa_membership, fa_bound));
  if (cfg.convergence && ctx.has_fine) {
    GeomResiduals f = geometry_residuals(ctx.pair, ctx.v_fine, cfg.delta);
    res.checks.push_back(ratio_item("lift commutation order", c.bi_commutation,
                                    f.bi_commutation, kRatioLoWide,
                                    kRatioHiWide));
    res.checks.push_back(ratio_item("lift U1 membership order",
                                    c.bi_membership, f.bi_membership,
                                    kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("frame/gauge equation order", c.bj_frame,
                                    f.bj_frame, kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("g-equation order", c.bj_g, f.bj_g,
                                    kRatioLoWide, kRatioHiWide));
  }
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 5 ------------------------------------------------------------

struct QResiduals {
  double recursion, closedness, gen_vs_exp;
};

QResiduals q_residuals(const SymmetricPair& p, const DressedGrid& d,
                       const GridField& v, int depth) {
  QResiduals r{};
  for (const Mat& c : {p.a[0], p.a[1]}) {
    QSequence qe = q_expand_grid(d, c, depth);
    r.recursion = std::max(r.recursion, q_recursion_residual(v, qe, p).max);
    for (int n = 0; n <= std::min(4, depth); ++n)
      r.closedness = std::max(r.closedness, closedness_residual(qe, n, p).max);
    QSequence qg = q_generate(v, c, std::min(4, depth), p, &qe);
    for (int n = 0; n <= qg.depth; ++n)
      for (long fl = 0; fl < d.grid.num_nodes(); ++fl)
        r.gen_vs_exp =
            std::max(r.gen_vs_exp, dist(qg.Q[n][fl], qe.Q[n][fl]));
  }
  return r;
}

CriterionResult crit_q(const SuiteConfig& cfg, const Ctx& ctx) {
  Timer tm;
  CriterionResult res;
  res.name = "Q recursion and conservation laws";
  const SymmetricPair& p = ctx.pair;

  double parity = 0.0, q1 = 0.0, commute = 0.0;
  for (const Mat& c : {p.a[0], p.a[1]}) {
    QSequence qe = q_expand_grid(ctx.coarse, c, cfg.depth);
    parity = std::max(parity, q_parity_residual(qe, p));
    for (long fl = 0; fl < ctx.coarse.grid.num_nodes(); ++fl)
      q1 = std::max(q1,
                    dist(qe.Q[1][fl], bracket(c, ctx.v_coarse.v[fl])));
  }
  for (long fl = 0; fl < ctx.coarse.grid.num_nodes(); ++fl)
    commute = std::max(commute,
                       q_commutation_residual(ctx.coarse.points[fl], p.a[0],
                                              p.a[1], cfg.depth));
  res.checks.push_back(item("parity sigma Q_n = (-1)^(n+1) Q_n", parity,
                            kTolParity));
  res.checks.push_back(item("Q_1 = [c, v]", q1, kTolParity));
  res.checks.push_back(
      item("expansion commutation coefficients", commute, kTolCommute));

  QResiduals qc = q_residuals(p, ctx.coarse, ctx.v_coarse, cfg.depth);
  if (cfg.convergence && ctx.has_fine) {
    QResiduals qf = q_residuals(p, ctx.fine, ctx.v_fine, cfg.depth);
    res.checks.push_back(ratio_item("recursion order", qc.recursion,
                                    qf.recursion, kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("closedness order", qc.closedness,
                                    qf.closedness, kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("generate vs expand order", qc.gen_vs_exp,
                                    qf.gen_vs_exp, kRatioLoWide, kRatioHiWide));
  }
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 6 ------------------------------------------------------------

struct FlowResiduals {
  double flow, flux, stepping, base;
  ConservedReport conserved;
  double h, ht;
};

FlowResiduals flow_residuals(const SymmetricPair& p, const RationalLoop& loop,
                             double extent, int nodes, int slices,
                             double t_half) {
  Grid g = Grid::make_uniform(2, extent, nodes);
  FlowFamily F = make_flow_family(p, g, loop, p.a[0], 3, -t_half, t_half,
                                  slices);
  FlowResiduals r{};
  FlowReport fr = flow_residual(F);
  r.flow = fr.t_residual;
  FluxReport xr = flux_identity_residual(F, p.a[1], 2, 0);
  r.flux = xr.flux_residual;
  r.stepping = xr.stepping_residual;
  r.base = xr.base_case_residual;
  r.conserved = conserved_quantity(F, p.a[1], 2, 0);
  r.h = g.h(0);
  r.ht = F.dt();
  return r;
}

CriterionResult crit_flows(const SuiteConfig& cfg, const Ctx& ctx) {
  Timer tm;
  CriterionResult res;
  res.name = "flows";
  const SymmetricPair& p = ctx.pair;
  FlowResiduals c = flow_residuals(p, ctx.loop, cfg.extent, cfg.flow_nodes,
                                   cfg.flow_slices, cfg.flow_t_half);
  if (cfg.convergence) {
    FlowResiduals f =
        flow_residuals(p, ctx.loop, cfg.extent, 2 * cfg.flow_nodes - 1,
                       2 * cfg.flow_slices - 1, cfg.flow_t_half);
    res.checks.push_back(
        ratio_item("flow equation order", c.flow, f.flow, kRatioLoWide,
                   kRatioHiWide));
    res.checks.push_back(ratio_item("flux identity order", c.flux, f.flux,
                                    kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("stepping identity order", c.stepping,
                                    f.stepping, kRatioLoWide, kRatioHiWide));
    res.checks.push_back(ratio_item("stepping base case order", c.base, f.base,
                                    kRatioLoWide, kRatioHiWide));
  } else {
    res.checks.push_back(item("stepping base case", c.base,
                              kConservedBase * std::pow(c.h, 4)));
  }
  {
    const double scale =
        std::max(1.0, std::abs(c.conserved.integral.front()));
    const double bound =
        c.conserved.boundary_flux_bound +
        kConservedC * (std::pow(c.h, 4) + std::pow(c.ht, 4)) * scale;
    CheckItem it = item("conserved integral drift", c.conserved.drift, bound);
    it.note = "bound = flux " + format_double(c.conserved.boundary_flux_bound) +
              " + discretization";
    res.checks.push_back(it);
  }
  {
    // Commuting exponent product: factor with the two flow factors in both
    // orders and compare the extracted solutions.
    double worst = 0.0;
    for (auto [x1, x2] : {std::pair{0.31, -0.22}, {-0.75, 0.48}, {0.0, 0.0}}) {
      VacuumExponent X;
      X.pair = &p;
      X.x = {x1, x2};
      X.flows = {{p.a[0], 3, 0.03}, {p.a[1], 5, 0.01}};
      FactorizationPoint f1 = birkhoff_factor(ctx.loop, ctx.coarse.finv, X);
      X.reverse_product = true;
      FactorizationPoint f2 = birkhoff_factor(ctx.loop, ctx.coarse.finv, X);
      worst = std::max(
          worst, dist(project(p, f1.m_minus1(), p.U1perpA),
                      project(p, f2.m_minus1(), p.U1perpA)));
    }
    res.checks.push_back(item("exponent product commutation", worst,
                              kTolCommute));
  }
  res.seconds = tm.elapsed();
  return res;
}

// ---- criterion 7 ------------------------------------------------------------

CriterionResult crit_eds(const SuiteConfig& cfg) {
  Timer tm;
  CriterionResult res;
  res.name = "EDS characters and Cartan test";
  for (int n : {2, 3, 4}) {
    SymmetricPair p = builtin_pair("sun_son", n);
    CartanReport rep = involutivity_report(p, cfg.seed + n, 50);
    const int dU = p.U.dim(), dU1 = p.U1.dim(), r = p.rank();
    bool ok = rep.s.size() == size_t(r + 1) && rep.s[0] == dU - dU1 &&
              rep.s[1] == dU1 - r;
    for (int j = 2; j <= r; ++j) ok = ok && rep.s[j] == 0;
    ok = ok && rep.codim == rep.cF && rep.involutive;
    for (bool pr : rep.probe_regular) ok = ok && pr;
    CheckItem it = flag_item("characters + Cartan test n=" + std::to_string(n),
                             ok);
    it.note = "s0=" + std::to_string(rep.s[0]) + " s1=" +
              std::to_string(rep.s[1]) + " codim=" + std::to_string(rep.codim) +
              " c(F)=" + std::to_string(rep.cF);
    res.checks.push_back(it);
  }
  {
    // Degenerate direction in A for n = 3: the probe must detect the polar
    // dimension jump and the Cartan test must reject the flag.
    SymmetricPair p = builtin_pair("sun_son", 3);
    Mat x = Mat::Zero(3, 3);
    x(0, 0) = Cplx(0, 1.0);
    x(1, 1) = Cplx(0, 1.0);
    x(2, 2) = Cplx(0, -2.0);
    x /= x.norm();
    IntegralElement E{{x}};
    bool probe_irregular = !regularity_probe(p, E, 50, cfg.seed);
    Flag F;
    F.levels.push_back({});
    F.levels.push_back(E);
    IntegralElement full{{x, project(p, p.a[0], p.A)}};
    // Complete to A with a second direction independent of x.
    {
      Mat y = p.a[0] - inner(p, p.a[0], x) / inner(p, x, x) * x;
      full.basis = {x, y / y.norm()};
    }
    F.levels.push_back(full);
    CartanReport rep = cartan_test(p, F);
    res.checks.push_back(flag_item("degenerate element rejected",
                                   probe_irregular && !rep.regular_flag));
  }
  res.seconds = tm.elapsed();
  return res;
}

}  // namespace

bool CriterionResult::pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg) {
  std::vector<CriterionResult> out;
  out.push_back(crit_algebra(cfg));
  out.push_back(crit_vacuum(cfg));
  Ctx ctx;
  out.push_back(crit_dressed(cfg, ctx));
  if (cfg.with_geometry) out.push_back(crit_geometry(cfg, ctx));
  out.push_back(crit_q(cfg, ctx));
  if (cfg.with_flows) out.push_back(crit_flows(cfg, ctx));
  out.push_back(crit_eds(cfg));
  return out;
}

std::string suite_report_json(const SuiteConfig& cfg,
                              const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json j;
  j["config"] = {{"seed", cfg.seed},
                 {"pole", {cfg.pole.real(), cfg.pole.imag()}},
                 {"extent", cfg.extent},
                 {"dressed_nodes", cfg.dressed_nodes},
                 {"flow_nodes", cfg.flow_nodes},
                 {"flow_slices", cfg.flow_slices},
                 {"depth", cfg.depth},
                 {"delta", cfg.delta},
                 {"convergence", cfg.convergence}};
  j["criteria"] = nlohmann::ordered_json::array();
  bool all = true;
  for (const auto& r : results) {
    nlohmann::ordered_json c;
    c["name"] = r.name;
    c["pass"] = r.pass();
    all = all && r.pass();
    c["checks"] = nlohmann::ordered_json::array();
    for (const auto& ch : r.checks)
      c["checks"].push_back({{"name", ch.name},
                             {"value", format_double(ch.value)},
                             {"tol", format_double(ch.tol)},
                             {"note", ch.note},
                             {"pass", ch.pass}});
    j["criteria"].push_back(c);
  }
  j["pass"] = all;
  return j.dump(2) + "\n";
}

CriterionResult determinism_check(const SuiteConfig& reduced) {
  Timer tm;
  CriterionResult res;
  res.name = "determinism";
  const std::string r1 = suite_report_json(reduced, run_suite(reduced));
  const std::string r2 = suite_report_json(reduced, run_suite(reduced));
  CheckItem it = flag_item("byte-identical reports", r1 == r2);
  it.note = "fnv1a " + std::to_string(fnv1a(r1));
  res.checks.push_back(it);
  res.seconds = tm.elapsed();
  return res;
}

}  // namespace cfw
