// Config-driven driver wiring the library modules into reproducible runs.
//
// Exit codes: 0 pass, 1 criteria failure, 2 config error, 3 factorization
// singular under --strict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "cfw/conservation.hpp"
#include "cfw/eds.hpp"
#include "cfw/report.hpp"
#include "cfw/suite.hpp"

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config_path;
  std::string out_dir;
  int threads = 0;
  bool strict = false;
};

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw cfw::ConfigError("cannot open config file: " + path);
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw cfw::ConfigError("config parse error in " + path + ": " + e.what());
  }
}

template <typename T>
T field(const json& j, const std::string& dotted, T def) {
  const json* cur = &j;
  size_t pos = 0;
  std::string key = dotted;
  while (true) {
    size_t dot = key.find('.');
    std::string head = key.substr(0, dot);
    if (!cur->contains(head)) return def;
    cur = &(*cur)[head];
    if (dot == std::string::npos) break;
    key = key.substr(dot + 1);
    (void)pos;
  }
  try {
    return cur->get<T>();
  } catch (const json::exception& e) {
    throw cfw::ConfigError("config field '" + dotted + "': " + e.what());
  }
}

cfw::SymmetricPair pair_from(const json& cfg) {
  const std::string name = field<std::string>(cfg, "pair.name", "sun_son");
  const int n = field<int>(cfg, "pair.n", 3);
  return cfw::builtin_pair(name, n);
}

cfw::Grid grid_from(const json& cfg, const cfw::SymmetricPair& p) {
  const double ext = field<double>(cfg, "grid.half_extent", 1.6);
  const int nodes = field<int>(cfg, "grid.nodes", 33);
  if (nodes % 2 == 0) throw cfw::ConfigError("grid.nodes must be odd");
  return cfw::Grid::make_uniform(p.rank(), ext, nodes);
}

cfw::RationalLoop loop_from(const json& cfg, const cfw::SymmetricPair& p) {
  if (!cfg.contains("loop")) return cfw::RationalLoop::identity(p.n);
  const auto pole = field<std::vector<double>>(cfg, "loop.pole", {1.0, 0.55});
  if (pole.size() != 2) throw cfw::ConfigError("loop.pole must be [re, im]");
  const unsigned seed = field<unsigned>(cfg, "loop.seed", 7);
  return cfw::make_reality_loop({pole[0], pole[1]},
                                cfw::loop_seed_vector(p.n, seed), p);
}

std::string out_dir_of(const Options& opt, const json& cfg) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  return field<std::string>(cfg, "out", "out");
}

ordered_json check_json(const cfw::CheckResult& c) {
  return {{"name", c.name},
          {"residual", cfw::format_double(c.residual)},
          {"tol", cfw::format_double(c.tol)},
          {"pass", c.pass}};
}

int cmd_pair_check(const Options& opt, const json& cfg) {
  cfw::SymmetricPair p = pair_from(cfg);
  auto checks = cfw::validate_pair(p);
  ordered_json rep;
  rep["command"] = "pair-check";
  rep["pair"] = {{"name", p.name}, {"n", p.n}, {"rank", p.rank()}};
  rep["checks"] = ordered_json::array();
  bool all = true;
  for (const auto& c : checks) {
    rep["checks"].push_back(check_json(c));
    all = all && c.pass;
    std::printf("%-32s %-10s residual=%.3e\n", c.name.c_str(),
                c.pass ? "pass" : "FAIL", c.residual);
  }
  rep["pass"] = all;
  cfw::OutputWriter w(out_dir_of(opt, cfg));
  w.write("pair_check.json", rep.dump(2) + "\n");
  w.write_manifest();
  return all ? 0 : 1;
}

// Shared by `dress` (with residual report) and `export` (files only).
int cmd_dress(const Options& opt, const json& cfg, bool with_report) {
  cfw::SymmetricPair p = pair_from(cfg);
  cfw::Grid g = grid_from(cfg, p);
  cfw::RationalLoop loop = loop_from(cfg, p);
  cfw::DressOptions dopt;
  dopt.strict = opt.strict;
  dopt.birkhoff.condition_cutoff =
      field<double>(cfg, "dress.condition_cutoff", dopt.birkhoff.condition_cutoff);
  cfw::DressedGrid d = cfw::dress_grid(p, g, loop, {}, dopt);
  cfw::GridField v = cfw::extract_solution(d);

  const double delta = field<double>(cfg, "verify.delta", 0.1);
  cfw::FrameField E1 = d.frame(1.0), Em1 = d.frame(-1.0), E0 = d.frame(0.0);
  cfw::GridField psi = cfw::curved_flat(E1, Em1);
  cfw::GridField f = cfw::cartan_lift(E1, E0);
  cfw::GridField Y =
      cfw::flat_abelian(d.frame(delta), d.frame(-delta), d.frame(delta / 2),
                        d.frame(-delta / 2), E0, delta);

  cfw::OutputWriter w(out_dir_of(opt, cfg));
  w.write("v.csv", cfw::csv_of_field(v));
  w.write("psi.csv", cfw::csv_of_field(psi));
  w.write("f.csv", cfw::csv_of_field(f));
  w.write("y.csv", cfw::csv_of_field(Y));

  ordered_json rep;
  rep["command"] = with_report ? "dress" : "export";
  rep["grid"] = {{"nodes", g.N[0]}, {"half_extent", g.xmax[0]}};
  rep["holes"] = d.holes;
  rep["max_condition"] = cfw::format_double(d.max_condition);
  rep["max_solve_residual"] = cfw::format_double(d.max_solve_residual);
  bool ok = d.holes.empty();
  if (with_report) {
    const double uu0 = cfw::uu0_residual(v, p).max;
    const double embed = cfw::cartan_embedding_residual(psi, p);
    rep["first_order_residual"] = cfw::format_double(uu0);
    rep["cartan_embedding_residual"] = cfw::format_double(embed);
    rep["v_max"] = cfw::format_double(cfw::max_norm(v));
  }
  rep["pass"] = ok;
  w.write("dress_report.json", rep.dump(2) + "\n");
  w.write_manifest();
  std::printf("%s: %ld nodes, %zu holes, max condition %.3e\n",
              with_report ? "dress" : "export", g.num_nodes(), d.holes.size(),
              d.max_condition);
  return ok ? 0 : 1;
}

cfw::SuiteConfig suite_config_from(const json& cfg) {
  cfw::SuiteConfig sc;
  sc.seed = field<unsigned>(cfg, "seed", 7);
  const auto pole = field<std::vector<double>>(cfg, "loop.pole", {1.0, 0.55});
  if (pole.size() != 2) throw cfw::ConfigError("loop.pole must be [re, im]");
  sc.pole = {pole[0], pole[1]};
  sc.extent = field<double>(cfg, "grid.half_extent", 1.6);
  sc.vacuum_nodes = field<int>(cfg, "verify.vacuum_nodes", 33);
  sc.dressed_nodes = field<int>(cfg, "verify.dressed_nodes", 65);
  sc.flow_nodes = field<int>(cfg, "verify.flow_nodes", 33);
  sc.flow_slices = field<int>(cfg, "flow.slices", 9);
  sc.flow_t_half = field<double>(cfg, "flow.t_half", 0.05);
  sc.depth = field<int>(cfg, "verify.depth", 6);
  sc.delta = field<double>(cfg, "verify.delta", 0.1);
  sc.convergence = field<bool>(cfg, "verify.convergence", true);
  sc.with_geometry = field<bool>(cfg, "verify.with_geometry", true);
  sc.with_flows = field<bool>(cfg, "verify.with_flows", true);
  return sc;
}

int cmd_verify(const Options& opt, const json& cfg) {
  cfw::SuiteConfig sc = suite_config_from(cfg);
  auto results = cfw::run_suite(sc);
  if (field<bool>(cfg, "verify.determinism", false)) {
    cfw::SuiteConfig red = sc;
    red.vacuum_nodes = 17;
    red.dressed_nodes = 17;
    red.convergence = false;
    red.with_flows = false;
    red.with_geometry = false;
    results.push_back(cfw::determinism_check(red));
  }
  bool all = true;
  for (const auto& r : results) {
    std::printf("%-40s %-6s (%.1fs)\n", r.name.c_str(),
                r.pass() ? "pass" : "FAIL", r.seconds);
    for (const auto& c : r.checks)
      if (!c.pass)
        std::printf("  failed: %s value=%.3e tol=%.3e %s\n", c.name.c_str(),
                    c.value, c.tol, c.note.c_str());
    all = all && r.pass();
  }
  cfw::OutputWriter w(out_dir_of(opt, cfg));
  w.write("verify_report.json", cfw::suite_report_json(sc, results));
  w.write_manifest();
  return all ? 0 : 1;
}

int cmd_flows(const Options& opt, const json& cfg) {
  cfw::SymmetricPair p = pair_from(cfg);
  cfw::Grid g = grid_from(cfg, p);
  cfw::RationalLoop loop = loop_from(cfg, p);
  const int bidx = field<int>(cfg, "flow.b_index", 0);
  if (bidx < 0 || bidx >= p.rank())
    throw cfw::ConfigError("flow.b_index out of range");
  const int jdeg = field<int>(cfg, "flow.j", 3);
  const double th = field<double>(cfg, "flow.t_half", 0.05);
  const int slices = field<int>(cfg, "flow.slices", 9);
  cfw::DressOptions dopt;
  dopt.strict = opt.strict;
  cfw::FlowFamily F =
      cfw::make_flow_family(p, g, loop, p.a[bidx], jdeg, -th, th, slices, dopt);
  cfw::FlowReport fr = cfw::flow_residual(F);
  const int nlevel = field<int>(cfg, "flow.density_level", 2);
  const int axis = field<int>(cfg, "flow.density_axis", 0);
  const cfw::Mat c = p.a[std::min(1, p.rank() - 1)];
  cfw::FluxReport xr = cfw::flux_identity_residual(F, c, nlevel, axis);
  cfw::ConservedReport cr = cfw::conserved_quantity(F, c, nlevel, axis);

  cfw::OutputWriter w(out_dir_of(opt, cfg));
  w.write("v_t.csv", cfw::csv_of_time_fields(F.v, F.times));
  w.write("conserved.csv", cfw::csv_of_series(F.times, cr.integral));
  ordered_json rep;
  rep["command"] = "flows";
  rep["j"] = jdeg;
  rep["slices"] = slices;
  rep["flow_residual"] = cfw::format_double(fr.t_residual);
  rep["slice_system_residual"] = cfw::format_double(fr.x_residual);
  rep["flux_residual"] = cfw::format_double(xr.flux_residual);
  rep["stepping_residual"] = cfw::format_double(xr.stepping_residual);
  rep["conserved_drift"] = cfw::format_double(cr.drift);
  rep["boundary_flux_bound"] = cfw::format_double(cr.boundary_flux_bound);
  w.write("flows_report.json", rep.dump(2) + "\n");
  w.write_manifest();
  std::printf("flows: flow residual %.3e, flux residual %.3e, drift %.3e\n",
              fr.t_residual, xr.flux_residual, cr.drift);
  return 0;
}

int cmd_eds_report(const Options& opt, const json& cfg) {
  std::vector<int> ns = field<std::vector<int>>(cfg, "eds.n", {2, 3, 4});
  const unsigned seed = field<unsigned>(cfg, "seed", 7);
  ordered_json rep;
  rep["command"] = "eds-report";
  rep["pairs"] = ordered_json::array();
  bool all = true;
  for (int n : ns) {
    cfw::SymmetricPair p = cfw::builtin_pair("sun_son", n);
    cfw::CartanReport r = cfw::involutivity_report(p, seed + n, 50);
    ordered_json e;
    e["n"] = n;
    e["dimH"] = r.dimH;
    e["polar_r"] = r.polar_r;
    e["c"] = r.c;
    e["s"] = r.s;
    e["cF"] = r.cF;
    e["codim"] = r.codim;
    e["regular_flag"] = r.regular_flag;
    e["involutive"] = r.involutive;
    e["probe_regular"] = r.probe_regular;
    rep["pairs"].push_back(e);
    all = all && r.involutive;
    std::printf("sun_son n=%d: s=(", n);
    for (size_t k = 0; k < r.s.size(); ++k)
      std::printf("%d%s", r.s[k], k + 1 < r.s.size() ? "," : "");
    std::printf("), codim=%d, c(F)=%d, involutive=%s\n", r.codim, r.cF,
                r.involutive ? "yes" : "no");
  }
  rep["pass"] = all;
  cfw::OutputWriter w(out_dir_of(opt, cfg));
  w.write("eds_report.json", rep.dump(2) + "\n");
  w.write_manifest();
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Loop-group solution workbench for rank-r first-order systems"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "JSON config file");
  app.add_option("--out", opt.out_dir, "output directory (overrides config)");
  app.add_option("--threads", opt.threads, "worker thread cap");
  app.add_flag("--strict", opt.strict,
               "treat singular factorization nodes as fatal");

  auto* sub_pair = app.add_subcommand("pair-check", "validate the pair");
  auto* sub_dress = app.add_subcommand("dress", "factorize and export fields");
  auto* sub_verify = app.add_subcommand("verify", "run the residual suite");
  auto* sub_flows = app.add_subcommand("flows", "time-flow residual study");
  auto* sub_eds = app.add_subcommand("eds-report", "Cartan characters/test");
  auto* sub_export = app.add_subcommand("export", "write field CSVs only");
  for (auto* s : app.get_subcommands({})) s->fallthrough();

  CLI11_PARSE(app, argc, argv);
  if (opt.threads > 0) Eigen::setNbThreads(opt.threads);

  try {
    const json cfg = load_config(opt.config_path);
    if (sub_pair->parsed()) return cmd_pair_check(opt, cfg);
    if (sub_dress->parsed()) return cmd_dress(opt, cfg, true);
    if (sub_verify->parsed()) return cmd_verify(opt, cfg);
    if (sub_flows->parsed()) return cmd_flows(opt, cfg);
    if (sub_eds->parsed()) return cmd_eds_report(opt, cfg);
    if (sub_export->parsed()) return cmd_dress(opt, cfg, false);
  } catch (const cfw::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cfw::FactorizationSingular& e) {
    std::fprintf(stderr, "factorization singular: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
