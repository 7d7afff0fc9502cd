// dwde: command-line front end for deterministic walks in deterministic
// environments.

#include "dwde/config.hpp"
#include "dwde/error.hpp"
#include "dwde/exact.hpp"
#include "dwde/experiments.hpp"
#include "dwde/structure.hpp"
#include "dwde/walk.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

using namespace dwde;

namespace {

constexpr int kOk = 0;
constexpr int kInternal = 1;
constexpr int kConfig = 2;
constexpr int kInconsistent = 3;

int exit_code(Errc code) {
  switch (code) {
    case Errc::io_failure:
    case Errc::singular_system: return kInternal;
    default: return kConfig;
  }
}

json load_doc(const std::string& text) {
  if (!text.empty() && text.front() == '{') {
    try {
      return json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::config_error, e.what());
    }
  }
  return read_json_file(text);
}

MapSpec load_map(const std::string& arg) {
  if (auto named = named_map_spec(arg)) return *named;
  return map_from_json(load_doc(arg));
}

struct Inputs {
  std::string map = "doubling";
  std::string env;
  std::optional<std::uint64_t> env_seed;

  void add(CLI::App* app) {
    app->add_option("--map", map, "built-in map name or JSON file");
    app->add_option("--env", env, "environment JSON file or inline JSON")->required();
    app->add_option("--env-seed", env_seed, "environment seed (overrides the model's seed)");
  }

  MarkovIntervalMap build() const { return build_map(load_map(map)); }

  EnvironmentModel model(std::size_t cells) const {
    auto m = environment_from_json(load_doc(env), cells);
    if (env_seed) m.seed = *env_seed;
    return m;
  }

  // Environment index 0 of the model's seed, matching ensemble and classify.
  EnvironmentRealization realization(std::size_t cells) const {
    const auto m = model(cells);
    return realize(m, env_seed_for(m.seed, 0));
  }
};

json rational_json(const Rational& r) { return {{"exact", to_string(r)}, {"value", to_double(r)}}; }

void print(const json& j) { std::cout << j.dump(2) << "\n"; }

ScenarioConfig load_config(const std::string& path, const std::optional<std::uint64_t>& seed,
                           const std::optional<std::uint64_t>& env_seed) {
  auto config = load_scenario(path);
  if (seed) config.seeds.walk = *seed;
  if (env_seed) {
    config.seeds.env = *env_seed;
    config.environment.seed = *env_seed;
  }
  return config;
}

int finish_scenario(const ScenarioResult& res, const ScenarioConfig& config, const std::string& out_dir,
                    bool require_homogeneous) {
  std::cout << report_markdown(res);
  const std::string dir = out_dir.empty() ? config.outputs.dir : out_dir;
  if (!dir.empty()) {
    for (const auto& p : write_reports(res, dir, config.outputs.formats)) std::cerr << "wrote " << p << "\n";
  }
  if (!res.consistent) {
    std::cerr << "verdict consistency failure: Monte Carlo disagrees with the DP oracle\n";
    return kInconsistent;
  }
  if (require_homogeneous && !res.aggregate.homogeneous) {
    std::cerr << "zero-one scan: environments disagree\n";
    return kInconsistent;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic walks in deterministic environments"};
  app.require_subcommand(1);
  int status = kOk;

  // validate -------------------------------------------------------------
  auto* validate_cmd = app.add_subcommand("validate", "check a scenario, map or environment document");
  std::string v_config, v_map, v_env;
  bool v_print = false;
  validate_cmd->add_option("--config", v_config, "scenario JSON file");
  validate_cmd->add_option("--map", v_map, "map name or JSON file");
  validate_cmd->add_option("--env", v_env, "environment JSON file");
  validate_cmd->add_flag("--print", v_print, "print the canonical document");
  validate_cmd->callback([&] {
    if (!v_config.empty()) {
      const auto c = load_scenario(v_config);
      std::cout << "ok: scenario '" << c.name << "' (" << to_string(c.kind) << ")\n";
      if (v_print) print(scenario_to_json(c));
    }
    std::size_t cells = 0;
    if (!v_map.empty()) {
      const auto spec = load_map(v_map);
      const auto map = build_map(spec);
      cells = map.size();
      std::cout << "ok: map '" << map.name() << "' with " << map.size() << " cells"
                << (map.full_branch() ? ", full branches" : "") << "\n";
      if (v_print) print(map_to_json(spec));
    }
    if (!v_env.empty()) {
      const auto m = environment_from_json(load_doc(v_env), cells);
      const auto sb = symmetry_and_bounds(m);
      std::cout << "ok: environment (" << to_string(m.kind) << ", " << m.support.size()
                << " functions, M = " << sb.jump_bound_M << (sb.is_symmetric ? ", symmetric" : "") << ")\n";
      if (v_print) print(environment_to_json(m));
    }
    if (v_config.empty() && v_map.empty() && v_env.empty()) throw Error(Errc::config_error, "nothing to validate");
  });

  // simulate -------------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "simulate one trajectory");
  Inputs s_in;
  s_in.add(sim_cmd);
  std::size_t s_steps = 1000, s_thin = 1;
  std::string s_mode = "symbolic", s_x, s_out;
  std::uint64_t s_seed = 0;
  long long s_start = 0;
  sim_cmd->add_option("--steps", s_steps, "number of steps");
  sim_cmd->add_option("--mode", s_mode, "exact or symbolic");
  sim_cmd->add_option("--seed", s_seed, "walk seed");
  sim_cmd->add_option("--start", s_start, "start site");
  sim_cmd->add_option("--x", s_x, "start point p/q (exact mode; default drawn from the seed)");
  sim_cmd->add_option("--thin", s_thin, "keep every k-th site in the path output");
  sim_cmd->add_option("--out", s_out, "CSV file for the path (t,site)");
  sim_cmd->callback([&] {
    const auto map = s_in.build();
    const auto env = s_in.realization(map.size());
    SimulateOptions opt;
    opt.steps = s_steps;
    opt.mode = parse_sim_mode(s_mode);
    opt.walk_seed = s_seed;
    opt.thin = s_out.empty() ? 0 : s_thin;
    std::optional<Rational> x;
    if (opt.mode == SimMode::exact) x = s_x.empty() ? random_rational_point(s_seed) : parse_rational(s_x);
    const auto tr = simulate(map, env, s_start, x, opt);
    const auto& sm = tr.summary;
    json j = {{"steps", tr.steps}, {"mode", std::string(to_string(opt.mode))}, {"start_site", sm.start_site},
              {"final_site", sm.final_site}, {"min_site", sm.min_site}, {"max_site", sm.max_site}};
    j["first_return_time"] = sm.first_return_time ? json(*sm.first_return_time) : json(nullptr);
    j["last_return_time"] = sm.last_return_time ? json(*sm.last_return_time) : json(nullptr);
    if (x) j["x"] = to_string(*x);
    print(j);
    if (!s_out.empty()) {
      std::ostringstream csv;
      csv << "t,site\n";
      for (std::size_t k = 0; k < tr.sites.size(); ++k) csv << k * tr.thin << ',' << tr.sites[k] << '\n';
      write_text_file(s_out, csv.str());
    }
  });

  // ensemble -------------------------------------------------------------
  auto* ens_cmd = app.add_subcommand("ensemble", "many walks in many environments");
  Inputs e_in;
  e_in.add(ens_cmd);
  EnsembleOptions e_opt;
  std::string e_mode = "symbolic", e_out;
  ens_cmd->add_option("--envs", e_opt.n_envs, "number of environments");
  ens_cmd->add_option("--walks", e_opt.n_walks, "walks per environment");
  ens_cmd->add_option("--steps", e_opt.steps, "horizon");
  ens_cmd->add_option("--mode", e_mode, "exact or symbolic");
  ens_cmd->add_option("--seed", e_opt.master_seed, "walk master seed");
  ens_cmd->add_option("--start", e_opt.start_site, "start site");
  ens_cmd->add_option("--out", e_out, "CSV file with one row per walk");
  ens_cmd->callback([&] {
    const auto map = e_in.build();
    const auto model = e_in.model(map.size());
    e_opt.mode = parse_sim_mode(e_mode);
    const auto report = run_ensemble(map, model, e_opt);
    json envs = json::array();
    std::ostringstream csv;
    csv << "env_index,walk_index,final_site,min_site,max_site,first_return_time\n";
    for (const auto& s : report.envs) {
      envs.push_back({{"env_index", s.env_index}, {"env_seed", s.env_seed}, {"return_fraction", s.return_fraction},
                      {"final_quantiles", s.final_quantiles}, {"min_site", s.min_site}, {"max_site", s.max_site},
                      {"votes_right", s.votes_right}, {"votes_left", s.votes_left}});
      for (std::size_t w = 0; w < s.walks.size(); ++w) {
        const auto& r = s.walks[w];
        csv << s.env_index << ',' << w << ',' << r.final_site << ',' << r.min_site << ',' << r.max_site << ',';
        if (r.first_return_time) csv << *r.first_return_time;
        csv << '\n';
      }
    }
    print({{"environments", envs}});
    if (!e_out.empty()) write_text_file(e_out, csv.str());
  });

  // exact ----------------------------------------------------------------
  auto* exact_cmd = app.add_subcommand("exact", "exact oracles");
  exact_cmd->require_subcommand(1);

  auto* x_return = exact_cmd->add_subcommand("return", "P(return to start by the horizon)");
  Inputs xr_in;
  xr_in.add(x_return);
  long long xr_start = 0;
  std::size_t xr_horizon = 10;
  bool xr_approx = false;
  x_return->add_option("--start", xr_start, "start site");
  x_return->add_option("--horizon", xr_horizon, "horizon");
  x_return->add_flag("--approx", xr_approx, "double precision with tail trimming");
  x_return->callback([&] {
    const auto map = xr_in.build();
    const auto env = xr_in.realization(map.size());
    const long long M = std::max(1, symmetry_and_bounds(env.model()).jump_bound_M);
    const auto chain = build_site_chain(map, env, std::abs(xr_start) + static_cast<long long>(xr_horizon) * M + 1, true);
    if (xr_approx) {
      const auto p = return_prob_by_time_approx(chain, xr_start, xr_horizon);
      print({{"value", p.value}, {"dropped_mass", p.dropped_mass}});
    } else {
      print(rational_json(return_prob_by_time(chain, xr_start, xr_horizon)));
    }
  });

  auto* x_hit = exact_cmd->add_subcommand("hit", "P(reach b before a)");
  Inputs xh_in;
  xh_in.add(x_hit);
  long long xh_start = 0, xh_a = -10, xh_b = 10;
  x_hit->add_option("--start", xh_start, "start site");
  x_hit->add_option("--a", xh_a, "lower target");
  x_hit->add_option("--b", xh_b, "upper target");
  x_hit->callback([&] {
    const auto map = xh_in.build();
    const auto env = xh_in.realization(map.size());
    const long long W = std::max(std::abs(xh_a), std::abs(xh_b)) + 1;
    print(rational_json(hit_before(build_site_chain(map, env, W), xh_start, xh_a, xh_b)));
  });

  auto* x_taboo = exact_cmd->add_subcommand("taboo", "exact taboo hitting probability between blocks");
  Inputs xt_in;
  xt_in.add(x_taboo);
  TabooQuery xt_q;
  std::optional<long long> xt_taboo;
  x_taboo->add_option("--start-block", xt_q.start_block, "start block index");
  x_taboo->add_option("--target-block", xt_q.target_block, "target block index");
  x_taboo->add_option("--taboo-block", xt_taboo, "taboo block index");
  x_taboo->add_option("--horizon", xt_q.horizon, "horizon");
  x_taboo->callback([&] {
    const auto map = xt_in.build();
    const auto env = xt_in.realization(map.size());
    xt_q.taboo_block = xt_taboo;
    const long long M = std::max(1, symmetry_and_bounds(env.model()).jump_bound_M);
    const long long W = (std::abs(xt_q.start_block) + 1) * M + static_cast<long long>(xt_q.horizon) * M + 1;
    print(rational_json(taboo_hit_exact(build_site_chain(map, env, W), xt_q)));
  });

  auto* x_paths = exact_cmd->add_subcommand("paths", "first-hitting path counts c[n][k]");
  std::size_t xp_n = 8, xp_k = 4;
  x_paths->add_option("--n-max", xp_n, "largest n");
  x_paths->add_option("--k-max", xp_k, "largest k");
  x_paths->callback([&] {
    const auto t = path_counts(xp_n, xp_k);
    json rows = json::array();
    for (std::size_t n = 0; n <= xp_n; ++n) {
      json row = json::array();
      for (std::size_t k = 1; k <= xp_k; ++k) row.push_back(to_string(t.at(n, k)));
      rows.push_back(row);
    }
    print({{"n_max", xp_n}, {"k_max", xp_k}, {"c", rows}, {"columns", "k = 1..k_max"}});
  });

  auto* x_fp = exact_cmd->add_subcommand("first-passage", "truncated first-passage measure and its bound");
  Inputs xf_in;
  xf_in.add(x_fp);
  std::size_t xf_k = 1, xf_n = 10;
  std::string xf_dir = "down";
  x_fp->add_option("--k", xf_k, "target distance");
  x_fp->add_option("--n-max", xf_n, "largest n");
  x_fp->add_option("--direction", xf_dir, "down or up");
  x_fp->callback([&] {
    const auto map = xf_in.build();
    const auto env = xf_in.realization(map.size());
    const auto fp = first_passage_measure(map, env, xf_k, xf_n, xf_dir == "up" ? Direction::up : Direction::down);
    json j = rational_json(fp.value);
    j["bound"] = fp.bound ? json(*fp.bound) : json(nullptr);
    print(j);
  });

  auto* x_cyl = exact_cmd->add_subcommand("cylinders", "rank-(2n+1) return cylinders vs r^n (K-r)^n C(2n,n)");
  std::string xc_map = "triple";
  std::size_t xc_r = 2, xc_n = 4;
  x_cyl->add_option("--map", xc_map, "map name or JSON file");
  x_cyl->add_option("--r", xc_r, "number of +1 cells");
  x_cyl->add_option("--n", xc_n, "half length");
  x_cyl->callback([&] {
    const auto map = build_map(load_map(xc_map));
    const auto c = return_cylinder_count(map, xc_r, xc_n);
    print({{"enumerated", c.enumerated}, {"bound", to_string(c.counting_bound)}});
  });

  auto* x_cert = exact_cmd->add_subcommand("certificate", "transience certificate inf h > ln(4 r (K - r)) / 2");
  std::string xk_map = "triple", xk_env;
  std::size_t xk_r = 2;
  x_cert->add_option("--map", xk_map, "map name or JSON file");
  x_cert->add_option("--r", xk_r, "number of +1 cells");
  x_cert->add_option("--env", xk_env, "environment whose support is checked");
  x_cert->callback([&] {
    const auto map = build_map(load_map(xk_map));
    std::vector<TransitionFunction> support;
    if (!xk_env.empty()) support = environment_from_json(load_doc(xk_env), map.size()).support;
    const auto c = transience_certificate(map, xk_r, support);
    print({{"holds", c.holds}, {"direction", c.direction}, {"inf_h", c.inf_h}, {"threshold", c.threshold}});
  });

  auto* x_series = exact_cmd->add_subcommand("series", "return series under the weighted measure");
  Inputs xs_in;
  xs_in.add(x_series);
  std::string xs_theta = "1/2";
  std::size_t xs_j = 64, xs_cell = 0;
  x_series->add_option("--theta", xs_theta, "weight ratio in (0,1)");
  x_series->add_option("--j-max", xs_j, "largest J");
  x_series->add_option("--cell", xs_cell, "base cell");
  x_series->callback([&] {
    const auto map = xs_in.build();
    const auto env = xs_in.realization(map.size());
    const auto sd = series_diagnostic(map, env, xs_cell, parse_rational(xs_theta), xs_j);
    json inc = json::array(), sums = json::array();
    for (const auto& d : sd.increments) inc.push_back(to_double(d));
    for (const auto& s : sd.partial_sums) sums.push_back(to_double(s));
    json j = {{"period", sd.period}, {"normalizer", to_string(sd.normalizer)}, {"increments", inc},
              {"partial_sums", sums}, {"ratios", sd.ratios}};
    j["geometric_bound"] = sd.geometric_bound ? json(to_string(*sd.geometric_bound)) : json(nullptr);
    print(j);
  });

  auto* x_sol = exact_cmd->add_subcommand("solomon", "sign of E ln((1 - alpha) / alpha)");
  std::string xo_map = "doubling", xo_env;
  x_sol->add_option("--map", xo_map, "map name or JSON file");
  x_sol->add_option("--env", xo_env, "environment JSON file")->required();
  x_sol->callback([&] {
    const auto map = build_map(load_map(xo_map));
    const auto support = alpha_support(map, environment_from_json(load_doc(xo_env), map.size()));
    const auto r = solomon_classifier(support);
    json alphas = json::array();
    for (const auto& a : support) alphas.push_back({{"alpha", to_string(a.alpha)}, {"weight", to_string(a.weight)}});
    print({{"expectation", r.expectation}, {"exact_zero", r.exact_zero},
           {"verdict", std::string(to_string(r.verdict))}, {"alphas", alphas}});
  });

  // structure ------------------------------------------------------------
  auto* st_cmd = app.add_subcommand("structure", "finite-window structure of the skew product");
  st_cmd->require_subcommand(1);
  auto* st_graph = st_cmd->add_subcommand("graph", "edge list \"j,i -> k,i'\"");
  auto* st_classes = st_cmd->add_subcommand("classes", "communication classes in the certified interior");
  Inputs sg_in, sc_in;
  long long sg_w = 5, sc_w = 10;
  std::string sg_out;
  sg_in.add(st_graph);
  st_graph->add_option("--window", sg_w, "site window W");
  st_graph->add_option("--out", sg_out, "write the edge list to a file");
  st_graph->callback([&] {
    const auto map = sg_in.build();
    const auto text = edge_list(build_skew_graph(map, sg_in.realization(map.size()), sg_w));
    if (sg_out.empty()) {
      std::cout << text;
    } else {
      write_text_file(sg_out, text);
    }
  });
  sc_in.add(st_classes);
  st_classes->add_option("--window", sc_w, "site window W");
  st_classes->callback([&] {
    const auto map = sc_in.build();
    const auto classes = communication_classes(build_skew_graph(map, sc_in.realization(map.size()), sc_w));
    json arr = json::array();
    for (const auto& c : classes) {
      json nodes = json::array();
      for (const auto& n : c.nodes) nodes.push_back({n.cell, n.site});
      arr.push_back({{"size", c.nodes.size()}, {"truncated", c.truncated}, {"closed", c.closed}, {"nodes", nodes}});
    }
    print({{"window", sc_w}, {"classes", arr}});
  });
  auto* st_link = st_cmd->add_subcommand("linkage", "sufficient condition for the Linkage Property");
  std::string sl_map = "triple", sl_env;
  st_link->add_option("--map", sl_map, "map name or JSON file");
  st_link->add_option("--env", sl_env, "environment JSON file")->required();
  st_link->callback([&] {
    const auto map = build_map(load_map(sl_map));
    const auto support = environment_from_json(load_doc(sl_env), map.size()).support;
    const auto l = check_linkage(map, support);
    print({{"holds", l.holds}, {"witness", l.witness}});
  });

  // classify / scan / report ---------------------------------------------
  std::string c_config, c_out;
  std::optional<std::uint64_t> c_seed, c_env_seed;
  auto* cls_cmd = app.add_subcommand("classify", "label environments from a scenario");
  auto* scan_cmd = app.add_subcommand("scan", "zero-one homogeneity scan");
  for (auto* cmd : {cls_cmd, scan_cmd}) {
    cmd->add_option("--config", c_config, "scenario JSON file")->required();
    cmd->add_option("--seed", c_seed, "walk seed");
    cmd->add_option("--env-seed", c_env_seed, "environment seed");
    cmd->add_option("--out", c_out, "report directory");
  }
  cls_cmd->callback([&] {
    const auto config = load_config(c_config, c_seed, c_env_seed);
    status = finish_scenario(run_scenario(config), config, c_out, false);
  });
  scan_cmd->callback([&] {
    const auto config = load_config(c_config, c_seed, c_env_seed);
    status = finish_scenario(zero_one_scan(config), config, c_out, true);
  });

  auto* rep_cmd = app.add_subcommand("report", "run a scenario (or reload a result) and write reports");
  std::string r_config, r_result, r_out;
  std::vector<std::string> r_formats;
  std::optional<std::uint64_t> r_seed, r_env_seed;
  rep_cmd->add_option("--config", r_config, "scenario JSON file");
  rep_cmd->add_option("--result", r_result, "previously written JSON result");
  rep_cmd->add_option("--out", r_out, "report directory")->required();
  rep_cmd->add_option("--format", r_formats, "csv, json, markdown (default all)")->delimiter(',');
  rep_cmd->add_option("--seed", r_seed, "walk seed");
  rep_cmd->add_option("--env-seed", r_env_seed, "environment seed");
  rep_cmd->callback([&] {
    if (r_config.empty() == r_result.empty()) throw Error(Errc::config_error, "give exactly one of --config, --result");
    ScenarioResult res;
    if (!r_result.empty()) {
      res = result_from_json(read_json_file(r_result));
    } else {
      res = run_scenario(load_config(r_config, r_seed, r_env_seed));
    }
    for (const auto& p : write_reports(res, r_out, r_formats)) std::cout << p << "\n";
    if (!res.consistent) status = kInconsistent;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return status;
}
