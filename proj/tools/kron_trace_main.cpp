#include <chrono>
#include <cmath>
#include <cstdint>
#include <deque>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "krontrace/acceptance.hpp"
#include "krontrace/besov.hpp"
#include "krontrace/errors.hpp"
#include "krontrace/estimates.hpp"
#include "krontrace/generators.hpp"
#include "krontrace/json_io.hpp"
#include "krontrace/parallel.hpp"
#include "krontrace/potential.hpp"
#include "krontrace/sampling.hpp"
#include "krontrace/trace.hpp"
#include "krontrace/whitney.hpp"

namespace {

using namespace kt;

struct DomainArgs {
  std::string kind;
  int level = 4;
  int width = 16;
  int height = 32;
  int rays = 5;
  int edges = 8;
  int slit = 0;
  std::vector<double> cond;
  bool absorbing = false;
  double decay = 1.0;
};

void add_domain_options(CLI::App* cmd, DomainArgs& a, bool kind_positional) {
  if (kind_positional)
    cmd->add_option("kind", a.kind, "domain family")
        ->required()
        ->check(CLI::IsMember(
            {"star", "path", "sg-slit", "half-strip", "grid-slit"}));
  cmd->add_option("--level", a.level, "gasket level");
  cmd->add_option("--width", a.width, "lattice width");
  cmd->add_option("--height", a.height, "lattice height");
  cmd->add_option("--rays", a.rays, "star rays (unit conductance)");
  cmd->add_option("--c", a.cond, "explicit star conductances");
  cmd->add_option("--edges", a.edges, "path edge count");
  cmd->add_option("--slit", a.slit, "grid slit length (default width/2)");
  cmd->add_flag("--absorbing", a.absorbing, "tie the strip's far row to an absorbing ghost");
  cmd->add_option("--decay", a.decay, "per-depth conductance decay (stress case)");
}

GeneratedDomain make_domain(const DomainArgs& a) {
  if (a.kind == "star") {
    std::vector<double> c =
        a.cond.empty() ? std::vector<double>((size_t)a.rays, 1.0) : a.cond;
    return gen_star(c);
  }
  if (a.kind == "path") return gen_path(a.edges);
  if (a.kind == "sg-slit") return gen_sg_slit(a.level);
  if (a.kind == "half-strip") {
    FarMode fm = a.absorbing ? FarMode::absorbing : FarMode::reflecting;
    if (a.decay != 1.0)
      return gen_half_strip_attenuated(a.width, a.height, fm, a.decay);
    return gen_half_strip(a.width, a.height, fm);
  }
  if (a.kind == "grid-slit")
    return gen_grid_slit(a.width, a.slit > 0 ? a.slit : a.width / 2);
  throw UsageError("unknown domain kind '" + a.kind + "'");
}

double default_psi_exponent(const GeneratedDomain& dom) {
  if (dom.kind == "sg-slit") return std::log(5.0) / std::log(2.0);
  return 2.0;
}

VertexMeasure resolve_measure(const GeneratedDomain& dom,
                              const std::string& which, SolverConfig cfg) {
  if (which == "uniform")
    return VertexMeasure{dom.sigma_uniform, MeasureRole::sigma};
  if (which == "harmonic")
    return harmonic_measure(dom.net, dom.deep_vertex, cfg);
  throw UsageError("measure must be 'uniform' or 'harmonic'");
}

// farthest vertex from the boundary by hop count, for loaded networks
int deepest_vertex(const ResistanceNetwork& net) {
  std::vector<int> dist(net.n, -1);
  std::deque<int> q;
  for (int b : net.boundary) {
    dist[b] = 0;
    q.push_back(b);
  }
  int best = net.interior.empty() ? 0 : net.interior[0];
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (auto& [w, c] : net.adj[v]) {
      (void)c;
      if (dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      if (dist[w] > dist[best]) best = w;
      q.push_back(w);
    }
  }
  return best;
}

std::string stem_of(const std::string& path) {
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0)
    return path.substr(0, path.size() - 5);
  return path;
}

std::string join_dir(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  if (dir.back() == '/') return dir + name;
  return dir + "/" + name;
}

struct RunLog {
  std::string command;
  std::uint64_t seed = 0;
  double tol = 1e-12;
  std::string domain;  // prebuilt JSON fragment, may be empty
  std::vector<std::pair<std::string, std::string>> artifacts;  // role, path
  std::vector<std::pair<std::string, const Report*>> reports;
  std::vector<std::pair<std::string, double>> timings;
  std::vector<CriterionResult> criteria;

  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  void mark(const std::string& label) {
    auto now = std::chrono::steady_clock::now();
    timings.push_back(
        {label, std::chrono::duration<double>(now - t0).count()});
    t0 = now;
  }
};

std::string domain_fragment(const GeneratedDomain& dom) {
  std::ostringstream os;
  os << "{\"kind\": \"" << json_escape(dom.kind) << "\", \"level\": "
     << dom.level << ", \"width\": " << dom.width << ", \"height\": "
     << dom.height << ", \"vertices\": " << dom.net.n << ", \"boundary\": "
     << dom.net.boundary_count() << "}";
  return os.str();
}

// The manifest is the one artifact allowed to differ between reruns: wall
// clock timings live here and nowhere else.
void write_manifest(const std::string& path, const RunLog& log) {
  std::ostringstream os;
  os << "{\n  \"command\": \"" << json_escape(log.command) << "\",\n"
     << "  \"seed\": " << log.seed << ",\n"
     << "  \"solver\": {\"tol\": " << json_num(log.tol)
     << ", \"threads\": " << thread_count() << "},\n";
  os << "  \"domain\": " << (log.domain.empty() ? "null" : log.domain)
     << ",\n  \"artifacts\": [";
  for (size_t i = 0; i < log.artifacts.size(); ++i)
    os << (i ? ", " : "") << "{\"role\": \""
       << json_escape(log.artifacts[i].first) << "\", \"path\": \""
       << json_escape(log.artifacts[i].second) << "\"}";
  os << "],\n  \"reports\": [";
  for (size_t i = 0; i < log.reports.size(); ++i) {
    const Report& r = *log.reports[i].second;
    os << (i ? ", " : "") << "\n    {\"name\": \"" << json_escape(r.name)
       << "\", \"pass\": " << (r.pass ? "true" : "false")
       << ", \"min\": " << json_num(r.min_value)
       << ", \"max\": " << json_num(r.max_value)
       << ", \"ratio\": " << json_num(r.ratio);
    if (r.has_fit) os << ", \"exponent\": " << json_num(r.fit.exponent);
    os << "}";
  }
  os << "],\n  \"criteria\": [";
  for (size_t i = 0; i < log.criteria.size(); ++i) {
    const CriterionResult& c = log.criteria[i];
    os << (i ? ", " : "") << "\n    {\"id\": " << c.id << ", \"name\": \""
       << json_escape(c.name) << "\", \"pass\": "
       << (c.pass ? "true" : "false") << ", \"detail\": \""
       << json_escape(c.detail) << "\"}";
  }
  os << "],\n  \"timings_s\": [";
  for (size_t i = 0; i < log.timings.size(); ++i)
    os << (i ? ", " : "") << "{\"step\": \""
       << json_escape(log.timings[i].first) << "\", \"seconds\": "
       << json_num(log.timings[i].second) << "}";
  os << "]\n}\n";
  write_file_atomic(path, os.str());
}

void emit_report(RunLog& log, const std::string& stem, const std::string& tag,
                 const Report& rep) {
  std::string base = tag.empty() ? stem : stem + "-" + tag;
  write_file_atomic(base + ".json", report_to_json(rep));
  write_file_atomic(base + ".csv", report_to_csv(rep));
  log.artifacts.push_back({rep.name + " json", base + ".json"});
  log.artifacts.push_back({rep.name + " csv", base + ".csv"});
}

int cmd_gen(const DomainArgs& args, const std::string& out, RunLog& log) {
  GeneratedDomain dom = make_domain(args);
  log.domain = domain_fragment(dom);
  log.mark("generate");
  std::string stem = stem_of(out);
  write_file_atomic(stem + ".json", network_to_json(dom.net));
  write_file_atomic(stem + ".geom.json", geometry_to_json(dom));
  log.artifacts.push_back({"network", stem + ".json"});
  log.artifacts.push_back({"geometry", stem + ".geom.json"});
  log.mark("write");
  write_manifest(stem + ".manifest.json", log);
  return 0;
}

int cmd_trace(const std::string& input, const std::string& out,
              const std::string& measure, SolverConfig cfg, RunLog& log) {
  ResistanceNetwork net = network_from_json(read_file(input));
  log.mark("load");
  TraceForm tf = schur_trace(net, cfg);
  if (measure == "uniform") {
    tf.measure.mass.assign((size_t)tf.b, 1.0 / tf.b);
    tf.measure.role = MeasureRole::sigma;
  } else if (measure == "harmonic") {
    tf.measure = harmonic_measure(net, deepest_vertex(net), cfg);
  } else {
    throw UsageError("measure must be 'uniform' or 'harmonic'");
  }
  log.mark("trace");
  std::string stem = stem_of(out);
  write_file_atomic(stem + ".json", trace_to_json(tf));
  log.artifacts.push_back({"trace", stem + ".json"});
  log.mark("write");
  write_manifest(stem + ".manifest.json", log);
  return 0;
}

struct ReportArgs {
  std::string verb;
  DomainArgs dom;
  std::string measure;  // empty = verb default
  double psi_exponent = 0;  // 0 = domain default
  double eps = 0.125;
  std::uint64_t seed = 0;
};

int cmd_report(const ReportArgs& ra, const std::string& out, SolverConfig cfg,
               RunLog& log) {
  GeneratedDomain dom = make_domain(ra.dom);
  log.domain = domain_fragment(dom);
  log.mark("generate");

  bool wants_harmonic = ra.verb == "jump" || ra.verb == "killing" ||
                        ra.verb == "exit" || ra.verb == "heatkernel" ||
                        ra.verb == "green-hm";
  std::string measure =
      ra.measure.empty() ? (wants_harmonic ? "harmonic" : "uniform")
                         : ra.measure;
  double beta = ra.psi_exponent > 0 ? ra.psi_exponent
                                    : default_psi_exponent(dom);
  ScaleFunction psi = ScaleFunction::power(beta);
  std::string stem = stem_of(out);

  // reports that only need the geometry and a measure
  if (ra.verb == "doubling") {
    Report hm = hm_doubling_report(dom, {dom.deep_vertex}, 32, cfg);
    Report cd = cap_doubling_report(dom, 16, cfg);
    log.mark("compute");
    emit_report(log, stem, "", hm);
    emit_report(log, stem, "capdbl", cd);
    log.reports = {{"", &hm}, {"", &cd}};
    write_manifest(stem + ".manifest.json", log);
    return 0;
  }
  if (ra.verb == "capdensity") {
    Report cd = cap_density_report(dom, psi, 16, cfg);
    log.mark("compute");
    emit_report(log, stem, "", cd);
    log.reports = {{"", &cd}};
    write_manifest(stem + ".manifest.json", log);
    return 0;
  }

  VertexMeasure sigma = resolve_measure(dom, measure, cfg);
  ThetaField th(dom.geom, psi, sigma, dom.net.m0);

  if (ra.verb == "green-hm") {
    // the scale field must be built over the pole's own hitting measure
    VertexMeasure om = resolve_measure(dom, "harmonic", cfg);
    ThetaField thw(dom.geom, psi, om, dom.net.m0);
    Report rep = green_hm_report(dom, thw, dom.deep_vertex, 16, cfg);
    log.mark("compute");
    emit_report(log, stem, "", rep);
    log.reports = {{"", &rep}};
    write_manifest(stem + ".manifest.json", log);
    return 0;
  }

  if (ra.verb == "besov") {
    BesovKernel kern = besov_kernel(th);
    TraceForm tf = schur_trace(dom.net, cfg);
    auto bf = boundary_fields(dom, 50, ra.seed);
    auto intf = interior_fields(dom, 50, ra.seed, cfg);
    Report cmp = comparability_report(tf, kern, sigma.mass, bf);
    Report ts = theta_scaling_report(dom, th, 64);
    Report vd = vd_report(dom, sigma, 64);
    Report l2 = l2_restriction_report(dom.net, sigma.mass, intf);
    log.mark("compute");
    emit_report(log, stem, "", cmp);
    emit_report(log, stem, "theta", ts);
    emit_report(log, stem, "vd", vd);
    emit_report(log, stem, "l2", l2);
    log.reports = {{"", &cmp}, {"", &ts}, {"", &vd}, {"", &l2}};
    write_manifest(stem + ".manifest.json", log);
    return 0;
  }

  if (ra.verb == "whitney") {
    WhitneyCover cov = build_cover(dom, ra.eps);
    PartitionOfUnity pou = partition_of_unity(dom, cov);
    BesovKernel kern = besov_kernel(th);
    auto bf = boundary_fields(dom, 50, ra.seed);
    auto intf = interior_fields(dom, 50, ra.seed, cfg);
    Report ext = extension_report(dom, cov, pou, kern, sigma.mass, bf);
    Report res = restriction_report(dom.net, kern, intf);
    Report cs = cover_stats_report(dom, cov);
    log.mark("compute");
    write_file_atomic(stem + ".cover.json", cover_to_json(dom, cov));
    log.artifacts.push_back({"cover", stem + ".cover.json"});
    emit_report(log, stem, "", ext);
    emit_report(log, stem, "restriction", res);
    emit_report(log, stem, "cover", cs);
    log.reports = {{"", &ext}, {"", &res}, {"", &cs}};
    write_manifest(stem + ".manifest.json", log);
    return 0;
  }

  // the remaining verbs work on the trace form
  TraceForm tf = schur_trace(dom.net, cfg);
  Report rep;
  if (ra.verb == "jump") {
    rep = jump_kernel_report(tf, th);
  } else if (ra.verb == "killing") {
    rep = killing_report(tf, sigma);
  } else if (ra.verb == "exit") {
    rep = exit_time_report(tf, th, admissible_radii(dom), 32);
  } else if (ra.verb == "heatkernel") {
    rep = hk_report(tf, th, admissible_radii(dom), 12, 10);
  } else {
    throw UsageError("unknown report verb '" + ra.verb + "'");
  }
  log.mark("compute");
  emit_report(log, stem, "", rep);
  log.reports = {{"", &rep}};
  write_manifest(stem + ".manifest.json", log);
  return 0;
}

int cmd_suite(const std::string& out_dir, RunLog& log) {
  AcceptanceOptions opt;
  opt.on_result = [](const CriterionResult& c) {
    std::printf("[%2d/15] %s %-22s %s\n", c.id, c.pass ? "PASS" : "FAIL",
                c.name.c_str(), c.detail.c_str());
    std::fflush(stdout);
  };
  log.criteria = run_acceptance(opt);
  log.mark("criteria");
  bool all = true;
  for (const auto& c : log.criteria) all = all && c.pass;
  std::printf("%s (%zu criteria)\n", all ? "ALL PASS" : "FAILURES PRESENT",
              log.criteria.size());
  write_manifest(join_dir(out_dir, "manifest.json"), log);
  return all ? 0 : 1;
}

int cmd_export(const DomainArgs& args, const std::string& out_dir,
               const std::string& measure, double eps, SolverConfig cfg,
               RunLog& log) {
  GeneratedDomain dom = make_domain(args);
  log.domain = domain_fragment(dom);
  log.mark("generate");
  TraceForm tf = schur_trace(dom.net, cfg);
  tf.measure = resolve_measure(dom, measure.empty() ? "uniform" : measure, cfg);
  WhitneyCover cov = build_cover(dom, eps);
  log.mark("compute");
  struct Item {
    const char* role;
    std::string path;
    std::string body;
  };
  std::vector<Item> items = {
      {"network", join_dir(out_dir, "network.json"), network_to_json(dom.net)},
      {"geometry", join_dir(out_dir, "geometry.json"), geometry_to_json(dom)},
      {"trace", join_dir(out_dir, "trace.json"), trace_to_json(tf)},
      {"cover", join_dir(out_dir, "cover.json"), cover_to_json(dom, cov)},
  };
  for (const Item& it : items) {
    write_file_atomic(it.path, it.body);
    log.artifacts.push_back({it.role, it.path});
  }
  log.mark("write");
  write_manifest(join_dir(out_dir, "manifest.json"), log);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"boundary traces of resistance networks: Schur reduction, "
               "jump kernels, Besov seminorms, scale estimates"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  double tol = 1e-12;
  app.add_option("--seed", seed, "seed for every random draw")
      ->capture_default_str();
  app.add_option("--tol", tol, "linear solver tolerance")
      ->capture_default_str();

  DomainArgs gen_args;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "generate a domain to JSON");
  add_domain_options(gen, gen_args, true);
  gen->add_option("-o,--output", gen_out, "output network JSON")->required();

  std::string trace_in, trace_out, trace_measure = "uniform";
  auto* trace = app.add_subcommand("trace", "reduce a network to its boundary trace");
  trace->add_option("input", trace_in, "network JSON")->required();
  trace->add_option("-o,--output", trace_out, "output trace JSON")->required();
  trace->add_option("--measure", trace_measure,
                    "boundary measure to attach: uniform|harmonic");

  ReportArgs rep_args;
  std::string rep_out;
  auto* rep = app.add_subcommand("report", "run one diagnostic report");
  rep->add_option("verb", rep_args.verb, "which report")
      ->required()
      ->check(CLI::IsMember({"besov", "whitney", "doubling", "capdensity",
                             "jump", "killing", "exit", "heatkernel",
                             "green-hm"}));
  add_domain_options(rep, rep_args.dom, true);
  rep->add_option("--measure", rep_args.measure,
                  "uniform|harmonic (default depends on the verb)");
  rep->add_option("--psi-exponent", rep_args.psi_exponent,
                  "scale function exponent (default: 2, or log5/log2 on the gasket)");
  rep->add_option("--eps", rep_args.eps, "whitney cover parameter");
  rep->add_option("-o,--output", rep_out, "output report JSON")->required();

  std::string suite_kind, suite_levels, suite_out = ".";
  auto* suite = app.add_subcommand("suite", "run the full acceptance battery");
  suite->add_option("kind", suite_kind, "recorded in the manifest");
  suite->add_option("--levels", suite_levels, "recorded in the manifest");
  suite->add_option("-o,--output", suite_out, "manifest directory");

  DomainArgs exp_args;
  std::string exp_out, exp_measure;
  double exp_eps = 0.125;
  auto* exp = app.add_subcommand(
      "export", "write network, geometry, trace, and cover for a domain");
  add_domain_options(exp, exp_args, true);
  exp->add_option("--measure", exp_measure, "uniform|harmonic");
  exp->add_option("--eps", exp_eps, "whitney cover parameter");
  exp->add_option("-o,--output", exp_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  RunLog log;
  for (int i = 0; i < argc; ++i)
    log.command += std::string(i ? " " : "") + argv[i];
  log.seed = seed;
  log.tol = tol;
  rep_args.seed = seed;
  SolverConfig cfg;
  cfg.tol = tol;

  try {
    if (gen->parsed()) return cmd_gen(gen_args, gen_out, log);
    if (trace->parsed())
      return cmd_trace(trace_in, trace_out, trace_measure, cfg, log);
    if (rep->parsed()) return cmd_report(rep_args, rep_out, cfg, log);
    if (suite->parsed()) return cmd_suite(suite_out, log);
    if (exp->parsed())
      return cmd_export(exp_args, exp_out, exp_measure, exp_eps, cfg, log);
  } catch (const kt::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << "error: no subcommand\n";
  return 2;
}
