// Command-line front end: compute, sweep, verify, oracle-check, wszt.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bisectorlab/io.hpp"
#include "bisectorlab/lab/experiment.hpp"
#include "bisectorlab/lab/report.hpp"
#include "bisectorlab/lab/verify.hpp"

namespace bl = bisectorlab;
namespace lab = bisectorlab::lab;
using bl::io::json;

namespace {

struct ComputeArgs {
  std::string input;
  std::vector<std::string> invariants;
  std::string backend = "exact";
  std::string heaviness = "curves";
  std::vector<std::size_t> K{3, 4};
  std::size_t m_cut = 4;
  bool oracle = false;
  bool timings = false;
  bool curves = false;
  std::string format = "json";
};

lab::InvariantOptions options_from(const ComputeArgs& a, std::size_t workers) {
  lab::InvariantOptions o;
  if (!a.invariants.empty()) o.invariants = lab::parse_invariants(a.invariants);
  o.heaviness = lab::parse_heaviness(a.heaviness);
  o.K = a.K;
  o.m_cut = a.m_cut;
  o.oracle = a.oracle;
  o.record_timings = a.timings;
  o.workers = workers;
  return o;
}

template <bl::Kernel K>
json report_for(const bl::PointSet<K>& set, const ComputeArgs& a, std::size_t workers) {
  auto j = lab::to_json(lab::compute_invariants(set, options_from(a, workers), json{{"source", a.input}}));
  if (a.curves) j["curve_table"] = bl::io::to_json(bl::build_curve_table(set, workers));
  return j;
}

int compute(const ComputeArgs& a, std::size_t workers) {
  const json doc = bl::io::read_json_file(a.input);
  const auto backend = lab::parse_backend(a.backend);
  if (a.format == "csv") {
    auto o = options_from(a, workers);
    const auto r = backend == lab::Backend::exact
                       ? lab::compute_invariants(bl::io::load_point_set(doc), o, json{{"source", a.input}})
                       : lab::compute_invariants(bl::io::load_point_set_qfloat(doc), o, json{{"source", a.input}});
    std::cout << lab::to_csv(r);
    return 0;
  }
  const json out = backend == lab::Backend::exact ? report_for(bl::io::load_point_set(doc), a, workers)
                                                  : report_for(bl::io::load_point_set_qfloat(doc), a, workers);
  std::cout << out.dump(2) << "\n";
  return 0;
}

int oracle_check(const std::string& input, const std::string& backend_name, std::size_t workers) {
  const json doc = bl::io::read_json_file(input);
  ComputeArgs a;
  a.input = input;
  a.oracle = true;
  const auto o = options_from(a, workers);
  auto run = [&](const auto& set) {
    const auto r = lab::compute_invariants(set, o, json{{"source", input}});
    std::cout << "n = " << r.n << "\n";
    const auto& oc = *r.oracle;
    auto line = [](const char* what, std::int64_t v) { std::cout << "agree  " << what << " = " << v << "\n"; };
    if (oc.distinct) line("|B|", *oc.distinct);
    if (oc.energy) line("Q", *oc.energy);
    for (const auto& [K, e] : oc.refined) line(("Q_" + std::to_string(K)).c_str(), e);
    if (oc.isoceles) line("Delta", *oc.isoceles);
    if (oc.heaviness_checked) std::cout << "agree  C(a, b) on every pair\n";
    for (const auto& s : r.skipped) std::cout << "skip   " << s << " (above cap)\n";
  };
  if (lab::parse_backend(backend_name) == lab::Backend::exact) {
    run(bl::io::load_point_set(doc));
  } else {
    run(bl::io::load_point_set_qfloat(doc));
  }
  return 0;
}

int wszt(const std::string& input) {
  const auto inst = bl::io::load_weighted_instance(bl::io::read_json_file(input));
  const auto rhs = bl::wszt_rhs_enclosure(inst.points, inst.lines);
  const json out = {{"point_norms", bl::io::to_json(bl::norms(inst.points))},
                    {"line_norms", bl::io::to_json(bl::norms(inst.lines))},
                    {"incidences", bl::io::count(bl::weighted_incidence_count(inst.points, inst.lines))},
                    {"rhs_lower", bl::io::scalar(rhs.lower)},
                    {"rhs_upper", bl::io::scalar(rhs.upper)},
                    {"band_facts", bl::dyadic_band_facts_hold(inst.points) && bl::dyadic_band_facts_hold(inst.lines)}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perpendicular bisector, isoceles and incidence invariants of planar point sets"};
  app.require_subcommand(1);
  std::size_t threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: BISECTORLAB_THREADS or all cores)");

  ComputeArgs ca;
  auto* c = app.add_subcommand("compute", "Invariant report for one point set (JSON array of [x, y])");
  c->add_option("pointset", ca.input, "Point set JSON")->required()->check(CLI::ExistingFile);
  c->add_option("--invariants", ca.invariants, "Subset of: bisectors refined richness pinned incidences bands wszt distances")
      ->delimiter(',');
  c->add_option("--backend", ca.backend)->check(CLI::IsMember({"exact", "qfloat"}));
  c->add_option("--heaviness", ca.heaviness)->check(CLI::IsMember({"curves", "circles"}));
  c->add_option("--K", ca.K, "Refinement levels for Q_K")->delimiter(',');
  c->add_option("--m-cut", ca.m_cut, "First dyadic band boundary");
  c->add_flag("--oracle", ca.oracle, "Cross-check against the brute-force oracles");
  c->add_flag("--timings", ca.timings, "Record wall-clock timings");
  c->add_flag("--curves", ca.curves, "Include the full curve table");
  c->add_option("--format", ca.format)->check(CLI::IsMember({"json", "csv"}));

  std::string config_path, out_dir;
  auto* s = app.add_subcommand("sweep", "Run an experiment config and write reports");
  s->add_option("config", config_path, "Experiment config JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--out", out_dir, "Output directory")->required();

  std::string suite = "all", json_out;
  std::uint64_t seed = 1;
  std::size_t seeds = 100;
  auto* v = app.add_subcommand("verify", "Run verification suites; exits 1 on any failure");
  v->add_option("--suite", suite)->check(CLI::IsMember({"all", "proposition", "shared_bisector", "cs_chain",
                                                        "delta_identity", "heavy_circle", "band_partition",
                                                        "wszt_ratio", "oracle_parity"}));
  v->add_option("--seed", seed);
  v->add_option("--seeds", seeds, "Repetitions per seeded family and size");
  v->add_option("--json", json_out, "Also write the full report here");

  std::string oracle_input, oracle_backend = "exact";
  auto* o = app.add_subcommand("oracle-check", "Compare every fast path with its oracle on one point set");
  o->add_option("pointset", oracle_input)->required()->check(CLI::ExistingFile);
  o->add_option("--backend", oracle_backend)->check(CLI::IsMember({"exact", "qfloat"}));

  std::string wszt_input;
  auto* w = app.add_subcommand("wszt", "Norms, incidences and bound for a weighted instance");
  w->add_option("instance", wszt_input)->required()->check(CLI::ExistingFile);

  CLI11_PARSE(app, argc, argv);
  const std::size_t workers = threads > 0 ? threads : bl::default_workers();

  try {
    if (*c) return compute(ca, workers);
    if (*s) {
      const auto cfg = lab::parse_experiment_config(bl::io::read_json_file(config_path));
      const auto result = lab::run_experiment(cfg, workers);
      lab::write_sweep(result, out_dir);
      std::cout << "wrote " << result.reports.size() << " reports to " << out_dir << "\n";
      return 0;
    }
    if (*v) {
      lab::VerifyOptions opts;
      opts.seed = seed;
      opts.seeds = seeds;
      opts.workers = workers;
      const auto report = lab::verify(lab::parse_suite(suite), opts);
      for (const auto& r : report.suites) {
        std::printf("%s %-16s %zu checks, %zu failures, %.1f s\n", r.passed() ? "PASS" : "FAIL", r.name.c_str(),
                    r.checks, r.failure_count, r.seconds);
        for (const auto& n : r.notes) std::printf("     %s\n", n.c_str());
        for (const auto& e : r.counterexamples) std::printf("     counterexample: %s\n", e.c_str());
      }
      if (!json_out.empty()) {
        std::ofstream out(json_out);
        out << lab::to_json(report).dump(2) << "\n";
      }
      return report.passed() ? 0 : 1;
    }
    if (*o) return oracle_check(oracle_input, oracle_backend, workers);
    if (*w) return wszt(wszt_input);
  } catch (const bl::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
