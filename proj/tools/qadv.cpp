// Command-line front end for the adversary-dual pipeline.
//
// Exit codes: 0 success (certificate/simulation passes where applicable),
// 1 usage error, 2 numerical failure (solver divergence, unverified
// projection, bad artifacts), 3 certificate or simulation failure.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qadv/compress.hpp"
#include "qadv/experiment.hpp"
#include "qadv/serialize.hpp"
#include "qadv/simulate.hpp"

namespace fs = std::filesystem;
using namespace qadv;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

BooleanFunction obtain_function(const std::string& input, const std::string& random_spec,
                                std::uint64_t seed) {
  if (!input.empty() && !random_spec.empty())
    throw UsageError("--input and --random are mutually exclusive");
  if (!input.empty()) return parse_function(read_text_file(input));
  if (random_spec.empty()) throw UsageError("provide a function via --input or --random");
  int n = 0;
  long domain = 0;
  char extra = 0;
  if (std::sscanf(random_spec.c_str(), "%d,%ld%c", &n, &domain, &extra) != 2)
    throw UsageError("--random expects 'n,domain_size', e.g. --random 5,32");
  return random_function(n, domain, seed);
}

Json unwrap(const Json& artifact, const char* key) {
  return artifact.contains(key) ? artifact.at(key) : artifact;
}

DecidingVectorSet load_vectors(const std::string& path) {
  if (path.empty()) throw UsageError("this subcommand needs --input <vectors.json>");
  return vectors_from_json(unwrap(read_json_file(path), "vectors"));
}

void write_artifact(const fs::path& dir, const std::string& name, const Json& config,
                    const char* key, Json payload) {
  Json artifact;
  artifact["config"] = config;
  artifact[key] = std::move(payload);
  write_json_file((dir / name).string(), artifact);
}

void print_certificate(const char* label, const Certificate& cert) {
  std::cout << label << ": epsilon=" << format_double(cert.epsilon)
            << " kappa=" << cert.kappa << " kappa_star=" << cert.kappa_star
            << " threshold_best=" << format_double(cert.threshold)
            << " threshold_at_kappa=" << format_double(cert.threshold_at_kappa)
            << " pass=" << (cert.pass ? 1 : 0)
            << " pass_at_kappa=" << (cert.pass_at_kappa ? 1 : 0) << "\n";
}

void print_simulation(const SimulationReport& report) {
  std::cout << "simulation: reflection=" << report.reflection
            << " theta=" << format_double(report.theta)
            << " delta=" << format_double(report.delta)
            << " inputs=" << report.rows.size()
            << " success=" << (report.overall_success ? 1 : 0) << "\n";
}

struct SolveArgs {
  std::string input, random_spec, out = ".";
  std::uint64_t seed = 1;
  int iters = 3000;
  double feas_tol = 0.0;
  double round_tol = 1e-9;
  double mu = 1.0;
  double c = 100.0;
  double rank_tol = 1e-9;
  bool both = false;
  bool dump_sdp = false;
};

int run_solve(const SolveArgs& a) {
  BooleanFunction f = obtain_function(a.input, a.random_spec, a.seed);

  Json cfg;
  cfg["subcommand"] = "solve";
  cfg["input"] = a.input;
  cfg["random"] = a.random_spec;
  cfg["seed"] = a.seed;
  cfg["iters"] = a.iters;
  cfg["feas_tol"] = a.feas_tol;
  cfg["round_tol"] = a.round_tol;
  cfg["mu"] = a.mu;
  cfg["c"] = a.c;
  cfg["rank_tol"] = a.rank_tol;

  fs::path dir(a.out);
  fs::create_directories(dir);

  StandardFormSdp sdp = build_adversary_sdp(f);
  if (a.dump_sdp) write_artifact(dir, "sdp.json", cfg, "sdp", to_json(sdp));

  SolveOptions opts;
  opts.max_iters = a.iters;
  opts.feas_tol = a.feas_tol;
  opts.round_tol = a.round_tol;
  opts.mu = a.mu;
  SdpSolution sol = solve(sdp, opts);
  std::cout << "objective=" << format_double(sol.objective_value)
            << " iterations=" << sol.iterations_used
            << " primal_residual=" << format_double(sol.primal_residual) << "\n";

  DecidingVectorSet vs = extract_vectors(sol, f, a.rank_tol);
  SizeRank sr = size_and_max_rank(vs);
  std::cout << "vectors: m=" << vs.m << " size=" << format_double(sr.size)
            << " kappa_prime=" << sr.max_rank
            << " deviation=" << format_double(verify_deciding(vs)) << "\n";

  WitnessVectors w = build_witnesses(vs, a.c);
  Certificate cert = certify(w);
  print_certificate("certificate", cert);

  write_artifact(dir, "solution.json", cfg, "solution", to_json(sol));
  write_artifact(dir, "vectors.json", cfg, "vectors", to_json(vs));
  write_artifact(dir, "certificate.json", cfg, "certificate", to_json(cert));

  if (a.both) {
    DecidingVectorSet flipped = vs;
    flipped.f = negate(f);
    Certificate cert_neg = certify(build_witnesses(flipped, a.c));
    print_certificate("certificate(negated)", cert_neg);
    write_artifact(dir, "certificate_negated.json", cfg, "certificate",
                   to_json(cert_neg));
  }
  return cert.pass ? 0 : 3;
}

struct CertifyArgs {
  std::string input, out = ".";
  double c = 100.0;
};

int run_certify(const CertifyArgs& a) {
  DecidingVectorSet vs = load_vectors(a.input);
  Json cfg;
  cfg["subcommand"] = "certify";
  cfg["input"] = a.input;
  cfg["c"] = a.c;

  Certificate cert = certify(build_witnesses(vs, a.c));
  print_certificate("certificate", cert);

  fs::path dir(a.out);
  fs::create_directories(dir);
  write_artifact(dir, "certificate.json", cfg, "certificate", to_json(cert));
  return cert.pass ? 0 : 3;
}

struct CompressArgs {
  std::string input, out = ".", mode = "jl";
  std::uint64_t seed = 1;
  int max_attempts = 100;
  double c = 100.0;
  double theta = 0.0;  // 0 selects the pipeline default
  double delta = 0.04;
  double rank_tol = 1e-9;
};

int run_compress(const CompressArgs& a) {
  DecidingVectorSet vs = load_vectors(a.input);
  Json cfg;
  cfg["subcommand"] = "compress";
  cfg["input"] = a.input;
  cfg["mode"] = a.mode;
  cfg["seed"] = a.seed;
  cfg["max_attempts"] = a.max_attempts;
  cfg["c"] = a.c;
  cfg["theta"] = a.theta;
  cfg["delta"] = a.delta;
  cfg["rank_tol"] = a.rank_tol;

  fs::path dir(a.out);
  fs::create_directories(dir);

  SimulationParams params;
  params.theta = a.theta;
  params.delta = a.delta;

  if (a.mode == "exact") {
    DecidingVectorSet small = exact_compress(vs, a.rank_tol);
    std::cout << "exact compression: m " << vs.m << " -> " << small.m
              << " deviation=" << format_double(verify_deciding(small)) << "\n";
    write_artifact(dir, "compressed.json", cfg, "vectors", to_json(small));
    SimulationReport report =
        simulate_function(build_witnesses(small, a.c), ReflectionKind::exact, 0, params);
    print_simulation(report);
    write_text_file((dir / "simulation.csv").string(),
                    simulation_csv(report, "compress=exact c=" + std::to_string(a.c)));
    return report.overall_success ? 0 : 3;
  }
  if (a.mode != "jl") throw UsageError("--compress must be 'exact' or 'jl'");

  WitnessVectors w = build_witnesses(vs, a.c);
  Certificate cert = certify(w);
  CompressedWitnesses cw = jl_compress(w, cert.kappa, a.seed, a.max_attempts);
  CompressedChecks checks = check_compressed(cw);
  std::cout << "jl compression: m " << cw.m << " -> " << cw.N
            << " requested_N=" << cw.jl.requested_N << " attempts=" << cw.jl.attempts
            << " verified=" << (cw.jl.verified ? 1 : 0)
            << " checks=" << (checks.all_pass ? 1 : 0) << "\n";

  Json artifact;
  artifact["config"] = cfg;
  artifact["compressed"] = to_json(cw);
  artifact["checks"] = to_json(checks);
  write_json_file((dir / "compressed.json").string(), artifact);

  if (!cw.jl.verified) {
    std::cerr << "error: no verified projection within " << a.max_attempts
              << " attempts\n";
    return 2;
  }
  SimulationReport report = simulate_function(cw, params);
  print_simulation(report);
  write_text_file((dir / "simulation.csv").string(),
                  simulation_csv(report, "compress=jl seed=" + std::to_string(a.seed)));
  return report.overall_success ? 0 : 3;
}

struct SimulateArgs {
  std::string input, compressed, out = ".", reflection = "exact";
  int kappa_star = 0;
  std::uint64_t seed = 1;
  int max_attempts = 100;
  double c = 100.0;
  double theta = 0.0;
  double delta = 0.04;
};

int run_simulate(const SimulateArgs& a) {
  Json cfg;
  cfg["subcommand"] = "simulate";
  cfg["input"] = a.input;
  cfg["compressed"] = a.compressed;
  cfg["reflection"] = a.reflection;
  cfg["kappa_star"] = a.kappa_star;
  cfg["seed"] = a.seed;
  cfg["c"] = a.c;
  cfg["theta"] = a.theta;
  cfg["delta"] = a.delta;

  SimulationParams params;
  params.theta = a.theta;
  params.delta = a.delta;

  ReflectionKind kind = reflection_kind_from(a.reflection);
  SimulationReport report;
  if (kind == ReflectionKind::jl) {
    CompressedWitnesses cw;
    if (!a.compressed.empty()) {
      cw = compressed_from_json(unwrap(read_json_file(a.compressed), "compressed"));
    } else {
      WitnessVectors w = build_witnesses(load_vectors(a.input), a.c);
      cw = jl_compress(w, certify(w).kappa, a.seed, a.max_attempts);
      if (!cw.jl.verified) {
        std::cerr << "error: no verified projection within " << a.max_attempts
                  << " attempts\n";
        return 2;
      }
    }
    report = simulate_function(cw, params);
  } else {
    WitnessVectors w = build_witnesses(load_vectors(a.input), a.c);
    int kappa_star = a.kappa_star;
    if (kind == ReflectionKind::svd && kappa_star == 0) {
      Certificate cert = certify(w);
      kappa_star = cert.pass ? cert.kappa_star : cert.kappa;
    }
    report = simulate_function(w, kind, kappa_star, params);
  }
  print_simulation(report);

  fs::path dir(a.out);
  fs::create_directories(dir);
  write_text_file((dir / "simulation.csv").string(),
                  simulation_csv(report, "reflection=" + a.reflection));
  write_artifact(dir, "simulation.json", cfg, "simulation", to_json(report));
  return report.overall_success ? 0 : 3;
}

struct ExperimentArgs {
  std::string mode = "both", out = ".";
  std::vector<int> n_list{5, 15, 25};
  std::vector<int> grid{100, 300, 1000, 3000};
  int domain_size = 32;
  int reps = 20;
  std::uint64_t seed = 1;
  double c = 100.0;
  double mu = 1.0;
  double round_tol = 1e-9;
  double rank_tol = 1e-9;
};

int run_experiment(const ExperimentArgs& a) {
  ExperimentConfig cfg;
  cfg.n_list = a.n_list;
  cfg.domain_size = a.domain_size;
  cfg.reps = a.reps;
  cfg.grid = a.grid;
  cfg.seed = a.seed;
  cfg.c = a.c;
  cfg.rank_tol = a.rank_tol;
  cfg.solver.mu = a.mu;
  cfg.solver.round_tol = a.round_tol;

  const std::size_t total = cfg.n_list.size() * static_cast<std::size_t>(cfg.reps);
  std::size_t done = 0;
  CorpusResult corpus = run_corpus(cfg, [&](const InstanceResult& res,
                                            const DecidingVectorSet&) {
    ++done;
    std::cerr << "[" << done << "/" << total << "] n=" << res.n << " seed=" << res.seed
              << " eps=" << format_double(res.eps_final())
              << " pass_at_kappa=" << (res.cert.pass_at_kappa ? 1 : 0) << "\n";
  });

  fs::path dir(a.out);
  fs::create_directories(dir);
  if (a.mode == "fig1" || a.mode == "both")
    write_text_file((dir / "fig1.csv").string(), fig1_csv(corpus));
  if (a.mode == "fig2" || a.mode == "both")
    write_text_file((dir / "fig2.csv").string(), fig2_csv(corpus));
  write_json_file((dir / "experiment.json").string(), to_json(corpus));

  for (int n : cfg.n_list) {
    std::vector<double> finals;
    for (const InstanceResult& res : corpus.instances)
      if (res.n == n) finals.push_back(res.eps_final());
    std::cout << "n=" << n << " median_eps_final=" << format_double(median(finals))
              << "\n";
  }
  int passes = 0;
  for (const InstanceResult& res : corpus.instances)
    if (res.cert.pass_at_kappa) ++passes;
  std::cout << "pass_at_kappa: " << passes << "/" << corpus.instances.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"general adversary dual pipeline: solve, certify, compress, simulate"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve_cmd = app.add_subcommand(
      "solve", "solve the dual SDP, extract vectors, certify");
  solve_cmd->add_option("--input", sa.input, "function description file");
  solve_cmd->add_option("--random", sa.random_spec, "random instance 'n,domain_size'");
  solve_cmd->add_option("--seed", sa.seed, "seed for --random");
  solve_cmd->add_option("--iters", sa.iters, "solver iteration count");
  solve_cmd->add_option("--feas-tol", sa.feas_tol, "stop once the residual drops below");
  solve_cmd->add_option("--round-tol", sa.round_tol, "entrywise 0/1 snap tolerance");
  solve_cmd->add_option("--mu", sa.mu, "splitting penalty");
  solve_cmd->add_option("--c", sa.c, "witness scale parameter");
  solve_cmd->add_option("--rank-tol", sa.rank_tol, "relative eigenvalue cutoff");
  solve_cmd->add_flag("--both", sa.both, "also certify the negated function");
  solve_cmd->add_flag("--sdp", sa.dump_sdp, "also write sdp.json");
  solve_cmd->add_option("--out", sa.out, "output directory");

  CertifyArgs ca;
  CLI::App* certify_cmd =
      app.add_subcommand("certify", "certificate for an existing vector set");
  certify_cmd->add_option("--input", ca.input, "vectors.json")->required();
  certify_cmd->add_option("--c", ca.c, "witness scale parameter");
  certify_cmd->add_option("--out", ca.out, "output directory");

  CompressArgs pa;
  CLI::App* compress_cmd =
      app.add_subcommand("compress", "compress a vector set, then simulate");
  compress_cmd->add_option("--input", pa.input, "vectors.json")->required();
  compress_cmd->add_option("--compress", pa.mode, "exact or jl")
      ->check(CLI::IsMember({"exact", "jl"}));
  compress_cmd->add_option("--seed", pa.seed, "projection seed");
  compress_cmd->add_option("--max-attempts", pa.max_attempts, "projection resamples");
  compress_cmd->add_option("--c", pa.c, "witness scale parameter");
  compress_cmd->add_option("--theta", pa.theta, "phase threshold (0 = pipeline default)");
  compress_cmd->add_option("--delta", pa.delta, "phase estimation error budget");
  compress_cmd->add_option("--rank-tol", pa.rank_tol, "relative rank cutoff");
  compress_cmd->add_option("--out", pa.out, "output directory");

  SimulateArgs ma;
  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "phase-profile simulation of the algorithm");
  simulate_cmd->add_option("--input", ma.input, "vectors.json");
  simulate_cmd->add_option("--compressed", ma.compressed, "compressed.json (jl)");
  simulate_cmd->add_option("--reflection", ma.reflection, "exact, svd, or jl")
      ->check(CLI::IsMember({"exact", "svd", "jl"}));
  simulate_cmd->add_option("--kappa-star", ma.kappa_star,
                           "svd truncation rank (0 = from certificate)");
  simulate_cmd->add_option("--seed", ma.seed, "projection seed for inline jl");
  simulate_cmd->add_option("--max-attempts", ma.max_attempts, "projection resamples");
  simulate_cmd->add_option("--c", ma.c, "witness scale parameter");
  simulate_cmd->add_option("--theta", ma.theta, "phase threshold (0 = pipeline default)");
  simulate_cmd->add_option("--delta", ma.delta, "phase estimation error budget");
  simulate_cmd->add_option("--out", ma.out, "output directory");

  ExperimentArgs ea;
  CLI::App* experiment_cmd =
      app.add_subcommand("experiment", "random-instance convergence and certificate tables");
  experiment_cmd->add_option("--mode", ea.mode, "fig1, fig2, or both")
      ->check(CLI::IsMember({"fig1", "fig2", "both"}));
  experiment_cmd->add_option("--n-list", ea.n_list, "input sizes")->delimiter(',');
  experiment_cmd->add_option("--grid", ea.grid, "iteration checkpoints")->delimiter(',');
  experiment_cmd->add_option("--domain-size", ea.domain_size, "inputs per instance");
  experiment_cmd->add_option("--reps", ea.reps, "instances per size");
  experiment_cmd->add_option("--seed", ea.seed, "master seed");
  experiment_cmd->add_option("--c", ea.c, "witness scale parameter");
  experiment_cmd->add_option("--mu", ea.mu, "splitting penalty");
  experiment_cmd->add_option("--round-tol", ea.round_tol, "entrywise 0/1 snap tolerance");
  experiment_cmd->add_option("--rank-tol", ea.rank_tol, "relative eigenvalue cutoff");
  experiment_cmd->add_option("--out", ea.out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return run_solve(sa);
    if (certify_cmd->parsed()) return run_certify(ca);
    if (compress_cmd->parsed()) return run_compress(pa);
    if (simulate_cmd->parsed()) return run_simulate(ma);
    if (experiment_cmd->parsed()) return run_experiment(ea);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
