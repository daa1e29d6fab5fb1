#include "qadv/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qadv {

namespace {

std::string config_line(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "n_list=";
  for (std::size_t i = 0; i < cfg.n_list.size(); ++i)
    out << (i ? "|" : "") << cfg.n_list[i];
  out << " domain_size=" << cfg.domain_size << " reps=" << cfg.reps << " grid=";
  for (std::size_t i = 0; i < cfg.grid.size(); ++i)
    out << (i ? "|" : "") << cfg.grid[i];
  out << " seed=" << cfg.seed << " c=" << cfg.c << " mu=" << cfg.solver.mu
      << " round_tol=" << cfg.solver.round_tol;
  return out.str();
}

}  // namespace

InstanceResult run_instance(int n, int domain_size, std::uint64_t seed,
                            const std::vector<int>& grid, double c,
                            const SolveOptions& solver, double rank_tol,
                            DecidingVectorSet* keep_vectors) {
  if (grid.empty() || !std::is_sorted(grid.begin(), grid.end()) || grid.front() < 1)
    throw std::invalid_argument("iteration grid must be ascending and positive");

  InstanceResult res;
  res.n = n;
  res.seed = seed;
  res.f = random_function(n, domain_size, seed);

  StandardFormSdp sdp = build_adversary_sdp(res.f);
  SolveOptions opts = solver;
  opts.max_iters = grid.back();
  opts.feas_tol = 0.0;  // checkpoints need the full iteration count

  std::size_t next = 0;
  solve(sdp, opts, [&](const SdpState& state) {
    if (next >= grid.size() || state.iteration != grid[next]) return;
    ++next;
    SdpSolution snap;
    snap.X = state.X;
    snap.primal_residual = state.primal_residual;
    snap.iterations_used = state.iteration;
    DecidingVectorSet vs = extract_vectors(snap, res.f, rank_tol);
    WitnessVectors w = build_witnesses(vs, c);
    res.eps_at.emplace_back(state.iteration, numerical_error(w));
    if (next == grid.size()) {
      res.cert = certify(w);
      res.kappa_prime = size_and_max_rank(vs).max_rank;
      res.solve_residual = state.primal_residual;
      if (keep_vectors) *keep_vectors = std::move(vs);
    }
  });

  if (res.eps_at.size() != grid.size())
    throw std::runtime_error("solver finished before reaching every checkpoint");
  return res;
}

CorpusResult run_corpus(
    const ExperimentConfig& cfg,
    const std::function<void(const InstanceResult&, const DecidingVectorSet&)>&
        on_instance) {
  if (cfg.reps < 1) throw std::invalid_argument("rep count must be at least 1");
  CorpusResult corpus;
  corpus.config = cfg;
  std::uint64_t k = 0;
  for (int n : cfg.n_list) {
    for (int rep = 0; rep < cfg.reps; ++rep) {
      ++k;
      DecidingVectorSet vs;
      InstanceResult res = run_instance(n, cfg.domain_size, cfg.seed + k, cfg.grid,
                                        cfg.c, cfg.solver, cfg.rank_tol,
                                        on_instance ? &vs : nullptr);
      if (on_instance) on_instance(res, vs);
      corpus.instances.push_back(std::move(res));
    }
  }
  return corpus;
}

std::string fig1_csv(const CorpusResult& corpus) {
  std::ostringstream out;
  out << "# " << config_line(corpus.config) << "\n";
  out << "kind,n,T,seed,epsilon\n";
  for (int n : corpus.config.n_list) {
    for (int t : corpus.config.grid) {
      std::vector<double> eps;
      for (const InstanceResult& res : corpus.instances) {
        if (res.n != n) continue;
        for (const auto& [tt, e] : res.eps_at)
          if (tt == t) {
            out << "sample," << n << ',' << t << ',' << res.seed << ','
                << format_double(e) << "\n";
            eps.push_back(e);
          }
      }
      double mean = 0.0;
      for (double e : eps) mean += e;
      mean /= static_cast<double>(eps.size());
      double var = 0.0;
      if (eps.size() > 1) {
        for (double e : eps) var += (e - mean) * (e - mean);
        var /= static_cast<double>(eps.size() - 1);
      }
      out << "mean," << n << ',' << t << ",," << format_double(mean) << "\n";
      out << "std," << n << ',' << t << ",," << format_double(std::sqrt(var)) << "\n";
    }
  }
  return out.str();
}

std::string fig2_csv(const CorpusResult& corpus) {
  std::ostringstream out;
  out << "# " << config_line(corpus.config) << "\n";
  out << "n,seed,epsilon,threshold_kappa,threshold_best,pass,pass_scan,kappa,kappa_prime\n";
  for (const InstanceResult& res : corpus.instances) {
    const Certificate& cert = res.cert;
    out << res.n << ',' << res.seed << ',' << format_double(cert.epsilon) << ','
        << format_double(cert.threshold_at_kappa) << ','
        << format_double(cert.threshold) << ',' << (cert.pass_at_kappa ? 1 : 0) << ','
        << (cert.pass ? 1 : 0) << ',' << cert.kappa << ',' << res.kappa_prime << "\n";
  }
  return out.str();
}

Json to_json(const ExperimentConfig& cfg) {
  Json j;
  j["n_list"] = cfg.n_list;
  j["domain_size"] = cfg.domain_size;
  j["reps"] = cfg.reps;
  j["grid"] = cfg.grid;
  j["seed"] = cfg.seed;
  j["c"] = cfg.c;
  j["rank_tol"] = cfg.rank_tol;
  j["mu"] = cfg.solver.mu;
  j["round_tol"] = cfg.solver.round_tol;
  return j;
}

Json to_json(const CorpusResult& corpus) {
  Json j;
  j["config"] = to_json(corpus.config);
  Json rows = Json::array();
  for (const InstanceResult& res : corpus.instances) {
    Json row;
    row["n"] = res.n;
    row["seed"] = res.seed;
    row["function"] = to_json(res.f);
    Json eps = Json::array();
    for (const auto& [t, e] : res.eps_at) eps.push_back(Json::array({t, e}));
    row["eps_at"] = std::move(eps);
    row["certificate"] = to_json(res.cert);
    row["kappa_prime"] = res.kappa_prime;
    row["solve_residual"] = res.solve_residual;
    rows.push_back(std::move(row));
  }
  j["instances"] = std::move(rows);
  return j;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

}  // namespace qadv
