#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qadv/adversary.hpp"
#include "qadv/serialize.hpp"

namespace qadv {

struct ExperimentConfig {
  std::vector<int> n_list{5, 15, 25};
  int domain_size = 32;
  int reps = 20;
  std::vector<int> grid{100, 300, 1000, 3000};  // iteration checkpoints, ascending
  std::uint64_t seed = 1;                       // master seed
  double c = 100.0;
  double rank_tol = 1e-9;
  SolveOptions solver;  // max_iters is overridden by the last grid entry
};

/// One random instance solved once, with the witness overlap measured at
/// every checkpoint of the iteration grid and the certificate taken at the
/// final one.
struct InstanceResult {
  int n = 0;
  std::uint64_t seed = 0;
  BooleanFunction f;
  std::vector<std::pair<int, double>> eps_at;  // (T, epsilon), grid order
  Certificate cert;
  int kappa_prime = 0;  // largest per-index rank of the extracted set
  double solve_residual = 0.0;

  double eps_final() const { return eps_at.back().second; }
};

/// Solves a fresh random instance (function drawn from the given seed) and
/// checkpoints the pipeline at each grid value. The grid must be ascending
/// and non-empty; the solver runs exactly grid.back() iterations.
InstanceResult run_instance(int n, int domain_size, std::uint64_t seed,
                            const std::vector<int>& grid, double c,
                            const SolveOptions& solver, double rank_tol = 1e-9,
                            DecidingVectorSet* keep_vectors = nullptr);

struct CorpusResult {
  ExperimentConfig config;
  std::vector<InstanceResult> instances;  // n-major, rep-minor order
};

/// Runs reps instances per n with seeds master+1, master+2, ... in corpus
/// order. The optional callback sees each instance with its extracted
/// vector set before the set is discarded.
CorpusResult run_corpus(
    const ExperimentConfig& cfg,
    const std::function<void(const InstanceResult&, const DecidingVectorSet&)>&
        on_instance = nullptr);

/// Convergence table: one sample row per (n, T, seed) plus mean and std
/// rows per (n, T). Rows are sorted canonically so output is byte-stable.
std::string fig1_csv(const CorpusResult& corpus);

/// Certificate table at the final checkpoint: one row per instance with the
/// overlap, both thresholds, both pass flags, and the rank pair.
std::string fig2_csv(const CorpusResult& corpus);

Json to_json(const ExperimentConfig& cfg);
Json to_json(const CorpusResult& corpus);

double median(std::vector<double> values);

}  // namespace qadv
