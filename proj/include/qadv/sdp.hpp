#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace qadv {

/// Block-diagonal symmetric matrix variable: one dense symmetric matrix per
/// declared block.
using BlockMatrix = std::vector<Eigen::MatrixXd>;

BlockMatrix zero_blocks(const std::vector<int>& block_dims);
BlockMatrix identity_blocks(const std::vector<int>& block_dims);

/// Sparse symmetric data matrix in block coordinates. Each entry with
/// row < col stands for the pair of positions (row, col) and (col, row);
/// diagonal entries are stored once.
struct SparseSym {
  struct Entry {
    int block;
    int row;
    int col;
    double value;
  };
  std::vector<Entry> entries;

  void add(int block, int row, int col, double value);
  /// <M, X> = tr(M X) with the symmetric doubling of off-diagonal entries.
  double dot(const BlockMatrix& x) const;
  /// Y += scale * M (both symmetric halves).
  void add_to(BlockMatrix& y, double scale) const;
};

/// min tr(CX) s.t. tr(A_i X) = b_i, X block-diagonal PSD.
struct StandardFormSdp {
  std::vector<int> block_dims;
  SparseSym C;
  std::vector<SparseSym> constraints;
  Eigen::VectorXd b;

  /// (tr(A_1 X), ..., tr(A_m X)).
  Eigen::VectorXd apply(const BlockMatrix& x) const;
  /// sum_i y_i A_i as a block matrix.
  BlockMatrix adjoint(const Eigen::VectorXd& y) const;
  double objective(const BlockMatrix& x) const;
};

/// Pseudoinverse of the constraint Gram matrix AA*, computed once per
/// problem from a symmetric eigendecomposition with a relative cutoff.
struct NormalOperator {
  Eigen::MatrixXd pinv;
  int rank = 0;

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const { return pinv * v; }
};

/// Throws std::runtime_error when there are no constraints or all constraint
/// matrices are zero.
NormalOperator build_normal_operator(const StandardFormSdp& sdp, double cutoff = 1e-12);

struct SdpState {
  BlockMatrix X;
  BlockMatrix S;
  Eigen::VectorXd y;
  int iteration = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

/// Eigendecomposition clipped at zero; exactly diagonal blocks (including
/// 1x1) are clamped entrywise instead.
BlockMatrix project_psd(const BlockMatrix& v);

struct SolveOptions {
  int max_iters = 3000;
  double feas_tol = 0.0;   // 0 disables the residual stop; run all iterations
  double round_tol = 1e-9; // entrywise snap of X to exact 0/1
  double mu = 1.0;         // splitting penalty
};

/// One splitting iteration: dual update through the normal-operator
/// pseudoinverse, PSD projection of V = C - A*(y) - mu X for the dual slack,
/// X <- (S - V)/mu, then entrywise rounding of X. Throws on non-finite
/// iterates, naming the iteration.
void admm_iterate(const StandardFormSdp& sdp, const NormalOperator& op, SdpState& state,
                  const SolveOptions& opts);

struct SdpSolution {
  BlockMatrix X;
  double objective_value = 0.0;
  double primal_residual = 0.0;
  int iterations_used = 0;
};

/// Runs admm_iterate from X = 0, S = I until the iteration budget or the
/// primal feasibility tolerance is reached. `on_iterate`, when given, sees
/// the state after every iteration (used to sample mid-run iterates).
SdpSolution solve(const StandardFormSdp& sdp, const SolveOptions& opts = {},
                  const std::function<void(const SdpState&)>& on_iterate = nullptr);

}  // namespace qadv
