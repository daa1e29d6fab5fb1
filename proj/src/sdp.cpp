#include "qadv/sdp.hpp"

#include <cmath>
#include <stdexcept>

namespace qadv {

BlockMatrix zero_blocks(const std::vector<int>& block_dims) {
  BlockMatrix out;
  out.reserve(block_dims.size());
  for (int d : block_dims) out.push_back(Eigen::MatrixXd::Zero(d, d));
  return out;
}

BlockMatrix identity_blocks(const std::vector<int>& block_dims) {
  BlockMatrix out;
  out.reserve(block_dims.size());
  for (int d : block_dims) out.push_back(Eigen::MatrixXd::Identity(d, d));
  return out;
}

void SparseSym::add(int block, int row, int col, double value) {
  if (row > col) std::swap(row, col);
  entries.push_back({block, row, col, value});
}

double SparseSym::dot(const BlockMatrix& x) const {
  double acc = 0.0;
  for (const Entry& e : entries) {
    double v = e.value * x[e.block](e.row, e.col);
    acc += (e.row == e.col) ? v : 2.0 * v;
  }
  return acc;
}

void SparseSym::add_to(BlockMatrix& y, double scale) const {
  for (const Entry& e : entries) {
    y[e.block](e.row, e.col) += scale * e.value;
    if (e.row != e.col) y[e.block](e.col, e.row) += scale * e.value;
  }
}

Eigen::VectorXd StandardFormSdp::apply(const BlockMatrix& x) const {
  Eigen::VectorXd out(constraints.size());
  for (std::size_t i = 0; i < constraints.size(); ++i) out[i] = constraints[i].dot(x);
  return out;
}

BlockMatrix StandardFormSdp::adjoint(const Eigen::VectorXd& y) const {
  BlockMatrix out = zero_blocks(block_dims);
  for (std::size_t i = 0; i < constraints.size(); ++i) constraints[i].add_to(out, y[i]);
  return out;
}

double StandardFormSdp::objective(const BlockMatrix& x) const { return C.dot(x); }

NormalOperator build_normal_operator(const StandardFormSdp& sdp, double cutoff) {
  const int m = static_cast<int>(sdp.constraints.size());
  if (m == 0) throw std::runtime_error("normal operator: no constraints");

  // Gram matrix <A_i, A_k> via dense per-constraint scatter; constraints are
  // sparse so this is cheap relative to the solve itself.
  BlockMatrix scratch = zero_blocks(sdp.block_dims);
  Eigen::MatrixXd gram(m, m);
  for (int i = 0; i < m; ++i) {
    sdp.constraints[i].add_to(scratch, 1.0);
    for (int k = i; k < m; ++k) {
      double v = sdp.constraints[k].dot(scratch);
      gram(i, k) = v;
      gram(k, i) = v;
    }
    sdp.constraints[i].add_to(scratch, -1.0);
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("normal operator: eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();
  double lam_max = lam.cwiseAbs().maxCoeff();
  if (lam_max <= 0.0)
    throw std::runtime_error("normal operator: all constraint matrices are zero");

  NormalOperator op;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    if (std::abs(lam[i]) > cutoff * lam_max) {
      inv[i] = 1.0 / lam[i];
      ++op.rank;
    }
  }
  op.pinv = eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
  return op;
}

namespace {

bool exactly_diagonal(const Eigen::MatrixXd& v) {
  for (int c = 0; c < v.cols(); ++c)
    for (int r = 0; r < v.rows(); ++r)
      if (r != c && v(r, c) != 0.0) return false;
  return true;
}

bool all_finite(const BlockMatrix& m) {
  for (const Eigen::MatrixXd& b : m)
    if (!b.allFinite()) return false;
  return true;
}

}  // namespace

BlockMatrix project_psd(const BlockMatrix& v) {
  BlockMatrix out;
  out.reserve(v.size());
  for (const Eigen::MatrixXd& block : v) {
    if (block.rows() == 1 || exactly_diagonal(block)) {
      out.push_back(block.diagonal().cwiseMax(0.0).asDiagonal());
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
    if (eig.info() != Eigen::Success)
      throw std::runtime_error("psd projection: eigendecomposition failed");
    Eigen::VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
    Eigen::MatrixXd proj = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
    out.push_back(0.5 * (proj + proj.transpose()));
  }
  return out;
}

void admm_iterate(const StandardFormSdp& sdp, const NormalOperator& op, SdpState& state,
                  const SolveOptions& opts) {
  const double mu = opts.mu;

  // y = -(AA*)^+ (mu (A(X) - b) + A(S - C))
  Eigen::VectorXd rhs = mu * (sdp.apply(state.X) - sdp.b) + sdp.apply(state.S);
  {
    BlockMatrix cmat = zero_blocks(sdp.block_dims);
    sdp.C.add_to(cmat, 1.0);
    rhs -= sdp.apply(cmat);
  }
  state.y = -op.apply(rhs);

  // V = C - A*(y) - mu X
  BlockMatrix v = sdp.adjoint(state.y);
  for (std::size_t b = 0; b < v.size(); ++b) v[b] = -v[b] - mu * state.X[b];
  sdp.C.add_to(v, 1.0);

  state.S = project_psd(v);

  for (std::size_t b = 0; b < v.size(); ++b) {
    state.X[b] = (state.S[b] - v[b]) / mu;
    if (opts.round_tol > 0.0) {
      Eigen::MatrixXd& x = state.X[b];
      for (int c = 0; c < x.cols(); ++c)
        for (int r = 0; r < x.rows(); ++r) {
          if (std::abs(x(r, c)) <= opts.round_tol)
            x(r, c) = 0.0;
          else if (std::abs(x(r, c) - 1.0) <= opts.round_tol)
            x(r, c) = 1.0;
        }
    }
  }

  ++state.iteration;
  if (!all_finite(state.X) || !all_finite(state.S) || !state.y.allFinite())
    throw std::runtime_error("sdp solver diverged: non-finite iterate at iteration " +
                             std::to_string(state.iteration));

  state.primal_residual = (sdp.apply(state.X) - sdp.b).norm();
  BlockMatrix dual = sdp.adjoint(state.y);
  for (std::size_t b = 0; b < dual.size(); ++b) dual[b] = -dual[b] - state.S[b];
  sdp.C.add_to(dual, 1.0);
  double acc = 0.0;
  for (const Eigen::MatrixXd& b : dual) acc += b.squaredNorm();
  state.dual_residual = std::sqrt(acc);
}

SdpSolution solve(const StandardFormSdp& sdp, const SolveOptions& opts,
                  const std::function<void(const SdpState&)>& on_iterate) {
  NormalOperator op = build_normal_operator(sdp);

  SdpState state;
  state.X = zero_blocks(sdp.block_dims);
  state.S = identity_blocks(sdp.block_dims);
  state.y = Eigen::VectorXd::Zero(sdp.constraints.size());
  state.primal_residual = (sdp.apply(state.X) - sdp.b).norm();

  for (int it = 0; it < opts.max_iters; ++it) {
    admm_iterate(sdp, op, state, opts);
    if (on_iterate) on_iterate(state);
    if (opts.feas_tol > 0.0 && state.primal_residual <= opts.feas_tol) break;
  }

  SdpSolution sol;
  sol.X = state.X;
  sol.objective_value = sdp.objective(state.X);
  sol.primal_residual = state.primal_residual;
  sol.iterations_used = state.iteration;
  return sol;
}

}  // namespace qadv
