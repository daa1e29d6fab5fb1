#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "qadv/adversary.hpp"

namespace qadv {

/// Real embedding of a complex vector set: v -> [Re v; Im v], doubling the
/// dimension. Real parts of all same-index inner products are preserved, so
/// a deciding set stays deciding and its size is unchanged.
/// Input: per input x (canonical order), an n x m complex matrix whose row
/// j-1 is v_{x,j}.
DecidingVectorSet realify(const BooleanFunction& f,
                          const std::vector<Eigen::MatrixXcd>& vectors);

/// Per bit index, rewrites every vector in the coordinates of an orthonormal
/// basis of the 1-input span at that index (0-input vectors are projected
/// onto the span), then zero-pads to the largest such rank. Same-index inner
/// products involving a 1-input vector are preserved exactly; the size never
/// grows.
DecidingVectorSet exact_compress(const DecidingVectorSet& vs, double rank_tol = 1e-9);

struct JlProjection {
  int N = 0;  // compressed dimension actually used
  int d = 0;  // source dimension
  std::int64_t requested_N = 0;  // ceil(8 ln(|family|+1)/eps^2) + 1
  Eigen::MatrixXd S;    // N x d
  double epsilon = 0.0;
  bool verified = false;
  std::uint64_t seed = 0;
  int attempts = 0;
};

/// Gaussian projection (i.i.d. entries, variance 1/N) resampled until every
/// pair drawn from family-plus-origin satisfies both the squared-distance
/// condition (within a factor 1 +- eps) and the inner-product condition
/// (|<Su,Sv> - <u,v>| <= 2 eps (||u||^2 + ||v||^2)). Attempt k seeds the
/// generator with seed + k; the lowest verifying attempt wins, and after
/// max_attempts the least-violating attempt is returned with verified=false.
///
/// When the requested dimension is at least d, no random projection is
/// needed: the identity map preserves everything exactly and is returned
/// verified with N = d.
JlProjection sample_jl_matrix(int d, double epsilon,
                              const std::vector<Eigen::VectorXd>& family,
                              int max_attempts = 100, std::uint64_t seed = 0);

/// Witnesses after compressing the vector register: the marked coordinate is
/// kept and every (bit index, bit value) slice is pushed through S.
struct CompressedWitnesses {
  BooleanFunction f;
  int n = 0;
  int m = 0;      // source vector dimension
  int N = 0;      // compressed vector dimension
  double c = 0.0;
  double A = 0.0;
  int kappa = 0;  // rank of the 1-input witness family

  std::vector<int> one_inputs;
  std::vector<int> zero_inputs;
  std::vector<Eigen::VectorXd> psi_c;   // parallel to one_inputs, dim 1+2nN
  std::vector<Eigen::VectorXd> phi_c;   // parallel to zero_inputs
  std::vector<Eigen::VectorXd> zeta_c;  // kappa compressed basis witnesses

  Eigen::MatrixXd alpha;  // kappa x n1: zeta_j = sum_x alpha(j,x) psi_x
  /// Registered projection family entries zeta_{j,i,b} (source dimension m),
  /// flattened as ((j-1) n + (i-1)) * 2 + b.
  std::vector<Eigen::VectorXd> components;
  JlProjection jl;

  double epsilon_target = 0.0;  // min(1/(4 c kappa), 1/(32 sqrt(c) (c+1) A^2 sqrt(kappa)))
  double theta = 0.0;           // 1/(4 sqrt(c) A)
  double delta = 0.0;           // 1/25

  AlgorithmSpace space() const { return {n, N}; }
};

/// Builds the orthonormal witness basis zeta (column-pivoted
/// orthogonalization of the 1-input witnesses), its expansion coefficients,
/// the per-(index, bit) family components, then samples a verified
/// projection for that family and compresses all witnesses through it.
/// kappa must be the numerical rank of the 1-input witness family.
CompressedWitnesses jl_compress(const WitnessVectors& w, int kappa, std::uint64_t seed,
                                int max_attempts = 100);

/// Distortion bounds guaranteed for a verified projection, evaluated on the
/// actual compressed witnesses.
struct CompressedChecks {
  double zeta_gram_dev = 0.0;  // max |<zeta'_j|zeta'_l> - delta_jl|
  double zeta_gram_bound = 0.0;  // 4 eps
  double zeta_phi_max = 0.0;   // max |<zeta'_j|phi'_x>|
  double zeta_phi_bound = 0.0;   // 2 eps (c+1) A
  double psi_norm_dev = 0.0;   // max | ||psi'_x||^2 - 1 |
  double psi_norm_bound = 0.0;   // 4 eps kappa
  double phi_norm_dev = 0.0;   // max | ||phi'_x|| - 1 |
  double phi_norm_bound = 0.0;   // 3 eps
  double refl_phi_max = 0.0;   // max ||(I+R) phi'_x||, R reflecting span{psi'}
  double refl_phi_bound = 0.0;   // 8 eps (c+1) A sqrt(kappa)
  bool precondition_ok = false;  // eps kappa < 1/12
  bool all_pass = false;
};

CompressedChecks check_compressed(const CompressedWitnesses& cw);

struct NearOrthoBasis {
  std::vector<Eigen::VectorXd> basis;  // orthonormal, in input order
  Eigen::MatrixXd coeffs;              // lower triangular: basis_j = sum_i coeffs(j,i) input_i
};

/// Gram-Schmidt on a near-orthonormal family (pairwise Gram deviations at
/// most eps). Requires eps * r < 1/4; the expansion coefficients then stay
/// within 3 eps of the identity.
NearOrthoBasis near_ortho_basis(const std::vector<Eigen::VectorXd>& vectors, double eps);

}  // namespace qadv
