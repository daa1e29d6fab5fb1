#pragma once

#include <Eigen/Dense>
#include <vector>

#include "qadv/boolean_function.hpp"
#include "qadv/sdp.hpp"

namespace qadv {

/// Builds the adversary-bound dual SDP for a non-constant function in
/// standard form. Layout: blocks 0..n-1 hold the per-bit-index Gram blocks
/// (|X| x |X| each, canonical domain order); block n is the 1x1 objective
/// scalar t; block n+1 is the |X| x |X| slack block whose off-diagonals are
/// pinned to zero by explicit constraints.
///
/// Constraints, in order: one per mixed pair x < y with f(x) != f(y)
/// (sum over differing bit indices of the Gram off-diagonal equals 1,
/// encoded with 1/2 on each symmetric position), one per input x
/// (sum_j G_j[x,x] + slack_x - t = 0), then one per slack off-diagonal.
StandardFormSdp build_adversary_sdp(const BooleanFunction& f);

/// One vector per (input, bit index) pair; the Gram matrix of same-index
/// vectors realizes a feasible point of the dual SDP.
struct DecidingVectorSet {
  BooleanFunction f;
  int m = 0;  // common ambient dimension
  /// Per input x (canonical order): an n x m matrix whose row j-1 is v_{x,j}.
  std::vector<Eigen::MatrixXd> vectors;
  double reconstruction_error = 0.0;

  Eigen::VectorXd v(int ix, int j) const { return vectors[ix].row(j - 1); }
};

/// Factors a PSD matrix G into row vectors: keeps eigenpairs with
/// eigenvalue > rank_tol * lambda_max, returns rows of U sqrt(Lambda).
/// Throws when G has an eigenvalue below -rank_tol * lambda_max.
std::pair<Eigen::MatrixXd, int> factor_psd(const Eigen::MatrixXd& g, double rank_tol);

/// Reads the Gram blocks out of a dual SDP solution and factors them into a
/// deciding vector set. Eigenpairs are kept against the global largest
/// eigenvalue across blocks; reconstruction_error collects what was dropped.
DecidingVectorSet extract_vectors(const SdpSolution& sol, const BooleanFunction& f,
                                  double rank_tol = 1e-9);

struct SizeRank {
  double size = 0.0;   // max_x sum_j ||v_{x,j}||^2
  int max_rank = 0;    // max_j rank of the 1-input family at index j
};

/// Numerical ranks use a 1e-9 relative singular value cutoff.
SizeRank size_and_max_rank(const DecidingVectorSet& vs);

/// Largest absolute deviation of a mixed-pair constraint sum from 1.
double verify_deciding(const DecidingVectorSet& vs);

/// Witness space layout: coordinate 0 is the marked direction; coordinate
/// 1 + 2*(m*(i-1) + (l-1)) + b is bit index i in [1,n], vector coordinate
/// l in [1,m], bit value b in {0,1}. dim = 1 + 2nm.
struct AlgorithmSpace {
  int n = 0;
  int m = 0;

  int dim() const { return 1 + 2 * n * m; }
  int index(int i, int l, int b) const { return 1 + 2 * (m * (i - 1) + (l - 1)) + b; }
};

/// Unit witness vectors attached to a deciding vector set: for f(x) = 1,
/// psi_x = (|0> + (cA)^{-1/2} sum_i |i>|v_{x,i}>|x_i>) / sqrt(nu_x); for
/// f(x) = 0, phi_x = (|0> - (cA)^{1/2} sum_i |i>|v_{x,i}>|!x_i>) / sqrt(mu_x).
struct WitnessVectors {
  BooleanFunction f;
  int n = 0;
  int m = 0;
  double c = 0.0;
  double A = 0.0;  // size of the underlying vector set

  std::vector<int> one_inputs;   // domain indices, canonical order
  std::vector<int> zero_inputs;
  std::vector<Eigen::VectorXd> psi;  // parallel to one_inputs
  std::vector<Eigen::VectorXd> phi;  // parallel to zero_inputs
  std::vector<double> nu;            // normalizers, parallel to one_inputs
  std::vector<double> mu;            // parallel to zero_inputs

  AlgorithmSpace space() const { return {n, m}; }
};

/// Throws when c <= 0 or the set has size zero.
WitnessVectors build_witnesses(const DecidingVectorSet& vs, double c = 100.0);

/// Largest mixed-pair witness overlap max |<psi_x|phi_y>|.
/// Throws when either input family is empty.
double numerical_error(const WitnessVectors& w);

/// Rows are the 1-input witnesses psi_x, canonical order.
Eigen::MatrixXd psi_matrix(const WitnessVectors& w);

struct Certificate {
  double epsilon = 0.0;
  Eigen::VectorXd singular_values;  // s_1 >= ... >= s_kappa; s_{kappa+1} := 0
  int kappa = 0;                    // numerical rank of the psi family
  int kappa_star = 0;               // chosen truncation rank; 0 when none passes
  int n1 = 0;
  double A = 0.0;
  double c = 0.0;
  double threshold = 0.0;   // (s_{k*}/(2 sqrt(c) A) - s_{k*+1}) / sqrt(n1)
  double tail_bound = 0.0;  // 1 / (2 sqrt(1000 c) A)
  bool pass = false;

  // The fixed truncation-at-rank test, reported alongside the full scan.
  double threshold_at_kappa = 0.0;
  bool pass_at_kappa = false;
};

/// Scans truncation ranks 1..kappa for one satisfying both certificate
/// inequalities; picks the rank maximizing threshold - epsilon, breaking
/// ties toward the smallest rank. When nothing passes, threshold reports
/// the kappa candidate.
Certificate certify(const WitnessVectors& w);

}  // namespace qadv
