#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "qadv/adversary.hpp"
#include "qadv/compress.hpp"

namespace qadv {

/// Diagonal of the input-dependent projector: 1 on the marked coordinate and
/// on every (i, l, b) coordinate whose bit value b matches bit i of x.
Eigen::VectorXd build_pi_x(const AlgorithmSpace& space, const std::string& x);

enum class ReflectionKind { exact, svd, jl };

ReflectionKind reflection_kind_from(const std::string& name);
std::string to_string(ReflectionKind kind);

/// Reflection about the span of the 1-input witnesses (exact) or about the
/// span of their kappa_star leading right singular directions (svd).
Eigen::MatrixXd reflection_from(const WitnessVectors& w, ReflectionKind kind,
                                int kappa_star = 0);
/// Reflection about the span of the compressed 1-input witnesses.
Eigen::MatrixXd reflection_from(const CompressedWitnesses& cw);

/// Eigenphases of a (numerically) unitary matrix together with the squared
/// overlaps of a unit state against an orthonormal eigenbasis.
struct PhaseProfile {
  Eigen::VectorXd phases;   // in (-pi, pi]
  Eigen::VectorXd weights;  // sum to 1 for a unit state
  double unitarity_defect = 0.0;
};

/// Real orthogonal path. Works through the symmetric part (U + U^T)/2: for a
/// real orthogonal U and a real state, conjugate eigenphase pairs carry equal
/// weight, so each symmetric eigenvector of eigenvalue cos(beta) contributes
/// half its squared overlap to +beta and half to -beta. The reported defect
/// is the largest entry deviation of U^T U from the identity.
/// Throws when that deviation exceeds 1e-8 or the state is not unit norm.
PhaseProfile phase_profile(const Eigen::MatrixXd& u, const Eigen::VectorXd& state);

/// General unitary path via the complex Schur form (diagonal for a normal
/// matrix, with a unitary basis). Defect here is max | |lambda_i| - 1 |.
PhaseProfile phase_profile(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state);

/// Total weight on phases with |beta| <= theta (plus a 1e-12 boundary
/// cushion).
double low_phase_mass(const PhaseProfile& profile, double theta);

/// Projection of a vector onto the eigenspaces of U with |phase| <= theta.
Eigen::VectorXcd low_phase_project(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& v,
                                   double theta);

struct OutcomeBounds {
  double lower = 0.0;  // clamp(mass(theta/2) (1-delta) - delta, 0, 1)
  double upper = 0.0;  // min(1, mass(theta) + delta)
};

OutcomeBounds pe_outcome_bounds(const PhaseProfile& profile, double theta, double delta);

struct SimulationParams {
  double theta = 0.0;  // 0 selects the pipeline default
  double delta = 1.0 / 25.0;
};

struct SimulationRow {
  std::string x;
  int fx = 0;
  double mass_half = 0.0;
  double mass_full = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::string verdict;  // "pass" or "indeterminate"
};

struct SimulationReport {
  std::vector<SimulationRow> rows;  // canonical domain order
  bool overall_success = false;
  std::string reflection;
  int kappa_star = 0;  // svd reflection only
  double theta = 0.0;
  double delta = 0.0;
  double c = 0.0;
  double A = 0.0;
};

/// Runs phase estimation bounds for every domain input against the chosen
/// reflection. Default theta is 1/(4 sqrt(c) A) for the exact and jl
/// reflections and 1/(2 sqrt(c) A) for the svd reflection. A 1-input passes
/// when lower >= 2/3, a 0-input when upper <= 1/3; anything else is reported
/// as indeterminate rather than guessed.
SimulationReport simulate_function(const WitnessVectors& w, ReflectionKind kind,
                                   int kappa_star = 0, SimulationParams params = {});
SimulationReport simulate_function(const CompressedWitnesses& cw, SimulationParams params = {});

struct PreserveCheck {
  double epsilon = 0.0;  // ||(I - U) v||^2
  double mass = 0.0;     // low-phase mass of v at theta
  double bound = 0.0;    // 1 - 1.1 epsilon / theta^2
  bool pass = false;
};

/// Requires 0 < theta <= 1.
PreserveCheck check_preserve_lemma(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& v,
                                   double theta);

struct GapCheck {
  double epsilon = 0.0;  // ||(I + R) w||
  double lhs = 0.0;      // ||P_theta((2 Pi - I) R) Pi w||
  double rhs = 0.0;      // epsilon / 2 + theta / 2 ||w||
  bool pass = false;
};

GapCheck check_robust_gap_lemma(const Eigen::MatrixXcd& pi, const Eigen::MatrixXcd& r,
                                const Eigen::VectorXcd& w, double theta);

struct SvdLemmaCheck {
  double max_one_residual = 0.0;  // max ||(2 D' - I) psi - psi||
  double one_bound = 0.0;         // 2 s_{k*+1}
  double max_zero_norm = 0.0;     // max ||2 D' phi||
  double zero_bound = 0.0;        // 2 (s_{k*+1} + eps sqrt(n1)) / s_{k*}
  bool pass = false;
};

/// Requires 1 <= kappa_star and that it indexes a genuine singular direction
/// of the one-input witness family (kappa_star <= numerical rank).
SvdLemmaCheck check_svd_lemmas(const WitnessVectors& w, int kappa_star);

}  // namespace qadv
