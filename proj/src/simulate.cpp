#include "qadv/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qadv {

namespace {

constexpr double kUnitaryTol = 1e-8;
constexpr double kBandCushion = 1e-12;

Eigen::MatrixXd span_reflection(const Eigen::MatrixXd& cols) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[0] > 0.0 && s[i] > 1e-9 * s[0]) ++rank;
  Eigen::MatrixXd q = svd.matrixU().leftCols(rank);
  Eigen::MatrixXd r = 2.0 * (q * q.transpose());
  r.diagonal().array() -= 1.0;
  return r;
}

void check_reflection_size(int dim) {
  // A dense reflection above this size is almost certainly a mistake
  // (gigabytes); compress the vector set first.
  if (dim > 16000)
    throw std::runtime_error(
        "reflection_from: witness dimension " + std::to_string(dim) +
        " would require a huge dense matrix; compress the vector set first");
}

}  // namespace

Eigen::VectorXd build_pi_x(const AlgorithmSpace& space, const std::string& x) {
  if (static_cast<int>(x.size()) != space.n)
    throw std::runtime_error("build_pi_x: input length does not match the space");
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(space.dim());
  diag[0] = 1.0;
  for (int i = 1; i <= space.n; ++i) {
    int bit = x[i - 1] - '0';
    for (int l = 1; l <= space.m; ++l) diag[space.index(i, l, bit)] = 1.0;
  }
  return diag;
}

ReflectionKind reflection_kind_from(const std::string& name) {
  if (name == "exact") return ReflectionKind::exact;
  if (name == "svd") return ReflectionKind::svd;
  if (name == "jl") return ReflectionKind::jl;
  throw std::runtime_error("unknown reflection kind '" + name + "'");
}

std::string to_string(ReflectionKind kind) {
  switch (kind) {
    case ReflectionKind::exact: return "exact";
    case ReflectionKind::svd: return "svd";
    case ReflectionKind::jl: return "jl";
  }
  return "?";
}

Eigen::MatrixXd reflection_from(const WitnessVectors& w, ReflectionKind kind,
                                int kappa_star) {
  const int dim = w.space().dim();
  check_reflection_size(dim);
  const int n1 = static_cast<int>(w.psi.size());
  if (n1 == 0) throw std::runtime_error("reflection_from: no 1-input witnesses");

  if (kind == ReflectionKind::exact) {
    Eigen::MatrixXd cols(dim, n1);
    for (int i = 0; i < n1; ++i) cols.col(i) = w.psi[i];
    return span_reflection(cols);
  }
  if (kind == ReflectionKind::svd) {
    if (kappa_star < 1 || kappa_star > std::min(n1, dim))
      throw std::invalid_argument("reflection_from: kappa_star outside [1, min(n1, dim)]");
    Eigen::BDCSVD<Eigen::MatrixXd> svd(psi_matrix(w), Eigen::ComputeThinV);
    Eigen::MatrixXd v = svd.matrixV().leftCols(kappa_star);
    Eigen::MatrixXd r = 2.0 * (v * v.transpose());
    r.diagonal().array() -= 1.0;
    return r;
  }
  throw std::invalid_argument(
      "reflection_from: the jl reflection needs compressed witnesses");
}

Eigen::MatrixXd reflection_from(const CompressedWitnesses& cw) {
  const int dim = cw.space().dim();
  check_reflection_size(dim);
  if (cw.psi_c.empty()) throw std::runtime_error("reflection_from: no compressed witnesses");
  Eigen::MatrixXd cols(dim, static_cast<Eigen::Index>(cw.psi_c.size()));
  for (std::size_t i = 0; i < cw.psi_c.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = cw.psi_c[i];
  return span_reflection(cols);
}

PhaseProfile phase_profile(const Eigen::MatrixXd& u, const Eigen::VectorXd& state) {
  if (u.rows() != u.cols() || state.size() != u.rows())
    throw std::runtime_error("phase_profile: dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-8)
    throw std::runtime_error("phase_profile: state is not unit norm");

  Eigen::MatrixXd gram = u.transpose() * u;
  gram.diagonal().array() -= 1.0;
  double defect = gram.cwiseAbs().maxCoeff();
  if (defect > kUnitaryTol)
    throw std::runtime_error("phase_profile: matrix is not numerically orthogonal");

  Eigen::MatrixXd sym = 0.5 * (u + u.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("phase_profile: eigendecomposition failed");

  const int dim = static_cast<int>(u.rows());
  PhaseProfile profile;
  profile.unitarity_defect = defect;
  profile.phases.resize(2 * dim);
  profile.weights.resize(2 * dim);
  for (int i = 0; i < dim; ++i) {
    double cosb = std::clamp(eig.eigenvalues()[i], -1.0, 1.0);
    double beta = std::acos(cosb);
    double overlap = eig.eigenvectors().col(i).dot(state);
    double w = overlap * overlap;
    profile.phases[2 * i] = beta;
    profile.weights[2 * i] = 0.5 * w;
    // beta and -beta carry equal weight for a real orthogonal matrix and a
    // real state; the endpoints 0 and pi have no mirror.
    double mirror = (beta == 0.0 || beta == std::numbers::pi) ? beta : -beta;
    profile.phases[2 * i + 1] = mirror;
    profile.weights[2 * i + 1] = 0.5 * w;
  }
  return profile;
}

namespace {

struct SchurData {
  Eigen::MatrixXcd basis;
  Eigen::VectorXd phases;
  double defect = 0.0;
};

SchurData schur_phases(const Eigen::MatrixXcd& u) {
  if (u.rows() != u.cols()) throw std::runtime_error("phase_profile: matrix not square");
  Eigen::MatrixXcd gram = u.adjoint() * u;
  gram.diagonal().array() -= 1.0;
  if (gram.cwiseAbs().maxCoeff() > kUnitaryTol)
    throw std::runtime_error("phase_profile: matrix is not numerically unitary");

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u, /*computeU=*/true);
  if (schur.info() != Eigen::Success)
    throw std::runtime_error("phase_profile: Schur decomposition failed");

  SchurData out;
  out.basis = schur.matrixU();
  const int dim = static_cast<int>(u.rows());
  out.phases.resize(dim);
  for (int i = 0; i < dim; ++i) {
    std::complex<double> lam = schur.matrixT()(i, i);
    out.phases[i] = std::arg(lam);
    out.defect = std::max(out.defect, std::abs(std::abs(lam) - 1.0));
  }
  return out;
}

}  // namespace

PhaseProfile phase_profile(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& state) {
  if (state.size() != u.rows()) throw std::runtime_error("phase_profile: dimension mismatch");
  if (std::abs(state.norm() - 1.0) > 1e-8)
    throw std::runtime_error("phase_profile: state is not unit norm");
  SchurData data = schur_phases(u);
  PhaseProfile profile;
  profile.unitarity_defect = data.defect;
  profile.phases = data.phases;
  profile.weights.resize(data.phases.size());
  for (int i = 0; i < data.phases.size(); ++i)
    profile.weights[i] = std::norm(data.basis.col(i).dot(state));
  return profile;
}

double low_phase_mass(const PhaseProfile& profile, double theta) {
  double mass = 0.0;
  for (int i = 0; i < profile.phases.size(); ++i)
    if (std::abs(profile.phases[i]) <= theta + kBandCushion) mass += profile.weights[i];
  return mass;
}

Eigen::VectorXcd low_phase_project(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& v,
                                   double theta) {
  SchurData data = schur_phases(u);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
  for (int i = 0; i < data.phases.size(); ++i) {
    if (std::abs(data.phases[i]) > theta + kBandCushion) continue;
    out += data.basis.col(i) * data.basis.col(i).dot(v);
  }
  return out;
}

OutcomeBounds pe_outcome_bounds(const PhaseProfile& profile, double theta, double delta) {
  OutcomeBounds out;
  double half = low_phase_mass(profile, theta / 2.0);
  double full = low_phase_mass(profile, theta);
  out.lower = std::clamp(half * (1.0 - delta) - delta, 0.0, 1.0);
  out.upper = std::min(1.0, full + delta);
  return out;
}

namespace {

SimulationReport simulate_core(const BooleanFunction& f, const AlgorithmSpace& space,
                               const Eigen::MatrixXd& r, double theta, double delta,
                               double c, double a, const std::string& reflection,
                               int kappa_star) {
  SimulationReport report;
  report.reflection = reflection;
  report.kappa_star = kappa_star;
  report.theta = theta;
  report.delta = delta;
  report.c = c;
  report.A = a;
  report.overall_success = true;

  Eigen::VectorXd start = Eigen::VectorXd::Zero(space.dim());
  start[0] = 1.0;

  for (int ix = 0; ix < f.size(); ++ix) {
    Eigen::VectorXd pi = build_pi_x(space, f.input(ix));
    // U = (2 Pi - I) R is a row sign-flip of the reflection.
    Eigen::MatrixXd u = (2.0 * pi.array() - 1.0).matrix().asDiagonal() * r;
    PhaseProfile profile = phase_profile(u, start);
    OutcomeBounds bounds = pe_outcome_bounds(profile, theta, delta);

    SimulationRow row;
    row.x = f.input(ix);
    row.fx = f.value(ix);
    row.mass_half = low_phase_mass(profile, theta / 2.0);
    row.mass_full = low_phase_mass(profile, theta);
    row.lower = bounds.lower;
    row.upper = bounds.upper;
    bool ok = row.fx == 1 ? bounds.lower >= 2.0 / 3.0 : bounds.upper <= 1.0 / 3.0;
    row.verdict = ok ? "pass" : "indeterminate";
    if (!ok) report.overall_success = false;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

SimulationReport simulate_function(const WitnessVectors& w, ReflectionKind kind,
                                   int kappa_star, SimulationParams params) {
  if (kind == ReflectionKind::jl)
    throw std::invalid_argument("simulate_function: jl reflection needs compressed witnesses");
  double theta = params.theta;
  if (theta <= 0.0) {
    double scale = std::sqrt(w.c) * w.A;
    theta = kind == ReflectionKind::svd ? 1.0 / (2.0 * scale) : 1.0 / (4.0 * scale);
  }
  Eigen::MatrixXd r = reflection_from(w, kind, kappa_star);
  return simulate_core(w.f, w.space(), r, theta, params.delta, w.c, w.A, to_string(kind),
                       kind == ReflectionKind::svd ? kappa_star : 0);
}

SimulationReport simulate_function(const CompressedWitnesses& cw, SimulationParams params) {
  double theta = params.theta > 0.0 ? params.theta : cw.theta;
  Eigen::MatrixXd r = reflection_from(cw);
  return simulate_core(cw.f, cw.space(), r, theta, params.delta, cw.c, cw.A, "jl", 0);
}

PreserveCheck check_preserve_lemma(const Eigen::MatrixXcd& u, const Eigen::VectorXcd& v,
                                   double theta) {
  if (theta <= 0.0 || theta > 1.0)
    throw std::invalid_argument("check_preserve_lemma: theta must lie in (0, 1]");
  PreserveCheck out;
  out.epsilon = (v - u * v).squaredNorm();
  out.mass = low_phase_mass(phase_profile(u, v), theta);
  out.bound = 1.0 - 1.1 * out.epsilon / (theta * theta);
  out.pass = out.mass >= out.bound - kBandCushion;
  return out;
}

GapCheck check_robust_gap_lemma(const Eigen::MatrixXcd& pi, const Eigen::MatrixXcd& r,
                                const Eigen::VectorXcd& w, double theta) {
  GapCheck out;
  out.epsilon = (w + r * w).norm();
  Eigen::MatrixXcd u = (2.0 * pi - Eigen::MatrixXcd::Identity(pi.rows(), pi.cols())) * r;
  out.lhs = low_phase_project(u, pi * w, theta).norm();
  out.rhs = out.epsilon / 2.0 + theta / 2.0 * w.norm();
  out.pass = out.lhs <= out.rhs + kBandCushion;
  return out;
}

SvdLemmaCheck check_svd_lemmas(const WitnessVectors& w, int kappa_star) {
  const int n1 = static_cast<int>(w.psi.size());
  const int dim = w.space().dim();
  if (kappa_star < 1 || kappa_star > std::min(n1, dim))
    throw std::invalid_argument("check_svd_lemmas: kappa_star outside [1, min(n1, dim)]");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(psi_matrix(w), Eigen::ComputeThinV);
  const Eigen::VectorXd& s = svd.singularValues();
  double s_curr = s[kappa_star - 1];
  if (s_curr <= 1e-9 * s[0])
    throw std::invalid_argument("check_svd_lemmas: kappa_star exceeds the numerical rank");
  double s_next = kappa_star < s.size() ? s[kappa_star] : 0.0;
  Eigen::MatrixXd v = svd.matrixV().leftCols(kappa_star);

  SvdLemmaCheck out;
  out.one_bound = 2.0 * s_next;
  for (const Eigen::VectorXd& psi : w.psi) {
    // (2 D' - I) psi - psi = -2 (I - D') psi.
    double res = 2.0 * (psi - v * (v.transpose() * psi)).norm();
    out.max_one_residual = std::max(out.max_one_residual, res);
  }
  double eps = numerical_error(w);
  out.zero_bound = 2.0 * (s_next + eps * std::sqrt(static_cast<double>(n1))) / s_curr;
  for (const Eigen::VectorXd& phi : w.phi) {
    double norm = 2.0 * (v * (v.transpose() * phi)).norm();
    out.max_zero_norm = std::max(out.max_zero_norm, norm);
  }
  out.pass = out.max_one_residual <= out.one_bound + 1e-12 &&
             out.max_zero_norm <= out.zero_bound + 1e-12;
  return out;
}

}  // namespace qadv
