#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "qadv/adversary.hpp"
#include "qadv/boolean_function.hpp"
#include "qadv/compress.hpp"
#include "qadv/simulate.hpp"

using namespace qadv;

namespace {

BooleanFunction or2() {
  return BooleanFunction(2, {"00", "01", "10", "11"}, {0, 1, 1, 1});
}

DecidingVectorSet or2_exact_set() {
  DecidingVectorSet vs;
  vs.f = or2();
  vs.m = 1;
  auto rows = [](double a, double b) {
    Eigen::MatrixXd v(2, 1);
    v << a, b;
    return v;
  };
  vs.vectors = {rows(1, 1), rows(0, 1), rows(1, 0), rows(1, 0)};
  return vs;
}

WitnessVectors identity_witnesses() {
  DecidingVectorSet vs;
  vs.f = BooleanFunction(1, {"0", "1"}, {0, 1});
  vs.m = 1;
  vs.vectors = {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  return build_witnesses(vs);
}

Eigen::MatrixXd random_orthogonal(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd raw(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) raw(i, j) = gauss(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(raw);
  return qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
}

Eigen::MatrixXcd random_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXcd raw(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      raw(i, j) = std::complex<double>(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(dim, dim);
}

Eigen::VectorXcd random_unit_state(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = std::complex<double>(gauss(rng), gauss(rng));
  return v / v.norm();
}

}  // namespace

TEST_CASE("input projector diagonal") {
  AlgorithmSpace space{1, 1};
  Eigen::VectorXd pi0 = build_pi_x(space, "0");
  Eigen::VectorXd pi1 = build_pi_x(space, "1");
  CHECK(pi0.size() == 3);
  CHECK(pi0[0] == 1.0);
  CHECK(pi0[1] == 1.0);
  CHECK(pi0[2] == 0.0);
  CHECK(pi1[0] == 1.0);
  CHECK(pi1[1] == 0.0);
  CHECK(pi1[2] == 1.0);
  CHECK(pi0.sum() == doctest::Approx(1.0 + space.n * space.m));
  CHECK_THROWS_AS(build_pi_x(space, "01"), std::runtime_error);
}

TEST_CASE("reflection kinds parse both ways") {
  for (auto kind : {ReflectionKind::exact, ReflectionKind::svd, ReflectionKind::jl})
    CHECK(reflection_kind_from(to_string(kind)) == kind);
  CHECK_THROWS_AS(reflection_kind_from("banana"), std::runtime_error);
}

TEST_CASE("exact reflection fixes the witness span") {
  WitnessVectors w = identity_witnesses();
  Eigen::MatrixXd r = reflection_from(w, ReflectionKind::exact);
  CHECK((r * w.psi[0] - w.psi[0]).norm() <= 1e-10);
  CHECK((r * r - Eigen::MatrixXd::Identity(3, 3)).norm() <= 1e-10);
  CHECK((r - r.transpose()).norm() <= 1e-12);
}

TEST_CASE("svd reflection at full rank fixes every witness") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  Eigen::MatrixXd r = reflection_from(w, ReflectionKind::svd, 2);
  for (const Eigen::VectorXd& psi : w.psi)
    CHECK((r * psi - psi).norm() <= 1e-10);

  CHECK_THROWS_AS(reflection_from(w, ReflectionKind::svd, 0), std::invalid_argument);
  CHECK_THROWS_AS(reflection_from(w, ReflectionKind::svd, 4), std::invalid_argument);
  CHECK_THROWS_AS(reflection_from(w, ReflectionKind::jl), std::invalid_argument);
}

TEST_CASE("compressed reflection fixes the compressed witnesses") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  CompressedWitnesses cw = jl_compress(w, 2, 5);
  Eigen::MatrixXd r = reflection_from(cw);
  for (const Eigen::VectorXd& psi : cw.psi_c)
    CHECK((r * psi - psi).norm() <= 1e-10);
}

TEST_CASE("phase profile of a plane rotation") {
  double alpha = 0.3;
  Eigen::MatrixXd u(2, 2);
  u << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  Eigen::VectorXd state(2);
  state << 1.0, 0.0;

  PhaseProfile p = phase_profile(u, state);
  CHECK(p.unitarity_defect <= 1e-12);
  CHECK(p.weights.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < p.phases.size(); ++i)
    CHECK(std::abs(p.phases[i]) == doctest::Approx(alpha).epsilon(1e-12));
  CHECK(low_phase_mass(p, 0.29) == doctest::Approx(0.0));
  CHECK(low_phase_mass(p, 0.31) == doctest::Approx(1.0));
}

TEST_CASE("real and complex phase profiles agree on orthogonal matrices") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 4; ++trial) {
    int dim = 6 + 2 * trial;
    Eigen::MatrixXd u = random_orthogonal(dim, rng);
    Eigen::VectorXd state = Eigen::VectorXd::Zero(dim);
    state[0] = 1.0;

    PhaseProfile real = phase_profile(u, state);
    PhaseProfile cplx =
        phase_profile(Eigen::MatrixXcd(u), Eigen::VectorXcd(state.cast<std::complex<double>>()));
    CHECK(real.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(cplx.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
    for (double theta : {0.1, 0.5, 1.0, 2.0, 3.0})
      CHECK(low_phase_mass(real, theta) ==
            doctest::Approx(low_phase_mass(cplx, theta)).epsilon(1e-9));
  }
}

TEST_CASE("phase profile rejects bad inputs") {
  Eigen::MatrixXd u = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd e0(2);
  e0 << 1.0, 0.0;
  CHECK_THROWS_AS(phase_profile(u, e0), std::runtime_error);
  Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd long_state = 2.0 * e0;
  CHECK_THROWS_AS(phase_profile(id, long_state), std::runtime_error);
}

TEST_CASE("reflections land on the pi endpoint, not past it") {
  Eigen::MatrixXd u(2, 2);
  u << -1, 0, 0, 1;
  Eigen::VectorXd e0(2);
  e0 << 1.0, 0.0;
  PhaseProfile p = phase_profile(u, e0);
  CHECK(p.phases.maxCoeff() <= std::numbers::pi);
  CHECK(p.phases.minCoeff() > -std::numbers::pi);
  CHECK(low_phase_mass(p, 3.0) == doctest::Approx(0.0));
  CHECK(low_phase_mass(p, std::numbers::pi) == doctest::Approx(1.0));
}

TEST_CASE("low phase projection keeps only slow eigenspaces") {
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(2, 2);
  u(1, 1) = -1.0;
  Eigen::VectorXcd v(2);
  v << 0.6, 0.8;
  Eigen::VectorXcd proj = low_phase_project(u, v, 0.1);
  CHECK(std::abs(proj[0] - std::complex<double>(0.6, 0.0)) <= 1e-12);
  CHECK(std::abs(proj[1]) <= 1e-12);
}

TEST_CASE("outcome bounds from a hand built profile") {
  PhaseProfile p;
  p.phases = Eigen::VectorXd(3);
  p.phases << 0.0, 0.02, 0.5;
  p.weights = Eigen::VectorXd(3);
  p.weights << 0.7, 0.2, 0.1;

  OutcomeBounds b = pe_outcome_bounds(p, 0.04, 0.04);
  CHECK(b.lower == doctest::Approx(0.824).epsilon(1e-12));
  CHECK(b.upper == doctest::Approx(0.94).epsilon(1e-12));
}

TEST_CASE("simulating the identity function with the exact reflection") {
  WitnessVectors w = identity_witnesses();
  SimulationReport rep = simulate_function(w, ReflectionKind::exact);

  CHECK(rep.reflection == "exact");
  CHECK(rep.theta == doctest::Approx(0.025).epsilon(1e-12));
  CHECK(rep.delta == doctest::Approx(0.04));
  CHECK(rep.c == doctest::Approx(100.0));
  CHECK(rep.A == doctest::Approx(1.0));
  REQUIRE(rep.rows.size() == 2);

  const SimulationRow& zero = rep.rows[0];
  CHECK(zero.x == "0");
  CHECK(zero.fx == 0);
  CHECK(zero.mass_full <= 1e-12);
  CHECK(zero.upper == doctest::Approx(0.04).epsilon(1e-12));
  CHECK(zero.verdict == "pass");

  const SimulationRow& one = rep.rows[1];
  CHECK(one.x == "1");
  CHECK(one.fx == 1);
  CHECK(one.mass_half == doctest::Approx(0.99009900990099031).epsilon(1e-12));
  CHECK(one.mass_full == doctest::Approx(0.99009900990099031).epsilon(1e-12));
  CHECK(one.lower == doctest::Approx(0.91049504950495064).epsilon(1e-12));
  CHECK(one.verdict == "pass");

  CHECK(rep.overall_success);
}

TEST_CASE("simulating the two bit function with the truncated reflection") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  SimulationReport rep = simulate_function(w, ReflectionKind::svd, 2);
  CHECK(rep.reflection == "svd");
  CHECK(rep.kappa_star == 2);
  CHECK(rep.theta == doctest::Approx(1.0 / 40.0).epsilon(1e-12));
  CHECK(rep.overall_success);
  for (const SimulationRow& row : rep.rows) CHECK(row.verdict == "pass");
}

TEST_CASE("simulating through compressed witnesses") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  CompressedWitnesses cw = jl_compress(w, 2, 5);
  SimulationReport rep = simulate_function(cw);
  CHECK(rep.reflection == "jl");
  CHECK(rep.theta == doctest::Approx(cw.theta));
  CHECK(rep.overall_success);

  CHECK_THROWS_AS(simulate_function(w, ReflectionKind::jl), std::invalid_argument);
}

TEST_CASE("low phase mass survives an almost fixed state") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> unif(0.05, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 6 + static_cast<int>(rng() % 15);
    Eigen::MatrixXcd u = random_unitary(dim, rng);
    Eigen::VectorXcd v = random_unit_state(dim, rng);
    double theta = unif(rng);
    PreserveCheck chk = check_preserve_lemma(u, v, theta);
    CHECK(chk.pass);
    CHECK(chk.mass >= chk.bound);
    CHECK(chk.epsilon == doctest::Approx(((u - Eigen::MatrixXcd::Identity(dim, dim)) * v)
                                             .squaredNorm())
                             .epsilon(1e-10));
  }
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::VectorXcd e0(2);
  e0 << 1.0, 0.0;
  CHECK_THROWS_AS(check_preserve_lemma(id, e0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(check_preserve_lemma(id, e0, 1.5), std::invalid_argument);
}

TEST_CASE("reflected states stay out of the low phase subspace") {
  std::mt19937_64 rng(53);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif(0.05, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    int dim = 6 + static_cast<int>(rng() % 10);
    int k = 1 + static_cast<int>(rng() % (dim / 2));

    Eigen::VectorXcd diag(dim);
    for (int i = 0; i < dim; ++i) diag[i] = (rng() % 2) ? 1.0 : 0.0;
    Eigen::MatrixXcd pi = diag.asDiagonal();

    Eigen::MatrixXcd raw(dim, k);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < k; ++j) raw(i, j) = std::complex<double>(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(raw);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(dim, k);
    Eigen::MatrixXcd r = 2.0 * q * q.adjoint() - Eigen::MatrixXcd::Identity(dim, dim);

    Eigen::VectorXcd w = random_unit_state(dim, rng) * unif(rng);
    double theta = unif(rng);
    GapCheck chk = check_robust_gap_lemma(pi, r, w, theta);
    CHECK(chk.pass);
    CHECK(chk.lhs <= chk.rhs);
    CHECK(chk.epsilon ==
          doctest::Approx(((Eigen::MatrixXcd::Identity(dim, dim) + r) * w).norm())
              .epsilon(1e-10));
  }
}

TEST_CASE("truncation residual bounds hold for witness families") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  for (int kappa_star : {1, 2}) {
    SvdLemmaCheck chk = check_svd_lemmas(w, kappa_star);
    CHECK(chk.pass);
    CHECK(chk.max_one_residual <= chk.one_bound + 1e-12);
    CHECK(chk.max_zero_norm <= chk.zero_bound + 1e-12);
  }
  CHECK_THROWS_AS(check_svd_lemmas(w, 0), std::invalid_argument);
  // The exact two bit family has numerical rank 2, so index 3 is rejected
  // even though three one-inputs exist.
  CHECK_THROWS_AS(check_svd_lemmas(w, 3), std::invalid_argument);
  CHECK_THROWS_AS(check_svd_lemmas(w, 4), std::invalid_argument);

  std::mt19937_64 rng(61);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 10; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int size = std::min(4 + static_cast<int>(rng() % 4), 1 << n);
    int m = 1 + static_cast<int>(rng() % 3);
    DecidingVectorSet vs;
    vs.f = random_function(n, size, 500 + trial);
    vs.m = m;
    for (int ix = 0; ix < vs.f.size(); ++ix) {
      Eigen::MatrixXd v(n, m);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b) v(a, b) = gauss(rng);
      vs.vectors.push_back(v);
    }
    WitnessVectors rw = build_witnesses(vs);
    int max_rank = std::min(static_cast<int>(rw.psi.size()), rw.space().dim());
    int kappa_star = 1 + static_cast<int>(rng() % max_rank);
    CHECK(check_svd_lemmas(rw, kappa_star).pass);
  }
}
