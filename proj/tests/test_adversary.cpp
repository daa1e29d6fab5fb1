#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "qadv/adversary.hpp"
#include "qadv/boolean_function.hpp"
#include "qadv/sdp.hpp"

using namespace qadv;

namespace {

BooleanFunction or2() {
  return BooleanFunction(2, {"00", "01", "10", "11"}, {0, 1, 1, 1});
}

BooleanFunction identity1() { return BooleanFunction(1, {"0", "1"}, {0, 1}); }

// Hand-built deciding set for the two bit OR: every mixed-pair sum over
// differing indices equals 1 exactly, size 2, per-index rank 1.
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

DecidingVectorSet identity_set() {
  DecidingVectorSet vs;
  vs.f = identity1();
  vs.m = 1;
  vs.vectors = {Eigen::MatrixXd::Ones(1, 1), Eigen::MatrixXd::Ones(1, 1)};
  return vs;
}

}  // namespace

TEST_CASE("adversary sdp layout for a two bit function") {
  StandardFormSdp sdp = build_adversary_sdp(or2());

  CHECK(sdp.block_dims == std::vector<int>{4, 4, 1, 4});
  CHECK(sdp.constraints.size() == 13);  // 3 mixed pairs + 4 row sums + 6 slack zeros
  REQUIRE(sdp.b.size() == 13);
  CHECK(sdp.b.head(3).isOnes());
  CHECK(sdp.b.tail(10).isZero());

  REQUIRE(sdp.C.entries.size() == 1);
  CHECK(sdp.C.entries[0].block == 2);
  CHECK(sdp.C.entries[0].row == 0);
  CHECK(sdp.C.entries[0].col == 0);
  CHECK(sdp.C.entries[0].value == doctest::Approx(1.0));
}

TEST_CASE("a known feasible point satisfies every constraint") {
  StandardFormSdp sdp = build_adversary_sdp(or2());
  DecidingVectorSet vs = or2_exact_set();

  // Gram blocks of the exact set, objective scalar t = size, diagonal slack.
  BlockMatrix x = zero_blocks(sdp.block_dims);
  for (int j = 0; j < 2; ++j) {
    Eigen::VectorXd col(4);
    for (int ix = 0; ix < 4; ++ix) col[ix] = vs.vectors[ix](j, 0);
    x[j] = col * col.transpose();
  }
  x[2](0, 0) = 2.0;
  for (int ix = 0; ix < 4; ++ix)
    x[3](ix, ix) = 2.0 - x[0](ix, ix) - x[1](ix, ix);

  CHECK((sdp.apply(x) - sdp.b).lpNorm<Eigen::Infinity>() <= 1e-12);
  CHECK(sdp.objective(x) == doctest::Approx(2.0));
}

TEST_CASE("constant functions are rejected") {
  BooleanFunction f(1, {"0", "1"}, {1, 1});
  CHECK_THROWS_AS(build_adversary_sdp(f), std::runtime_error);
}

TEST_CASE("normal operator inverts the constraint gram on its range") {
  StandardFormSdp sdp = build_adversary_sdp(or2());
  NormalOperator op = build_normal_operator(sdp);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd y(sdp.b.size());
  for (int i = 0; i < y.size(); ++i) y[i] = gauss(rng);

  Eigen::VectorXd g = sdp.apply(sdp.adjoint(y));
  Eigen::VectorXd g2 = sdp.apply(sdp.adjoint(op.apply(g)));
  CHECK((g2 - g).norm() <= 1e-10 * (1.0 + g.norm()));
}

TEST_CASE("extract vectors from a hand built solution") {
  BooleanFunction f = identity1();
  SdpSolution sol;
  sol.X = zero_blocks({2, 1, 2});
  sol.X[0] << 1, 1, 1, 1;
  sol.X[1](0, 0) = 1.0;

  DecidingVectorSet vs = extract_vectors(sol, f);
  CHECK(vs.m == 1);
  CHECK(vs.reconstruction_error <= 1e-12);
  CHECK(vs.v(0, 1).dot(vs.v(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(verify_deciding(vs) <= 1e-12);

  SizeRank sr = size_and_max_rank(vs);
  CHECK(sr.size == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(sr.max_rank == 1);
}

TEST_CASE("factor_psd keeps the numerical rank") {
  auto [r4, count4] = factor_psd(Eigen::MatrixXd::Identity(4, 4), 1e-9);
  CHECK(count4 == 4);
  CHECK((r4 * r4.transpose() - Eigen::MatrixXd::Identity(4, 4)).norm() <= 1e-12);

  Eigen::MatrixXd g1(1, 1);
  g1 << 4.0;
  auto [r1, count1] = factor_psd(g1, 1e-9);
  CHECK(count1 == 1);
  CHECK(std::abs(r1(0, 0)) == doctest::Approx(2.0));

  Eigen::MatrixXd indef(2, 2);
  indef << 1, 0, 0, -1;
  CHECK_THROWS_AS(factor_psd(indef, 1e-9), std::runtime_error);
}

TEST_CASE("witness vectors for the exact identity set") {
  WitnessVectors w = build_witnesses(identity_set());
  CHECK(w.n == 1);
  CHECK(w.m == 1);
  CHECK(w.c == doctest::Approx(100.0));
  CHECK(w.A == doctest::Approx(1.0));
  REQUIRE(w.one_inputs == std::vector<int>{1});
  REQUIRE(w.zero_inputs == std::vector<int>{0});
  REQUIRE(w.nu.size() == 1);
  REQUIRE(w.mu.size() == 1);
  CHECK(w.nu[0] == doctest::Approx(1.01).epsilon(1e-15));
  CHECK(w.mu[0] == doctest::Approx(101.0).epsilon(1e-15));

  CHECK(w.space().dim() == 3);
  CHECK(w.space().index(1, 1, 0) == 1);
  CHECK(w.space().index(1, 1, 1) == 2);

  Eigen::Vector3d psi_expect(1.0, 0.0, 0.1);
  psi_expect /= std::sqrt(1.01);
  Eigen::Vector3d phi_expect(1.0, 0.0, -10.0);
  phi_expect /= std::sqrt(101.0);
  REQUIRE(w.psi.size() == 1);
  REQUIRE(w.phi.size() == 1);
  CHECK((w.psi[0] - psi_expect).lpNorm<Eigen::Infinity>() <= 1e-15);
  CHECK((w.phi[0] - phi_expect).lpNorm<Eigen::Infinity>() <= 1e-15);

  CHECK(numerical_error(w) <= 1e-15);
  Eigen::MatrixXd p = psi_matrix(w);
  REQUIRE(p.rows() == 1);
  REQUIRE(p.cols() == 3);
  CHECK((p.row(0).transpose() - w.psi[0]).norm() <= 1e-15);
}

TEST_CASE("certificate for the exact two bit set") {
  WitnessVectors w = build_witnesses(or2_exact_set());
  CHECK(w.A == doctest::Approx(2.0));

  Certificate cert = certify(w);
  CHECK(cert.epsilon <= 1e-15);
  CHECK(cert.n1 == 3);
  CHECK(cert.kappa == 2);
  REQUIRE(cert.singular_values.size() == 2);
  CHECK(cert.singular_values[0] ==
        doctest::Approx(1.7301353537927577).epsilon(1e-12));
  CHECK(cert.singular_values[1] ==
        doctest::Approx(0.081434989755075932).epsilon(1e-12));
  CHECK(cert.kappa_star == 2);
  CHECK(cert.threshold == doctest::Approx(1.1754128314136877e-3).epsilon(1e-12));
  CHECK(cert.tail_bound ==
        doctest::Approx(7.9056941504209474e-4).epsilon(1e-12));
  CHECK(cert.pass);
  CHECK(cert.pass_at_kappa);
  CHECK(cert.threshold_at_kappa == doctest::Approx(cert.threshold));
}

TEST_CASE("failed certificate reports the last scanned threshold") {
  // Deciding sums deliberately off (0.3 instead of 1): the overlap stays
  // well above every truncation threshold.
  DecidingVectorSet vs = identity_set();
  vs.vectors[1](0, 0) = 0.3;  // v_{1,1} = [0.3], v_{0,1} stays [1]

  WitnessVectors w = build_witnesses(vs);
  CHECK(w.A == doctest::Approx(1.0));
  Certificate cert = certify(w);

  double eps_expect = 0.7 / std::sqrt(1.0009 * 101.0);
  CHECK(cert.epsilon == doctest::Approx(eps_expect).epsilon(1e-12));
  CHECK(cert.kappa == 1);
  CHECK_FALSE(cert.pass);
  CHECK_FALSE(cert.pass_at_kappa);
  CHECK(cert.kappa_star == 0);
  CHECK(cert.threshold == doctest::Approx(0.05).epsilon(1e-12));
  CHECK(cert.threshold == doctest::Approx(cert.threshold_at_kappa));
}

TEST_CASE("witness overlaps reduce to the deciding sums") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 5; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    int size = std::min(4 + static_cast<int>(rng() % 5), 1 << n);
    int m = 1 + static_cast<int>(rng() % 3);
    DecidingVectorSet vs;
    vs.f = random_function(n, size, 1000 + trial);
    vs.m = m;
    for (int ix = 0; ix < vs.f.size(); ++ix) {
      Eigen::MatrixXd v(n, m);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < m; ++b) v(a, b) = gauss(rng);
      vs.vectors.push_back(v);
    }

    WitnessVectors w = build_witnesses(vs);
    for (std::size_t a = 0; a < w.one_inputs.size(); ++a) {
      for (std::size_t b = 0; b < w.zero_inputs.size(); ++b) {
        int ix = w.one_inputs[a];
        int iy = w.zero_inputs[b];
        double sum = 0.0;
        for (int j : differing_indices(w.f, ix, iy))
          sum += vs.v(ix, j).dot(vs.v(iy, j));
        double overlap =
            w.psi[a].dot(w.phi[b]) * std::sqrt(w.nu[a] * w.mu[b]);
        CHECK(std::abs(overlap - (1.0 - sum)) <= 1e-10);
      }
    }
  }
}

TEST_CASE("identity function solves to objective one") {
  StandardFormSdp sdp = build_adversary_sdp(identity1());
  SolveOptions opts;
  opts.max_iters = 200;
  SdpSolution sol = solve(sdp, opts);
  CHECK(std::abs(sol.objective_value - 1.0) <= 1e-3);

  DecidingVectorSet vs = extract_vectors(sol, identity1());
  CHECK(verify_deciding(vs) <= 1e-3);
}
