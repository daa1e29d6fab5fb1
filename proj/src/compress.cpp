#include "qadv/compress.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace qadv {

DecidingVectorSet realify(const BooleanFunction& f,
                          const std::vector<Eigen::MatrixXcd>& vectors) {
  if (static_cast<int>(vectors.size()) != f.size())
    throw std::runtime_error("realify: one matrix per domain input required");
  DecidingVectorSet out;
  out.f = f;
  out.m = vectors.empty() ? 0 : static_cast<int>(vectors.front().cols()) * 2;
  out.vectors.reserve(vectors.size());
  for (const Eigen::MatrixXcd& vx : vectors) {
    if (vx.rows() != f.n() || vx.cols() * 2 != out.m)
      throw std::runtime_error("realify: inconsistent vector dimensions");
    Eigen::MatrixXd wide(vx.rows(), out.m);
    wide << vx.real(), vx.imag();
    out.vectors.push_back(std::move(wide));
  }
  return out;
}

DecidingVectorSet exact_compress(const DecidingVectorSet& vs, double rank_tol) {
  const int n = vs.f.n();
  const int sz = vs.f.size();
  const std::vector<int> ones = vs.f.one_inputs();

  // Orthonormal basis of the 1-input row span at each bit index.
  std::vector<Eigen::MatrixXd> bases(n);  // m x r_j
  int kappa_prime = 0;
  for (int j = 0; j < n; ++j) {
    if (ones.empty()) {
      bases[j] = Eigen::MatrixXd::Zero(vs.m, 0);
      continue;
    }
    Eigen::MatrixXd fam(static_cast<Eigen::Index>(ones.size()), vs.m);
    for (std::size_t r = 0; r < ones.size(); ++r)
      fam.row(static_cast<Eigen::Index>(r)) = vs.vectors[ones[r]].row(j);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(fam, Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    int rank = 0;
    if (s.size() > 0 && s[0] > 0.0)
      for (int i = 0; i < s.size(); ++i)
        if (s[i] > rank_tol * s[0]) ++rank;
    bases[j] = svd.matrixV().leftCols(rank);
    kappa_prime = std::max(kappa_prime, rank);
  }

  DecidingVectorSet out;
  out.f = vs.f;
  out.m = kappa_prime;
  out.reconstruction_error = vs.reconstruction_error;
  out.vectors.assign(sz, Eigen::MatrixXd::Zero(n, kappa_prime));
  for (int ix = 0; ix < sz; ++ix)
    for (int j = 0; j < n; ++j) {
      Eigen::VectorXd coords = bases[j].transpose() * vs.vectors[ix].row(j).transpose();
      out.vectors[ix].row(j).head(coords.size()) = coords;
    }
  return out;
}

namespace {

/// Largest relative violation of the two projection conditions over
/// family-plus-origin; a verified projection has violation <= 1.
double jl_violation(const Eigen::MatrixXd& s_mat,
                    const std::vector<Eigen::VectorXd>& family, double eps) {
  const int count = static_cast<int>(family.size());
  std::vector<Eigen::VectorXd> image(count);
  for (int i = 0; i < count; ++i) image[i] = s_mat * family[i];

  double worst = 0.0;
  auto ratio = [](double dev, double allow) {
    if (allow > 0.0) return dev / allow;
    return dev > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  // Pairs inside the family.
  for (int i = 0; i < count; ++i) {
    for (int k = i + 1; k < count; ++k) {
      double dist = (family[i] - family[k]).squaredNorm();
      double dev = std::abs((image[i] - image[k]).squaredNorm() - dist);
      worst = std::max(worst, ratio(dev, eps * dist));
      double ip_dev = std::abs(image[i].dot(image[k]) - family[i].dot(family[k]));
      double allow = 2.0 * eps * (family[i].squaredNorm() + family[k].squaredNorm());
      worst = std::max(worst, ratio(ip_dev, allow));
    }
    // Pair with the origin: norm preservation.
    double dev = std::abs(image[i].squaredNorm() - family[i].squaredNorm());
    worst = std::max(worst, ratio(dev, eps * family[i].squaredNorm()));
  }
  return worst;
}

}  // namespace

JlProjection sample_jl_matrix(int d, double epsilon,
                              const std::vector<Eigen::VectorXd>& family,
                              int max_attempts, std::uint64_t seed) {
  if (d < 1) throw std::runtime_error("jl projection: source dimension must be positive");
  if (epsilon <= 0.0) throw std::runtime_error("jl projection: epsilon must be positive");
  for (const Eigen::VectorXd& v : family)
    if (v.size() != d) throw std::runtime_error("jl projection: family dimension mismatch");

  JlProjection out;
  out.d = d;
  out.epsilon = epsilon;
  out.seed = seed;
  // Computed in doubles: tight epsilons push this far past the int range.
  const double requested =
      std::ceil(8.0 * std::log(static_cast<double>(family.size()) + 1.0) /
                (epsilon * epsilon)) + 1.0;
  out.requested_N = static_cast<std::int64_t>(requested);

  if (requested >= static_cast<double>(d)) {
    // The target dimension does not compress; the identity map satisfies
    // every condition exactly, so use it instead of a huge random matrix.
    out.N = d;
    out.S = Eigen::MatrixXd::Identity(d, d);
    out.verified = true;
    out.attempts = 0;
    return out;
  }

  out.N = static_cast<int>(out.requested_N);
  const double sigma = 1.0 / std::sqrt(static_cast<double>(out.N));
  double best_violation = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= max_attempts; ++k) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(k));
    std::normal_distribution<double> gauss(0.0, sigma);
    Eigen::MatrixXd s_mat(out.N, d);
    for (int r = 0; r < out.N; ++r)
      for (int col = 0; col < d; ++col) s_mat(r, col) = gauss(rng);

    double violation = jl_violation(s_mat, family, epsilon);
    if (violation < best_violation) {
      best_violation = violation;
      out.S = std::move(s_mat);
      out.attempts = k;
    }
    if (best_violation <= 1.0) {
      out.verified = true;
      break;
    }
  }
  return out;
}

namespace {

/// Applies the witness-register map |0><0| + (I (x) S (x) I).
Eigen::VectorXd compress_witness(const Eigen::VectorXd& v, const Eigen::MatrixXd& s_mat,
                                 int n, int m) {
  const int big_n = static_cast<int>(s_mat.rows());
  const AlgorithmSpace src{n, m};
  const AlgorithmSpace dst{n, big_n};
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dst.dim());
  out[0] = v[0];
  for (int i = 1; i <= n; ++i)
    for (int b = 0; b < 2; ++b) {
      Eigen::VectorXd slice(m);
      for (int l = 1; l <= m; ++l) slice[l - 1] = v[src.index(i, l, b)];
      Eigen::VectorXd mapped = s_mat * slice;
      for (int l = 1; l <= big_n; ++l) out[dst.index(i, l, b)] = mapped[l - 1];
    }
  return out;
}

Eigen::VectorXd witness_slice(const Eigen::VectorXd& v, int n, int m, int i, int b) {
  const AlgorithmSpace src{n, m};
  Eigen::VectorXd slice(m);
  for (int l = 1; l <= m; ++l) slice[l - 1] = v[src.index(i, l, b)];
  return slice;
}

}  // namespace

CompressedWitnesses jl_compress(const WitnessVectors& w, int kappa, std::uint64_t seed,
                                int max_attempts) {
  const int n1 = static_cast<int>(w.psi.size());
  const int dim = w.space().dim();
  if (kappa < 1 || kappa > std::min(n1, dim))
    throw std::invalid_argument("jl_compress: kappa outside [1, min(n1, dim)]");

  Eigen::MatrixXd psi_cols(dim, n1);
  for (int i = 0; i < n1; ++i) psi_cols.col(i) = w.psi[i];

  // Orthonormal basis of the 1-input witness span, column-pivoted.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(psi_cols);
  Eigen::MatrixXd zeta = qr.householderQ() * Eigen::MatrixXd::Identity(dim, kappa);
  double span_residual = (psi_cols - zeta * (zeta.transpose() * psi_cols)).norm();
  if (span_residual > 1e-8 * psi_cols.norm())
    throw std::invalid_argument("jl_compress: kappa is below the witness family rank");

  // Minimal-norm expansion coefficients zeta_j = sum_x alpha(j,x) psi_x.
  Eigen::BDCSVD<Eigen::MatrixXd> psi_svd(psi_cols, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::MatrixXd alpha(kappa, n1);
  for (int j = 0; j < kappa; ++j) alpha.row(j) = psi_svd.solve(zeta.col(j)).transpose();

  CompressedWitnesses cw;
  cw.f = w.f;
  cw.n = w.n;
  cw.m = w.m;
  cw.c = w.c;
  cw.A = w.A;
  cw.kappa = kappa;
  cw.one_inputs = w.one_inputs;
  cw.zero_inputs = w.zero_inputs;
  cw.alpha = alpha;
  cw.epsilon_target = std::min(1.0 / (4.0 * w.c * kappa),
                               1.0 / (32.0 * std::sqrt(w.c) * (w.c + 1.0) * w.A * w.A *
                                      std::sqrt(static_cast<double>(kappa))));
  cw.theta = 1.0 / (4.0 * std::sqrt(w.c) * w.A);
  cw.delta = 1.0 / 25.0;

  // Registered family: the zeta slices (scaled back to vector-register
  // scale) and the raw 0-input vectors read off the phi slices.
  const double root_ca = std::sqrt(w.c * w.A);
  cw.components.reserve(static_cast<std::size_t>(kappa) * w.n * 2);
  std::vector<Eigen::VectorXd> family;
  for (int j = 0; j < kappa; ++j)
    for (int i = 1; i <= w.n; ++i)
      for (int b = 0; b < 2; ++b) {
        Eigen::VectorXd comp = root_ca * witness_slice(zeta.col(j), w.n, w.m, i, b);
        cw.components.push_back(comp);
        family.push_back(std::move(comp));
      }
  for (std::size_t yi = 0; yi < w.zero_inputs.size(); ++yi) {
    int ix = w.zero_inputs[yi];
    for (int i = 1; i <= w.n; ++i) {
      int flipped = 1 - (w.f.bit(ix, i) - '0');
      Eigen::VectorXd v =
          -(std::sqrt(w.mu[yi]) / root_ca) * witness_slice(w.phi[yi], w.n, w.m, i, flipped);
      family.push_back(std::move(v));
    }
  }

  cw.jl = sample_jl_matrix(w.m, cw.epsilon_target, family, max_attempts, seed);
  cw.N = cw.jl.N;

  for (const Eigen::VectorXd& psi : w.psi)
    cw.psi_c.push_back(compress_witness(psi, cw.jl.S, w.n, w.m));
  for (const Eigen::VectorXd& phi : w.phi)
    cw.phi_c.push_back(compress_witness(phi, cw.jl.S, w.n, w.m));
  for (int j = 0; j < kappa; ++j)
    cw.zeta_c.push_back(compress_witness(zeta.col(j), cw.jl.S, w.n, w.m));
  return cw;
}

CompressedChecks check_compressed(const CompressedWitnesses& cw) {
  CompressedChecks out;
  const double eps = cw.epsilon_target;
  out.zeta_gram_bound = 4.0 * eps;
  out.zeta_phi_bound = 2.0 * eps * (cw.c + 1.0) * cw.A;
  out.psi_norm_bound = 4.0 * eps * cw.kappa;
  out.phi_norm_bound = 3.0 * eps;
  out.refl_phi_bound = 8.0 * eps * (cw.c + 1.0) * cw.A * std::sqrt(static_cast<double>(cw.kappa));
  out.precondition_ok = eps * cw.kappa < 1.0 / 12.0;

  for (std::size_t j = 0; j < cw.zeta_c.size(); ++j)
    for (std::size_t l = j; l < cw.zeta_c.size(); ++l) {
      double target = j == l ? 1.0 : 0.0;
      out.zeta_gram_dev =
          std::max(out.zeta_gram_dev, std::abs(cw.zeta_c[j].dot(cw.zeta_c[l]) - target));
    }
  for (const Eigen::VectorXd& zeta : cw.zeta_c)
    for (const Eigen::VectorXd& phi : cw.phi_c)
      out.zeta_phi_max = std::max(out.zeta_phi_max, std::abs(zeta.dot(phi)));
  for (const Eigen::VectorXd& psi : cw.psi_c)
    out.psi_norm_dev = std::max(out.psi_norm_dev, std::abs(psi.squaredNorm() - 1.0));
  for (const Eigen::VectorXd& phi : cw.phi_c)
    out.phi_norm_dev = std::max(out.phi_norm_dev, std::abs(phi.norm() - 1.0));

  // ||(I+R) phi'|| = 2 ||proj_{span psi'} phi'||.
  const int dim = cw.space().dim();
  Eigen::MatrixXd cols(dim, static_cast<Eigen::Index>(cw.psi_c.size()));
  for (std::size_t i = 0; i < cw.psi_c.size(); ++i)
    cols.col(static_cast<Eigen::Index>(i)) = cw.psi_c[i];
  Eigen::BDCSVD<Eigen::MatrixXd> svd(cols, Eigen::ComputeThinU);
  const Eigen::VectorXd& s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[0] > 0.0 && s[i] > 1e-9 * s[0]) ++rank;
  Eigen::MatrixXd q = svd.matrixU().leftCols(rank);
  for (const Eigen::VectorXd& phi : cw.phi_c)
    out.refl_phi_max = std::max(out.refl_phi_max, 2.0 * (q * (q.transpose() * phi)).norm());

  out.all_pass = out.precondition_ok && out.zeta_gram_dev <= out.zeta_gram_bound &&
                 out.zeta_phi_max <= out.zeta_phi_bound &&
                 out.psi_norm_dev <= out.psi_norm_bound &&
                 out.phi_norm_dev <= out.phi_norm_bound &&
                 out.refl_phi_max <= out.refl_phi_bound;
  return out;
}

NearOrthoBasis near_ortho_basis(const std::vector<Eigen::VectorXd>& vectors, double eps) {
  const int r = static_cast<int>(vectors.size());
  if (r == 0) throw std::invalid_argument("near_ortho_basis: empty family");
  if (eps * r >= 0.25)
    throw std::invalid_argument("near_ortho_basis: eps * r must stay below 1/4");

  NearOrthoBasis out;
  out.coeffs = Eigen::MatrixXd::Zero(r, r);
  for (int j = 0; j < r; ++j) {
    Eigen::VectorXd u = vectors[j];
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(r);
    row[j] = 1.0;
    for (int k = 0; k < j; ++k) {
      double overlap = out.basis[k].dot(u);
      u -= overlap * out.basis[k];
      row -= overlap * out.coeffs.row(k);
    }
    double norm = u.norm();
    if (norm <= 0.0)
      throw std::runtime_error("near_ortho_basis: family is numerically dependent");
    out.basis.push_back(u / norm);
    out.coeffs.row(j) = row / norm;
  }
  return out;
}

}  // namespace qadv
