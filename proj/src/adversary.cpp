#include "qadv/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qadv {

StandardFormSdp build_adversary_sdp(const BooleanFunction& f) {
  if (f.is_constant())
    throw std::runtime_error("adversary sdp: function is constant");

  const int n = f.n();
  const int sz = f.size();
  const int t_block = n;
  const int slack_block = n + 1;

  StandardFormSdp sdp;
  sdp.block_dims.assign(n, sz);
  sdp.block_dims.push_back(1);
  sdp.block_dims.push_back(sz);
  sdp.C.add(t_block, 0, 0, 1.0);

  std::vector<double> b;

  // Mixed pairs: sum over differing indices of G_j[x,y] = 1.
  for (int ix = 0; ix < sz; ++ix) {
    for (int iy = ix + 1; iy < sz; ++iy) {
      if (f.value(ix) == f.value(iy)) continue;
      SparseSym a;
      for (int j : differing_indices(f, ix, iy)) a.add(j - 1, ix, iy, 0.5);
      sdp.constraints.push_back(std::move(a));
      b.push_back(1.0);
    }
  }

  // Row sums: sum_j G_j[x,x] + slack_x - t = 0.
  for (int ix = 0; ix < sz; ++ix) {
    SparseSym a;
    for (int j = 0; j < n; ++j) a.add(j, ix, ix, 1.0);
    a.add(slack_block, ix, ix, 1.0);
    a.add(t_block, 0, 0, -1.0);
    sdp.constraints.push_back(std::move(a));
    b.push_back(0.0);
  }

  // Slack off-diagonals pinned to zero.
  for (int r = 0; r < sz; ++r) {
    for (int c = r + 1; c < sz; ++c) {
      SparseSym a;
      a.add(slack_block, r, c, 0.5);
      sdp.constraints.push_back(std::move(a));
      b.push_back(0.0);
    }
  }

  sdp.b = Eigen::Map<Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
  return sdp;
}

std::pair<Eigen::MatrixXd, int> factor_psd(const Eigen::MatrixXd& g, double rank_tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
  if (eig.info() != Eigen::Success)
    throw std::runtime_error("factor_psd: eigendecomposition failed");
  const Eigen::VectorXd& lam = eig.eigenvalues();
  double lam_max = std::max(lam.maxCoeff(), 0.0);
  if (lam.minCoeff() < -rank_tol * lam_max)
    throw std::runtime_error("factor_psd: matrix is not numerically PSD");

  std::vector<int> keep;
  for (int i = lam.size() - 1; i >= 0; --i)  // descending eigenvalue order
    if (lam[i] > rank_tol * lam_max) keep.push_back(i);

  Eigen::MatrixXd rows(g.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    rows.col(static_cast<Eigen::Index>(k)) =
        eig.eigenvectors().col(keep[k]) * std::sqrt(lam[keep[k]]);
  return {rows, static_cast<int>(keep.size())};
}

DecidingVectorSet extract_vectors(const SdpSolution& sol, const BooleanFunction& f,
                                  double rank_tol) {
  const int n = f.n();
  const int sz = f.size();
  if (static_cast<int>(sol.X.size()) != n + 2 || sol.X[0].rows() != sz)
    throw std::runtime_error("extract_vectors: solution does not match the function");

  struct Pair {
    double lam;
    int block;
    int col;
  };
  std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eigs;
  eigs.reserve(n);
  double lam_max = 0.0;
  double lam_min = 0.0;
  for (int j = 0; j < n; ++j) {
    eigs.emplace_back(sol.X[j]);
    if (eigs.back().info() != Eigen::Success)
      throw std::runtime_error("extract_vectors: eigendecomposition failed");
    lam_max = std::max(lam_max, eigs.back().eigenvalues().maxCoeff());
    lam_min = std::min(lam_min, eigs.back().eigenvalues().minCoeff());
  }
  if (lam_min < -rank_tol * lam_max)
    throw std::runtime_error("extract_vectors: Gram block is not numerically PSD");

  std::vector<Pair> kept;
  double dropped_sq = 0.0;
  for (int j = 0; j < n; ++j) {
    const Eigen::VectorXd& lam = eigs[j].eigenvalues();
    for (int i = 0; i < lam.size(); ++i) {
      if (lam[i] > rank_tol * lam_max)
        kept.push_back({lam[i], j, i});
      else
        dropped_sq += lam[i] * lam[i];
    }
  }
  std::sort(kept.begin(), kept.end(), [](const Pair& a, const Pair& b) {
    if (a.lam != b.lam) return a.lam > b.lam;
    if (a.block != b.block) return a.block < b.block;
    return a.col < b.col;
  });

  DecidingVectorSet vs;
  vs.f = f;
  vs.m = static_cast<int>(kept.size());
  vs.reconstruction_error = std::sqrt(dropped_sq);
  vs.vectors.assign(sz, Eigen::MatrixXd::Zero(n, vs.m));
  for (int col = 0; col < vs.m; ++col) {
    const Pair& p = kept[col];
    Eigen::VectorXd u = eigs[p.block].eigenvectors().col(p.col) * std::sqrt(p.lam);
    for (int ix = 0; ix < sz; ++ix) vs.vectors[ix](p.block, col) = u[ix];
  }
  return vs;
}

SizeRank size_and_max_rank(const DecidingVectorSet& vs) {
  SizeRank out;
  for (const Eigen::MatrixXd& vx : vs.vectors)
    out.size = std::max(out.size, vx.squaredNorm());

  std::vector<int> ones = vs.f.one_inputs();
  for (int j = 0; j < vs.f.n(); ++j) {
    Eigen::MatrixXd fam(static_cast<Eigen::Index>(ones.size()), vs.m);
    for (std::size_t r = 0; r < ones.size(); ++r) fam.row(static_cast<Eigen::Index>(r)) = vs.vectors[ones[r]].row(j);
    if (fam.size() == 0) continue;
    Eigen::BDCSVD<Eigen::MatrixXd> svd(fam);
    const Eigen::VectorXd& s = svd.singularValues();
    int rank = 0;
    if (s.size() > 0 && s[0] > 0.0)
      for (int i = 0; i < s.size(); ++i)
        if (s[i] > 1e-9 * s[0]) ++rank;
    out.max_rank = std::max(out.max_rank, rank);
  }
  return out;
}

double verify_deciding(const DecidingVectorSet& vs) {
  double worst = 0.0;
  for (int ix = 0; ix < vs.f.size(); ++ix) {
    for (int iy = ix + 1; iy < vs.f.size(); ++iy) {
      if (vs.f.value(ix) == vs.f.value(iy)) continue;
      double sum = 0.0;
      for (int j : differing_indices(vs.f, ix, iy))
        sum += vs.vectors[ix].row(j - 1).dot(vs.vectors[iy].row(j - 1));
      worst = std::max(worst, std::abs(sum - 1.0));
    }
  }
  return worst;
}

WitnessVectors build_witnesses(const DecidingVectorSet& vs, double c) {
  if (c <= 0.0) throw std::runtime_error("witnesses: c must be positive");
  double a = size_and_max_rank(vs).size;
  if (a <= 0.0) throw std::runtime_error("witnesses: vector set has size zero");

  WitnessVectors w;
  w.f = vs.f;
  w.n = vs.f.n();
  w.m = vs.m;
  w.c = c;
  w.A = a;
  w.one_inputs = vs.f.one_inputs();
  w.zero_inputs = vs.f.zero_inputs();

  const AlgorithmSpace space{w.n, w.m};
  const double ca = c * a;

  for (int ix : w.one_inputs) {
    double norm_sq = vs.vectors[ix].squaredNorm();
    double nu = 1.0 + norm_sq / ca;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(space.dim());
    psi[0] = 1.0;
    for (int i = 1; i <= w.n; ++i) {
      int bit = vs.f.bit(ix, i) - '0';
      for (int l = 1; l <= w.m; ++l)
        psi[space.index(i, l, bit)] = vs.vectors[ix](i - 1, l - 1) / std::sqrt(ca);
    }
    psi /= std::sqrt(nu);
    w.psi.push_back(std::move(psi));
    w.nu.push_back(nu);
  }

  for (int ix : w.zero_inputs) {
    double norm_sq = vs.vectors[ix].squaredNorm();
    double mu = 1.0 + ca * norm_sq;
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(space.dim());
    phi[0] = 1.0;
    for (int i = 1; i <= w.n; ++i) {
      int flipped = 1 - (vs.f.bit(ix, i) - '0');
      for (int l = 1; l <= w.m; ++l)
        phi[space.index(i, l, flipped)] = -std::sqrt(ca) * vs.vectors[ix](i - 1, l - 1);
    }
    phi /= std::sqrt(mu);
    w.phi.push_back(std::move(phi));
    w.mu.push_back(mu);
  }

  return w;
}

double numerical_error(const WitnessVectors& w) {
  if (w.psi.empty() || w.phi.empty())
    throw std::runtime_error("numerical error: empty input family");
  double worst = 0.0;
  for (const Eigen::VectorXd& psi : w.psi)
    for (const Eigen::VectorXd& phi : w.phi)
      worst = std::max(worst, std::abs(psi.dot(phi)));
  return worst;
}

Eigen::MatrixXd psi_matrix(const WitnessVectors& w) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(w.psi.size()), w.space().dim());
  for (std::size_t r = 0; r < w.psi.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = w.psi[r];
  return m;
}

Certificate certify(const WitnessVectors& w) {
  Certificate cert;
  cert.epsilon = numerical_error(w);
  cert.n1 = static_cast<int>(w.psi.size());
  cert.A = w.A;
  cert.c = w.c;
  cert.tail_bound = 1.0 / (2.0 * std::sqrt(1000.0 * w.c) * w.A);

  Eigen::BDCSVD<Eigen::MatrixXd> svd(psi_matrix(w));
  const Eigen::VectorXd& s = svd.singularValues();
  if (s.size() == 0 || s[0] <= 0.0)
    throw std::runtime_error("certify: witness matrix has rank zero");
  int kappa = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s[i] > 1e-9 * s[0]) ++kappa;
  cert.kappa = kappa;
  cert.singular_values = s.head(kappa);

  const double scale = 2.0 * std::sqrt(w.c) * w.A;
  const double root_n1 = std::sqrt(static_cast<double>(cert.n1));
  auto tail = [&](int k) { return k < kappa ? s[k] : 0.0; };  // s_{k+1}, 0-based k

  double best_margin = 0.0;
  for (int k = 1; k <= kappa; ++k) {
    double threshold = (s[k - 1] / scale - tail(k)) / root_n1;
    bool ok = cert.epsilon <= threshold && tail(k) <= cert.tail_bound;
    if (k == kappa) {
      cert.threshold_at_kappa = threshold;
      cert.pass_at_kappa = ok;
    }
    if (!ok) continue;
    double margin = threshold - cert.epsilon;
    if (!cert.pass || margin > best_margin) {
      cert.pass = true;
      cert.kappa_star = k;
      cert.threshold = threshold;
      best_margin = margin;
    }
  }
  if (!cert.pass) cert.threshold = cert.threshold_at_kappa;
  return cert;
}

}  // namespace qadv
