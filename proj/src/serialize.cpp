#include "qadv/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qadv {

namespace {

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (rows == 0) return Eigen::MatrixXd(0, 0);
  const auto cols = static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j.at(r).size()) != cols)
      throw std::runtime_error("matrix rows have inconsistent lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = j.at(r).at(c).get<double>();
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
  return v;
}

Json triplets_to_json(const SparseSym& m) {
  Json out = Json::array();
  for (const auto& e : m.entries)
    out.push_back(Json::array({e.block, e.row, e.col, e.value}));
  return out;
}

SparseSym triplets_from_json(const Json& j) {
  SparseSym m;
  for (const auto& t : j)
    m.add(t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(),
          t.at(3).get<double>());
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10e", v);
  return buf;
}

Json to_json(const BooleanFunction& f) {
  Json j;
  j["n"] = f.n();
  j["domain"] = f.domain();
  j["values"] = f.values();
  return j;
}

BooleanFunction function_from_json(const Json& j) {
  return BooleanFunction(j.at("n").get<int>(),
                         j.at("domain").get<std::vector<std::string>>(),
                         j.at("values").get<std::vector<int>>());
}

Json to_json(const StandardFormSdp& sdp) {
  Json j;
  j["block_dims"] = sdp.block_dims;
  j["C"] = triplets_to_json(sdp.C);
  Json cons = Json::array();
  for (const auto& a : sdp.constraints) cons.push_back(triplets_to_json(a));
  j["A"] = std::move(cons);
  j["b"] = vector_to_json(sdp.b);
  return j;
}

StandardFormSdp sdp_from_json(const Json& j) {
  StandardFormSdp sdp;
  sdp.block_dims = j.at("block_dims").get<std::vector<int>>();
  sdp.C = triplets_from_json(j.at("C"));
  for (const auto& a : j.at("A")) sdp.constraints.push_back(triplets_from_json(a));
  sdp.b = vector_from_json(j.at("b"));
  return sdp;
}

Json to_json(const SdpSolution& sol) {
  Json j;
  Json blocks = Json::array();
  for (const auto& blk : sol.X) blocks.push_back(matrix_to_json(blk));
  j["X"] = std::move(blocks);
  j["objective_value"] = sol.objective_value;
  j["primal_residual"] = sol.primal_residual;
  j["iterations_used"] = sol.iterations_used;
  return j;
}

SdpSolution solution_from_json(const Json& j) {
  SdpSolution sol;
  for (const auto& blk : j.at("X")) sol.X.push_back(matrix_from_json(blk));
  sol.objective_value = j.at("objective_value").get<double>();
  sol.primal_residual = j.at("primal_residual").get<double>();
  sol.iterations_used = j.at("iterations_used").get<int>();
  return sol;
}

Json to_json(const DecidingVectorSet& vs) {
  Json j;
  j["function"] = to_json(vs.f);
  j["m"] = vs.m;
  Json vecs = Json::array();
  for (const auto& mx : vs.vectors) vecs.push_back(matrix_to_json(mx));
  j["vectors"] = std::move(vecs);
  j["reconstruction_error"] = vs.reconstruction_error;
  return j;
}

DecidingVectorSet vectors_from_json(const Json& j) {
  DecidingVectorSet vs{function_from_json(j.at("function"))};
  vs.m = j.at("m").get<int>();
  for (const auto& mx : j.at("vectors")) vs.vectors.push_back(matrix_from_json(mx));
  vs.reconstruction_error = j.at("reconstruction_error").get<double>();
  if (static_cast<int>(vs.vectors.size()) != vs.f.size())
    throw std::runtime_error("vector set does not match the function domain");
  return vs;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["epsilon"] = cert.epsilon;
  j["singular_values"] = vector_to_json(cert.singular_values);
  j["kappa"] = cert.kappa;
  j["kappa_star"] = cert.kappa_star;
  j["n1"] = cert.n1;
  j["A"] = cert.A;
  j["c"] = cert.c;
  j["threshold"] = cert.threshold;
  j["tail_bound"] = cert.tail_bound;
  j["pass"] = cert.pass;
  j["threshold_at_kappa"] = cert.threshold_at_kappa;
  j["pass_at_kappa"] = cert.pass_at_kappa;
  return j;
}

Certificate certificate_from_json(const Json& j) {
  Certificate cert;
  cert.epsilon = j.at("epsilon").get<double>();
  cert.singular_values = vector_from_json(j.at("singular_values"));
  cert.kappa = j.at("kappa").get<int>();
  cert.kappa_star = j.at("kappa_star").get<int>();
  cert.n1 = j.at("n1").get<int>();
  cert.A = j.at("A").get<double>();
  cert.c = j.at("c").get<double>();
  cert.threshold = j.at("threshold").get<double>();
  cert.tail_bound = j.at("tail_bound").get<double>();
  cert.pass = j.at("pass").get<bool>();
  cert.threshold_at_kappa = j.at("threshold_at_kappa").get<double>();
  cert.pass_at_kappa = j.at("pass_at_kappa").get<bool>();
  return cert;
}

Json to_json(const JlProjection& jl) {
  Json j;
  j["N"] = jl.N;
  j["d"] = jl.d;
  j["requested_N"] = jl.requested_N;
  j["epsilon"] = jl.epsilon;
  j["verified"] = jl.verified;
  j["seed"] = jl.seed;
  j["attempts"] = jl.attempts;
  return j;
}

JlProjection jl_from_json(const Json& j) {
  JlProjection jl;
  jl.N = j.at("N").get<int>();
  jl.d = j.at("d").get<int>();
  jl.requested_N = j.at("requested_N").get<std::int64_t>();
  jl.epsilon = j.at("epsilon").get<double>();
  jl.verified = j.at("verified").get<bool>();
  jl.seed = j.at("seed").get<std::uint64_t>();
  jl.attempts = j.at("attempts").get<int>();
  return jl;
}

Json to_json(const CompressedWitnesses& cw) {
  Json j;
  j["function"] = to_json(cw.f);
  j["n"] = cw.n;
  j["m"] = cw.m;
  j["N"] = cw.N;
  j["c"] = cw.c;
  j["A"] = cw.A;
  j["kappa"] = cw.kappa;
  j["one_inputs"] = cw.one_inputs;
  j["zero_inputs"] = cw.zero_inputs;
  Json psi = Json::array();
  for (const auto& v : cw.psi_c) psi.push_back(vector_to_json(v));
  j["psi"] = std::move(psi);
  Json phi = Json::array();
  for (const auto& v : cw.phi_c) phi.push_back(vector_to_json(v));
  j["phi"] = std::move(phi);
  Json zeta = Json::array();
  for (const auto& v : cw.zeta_c) zeta.push_back(vector_to_json(v));
  j["zeta"] = std::move(zeta);
  j["alpha"] = matrix_to_json(cw.alpha);
  j["projection"] = to_json(cw.jl);
  j["epsilon_target"] = cw.epsilon_target;
  j["theta"] = cw.theta;
  j["delta"] = cw.delta;
  return j;
}

CompressedWitnesses compressed_from_json(const Json& j) {
  CompressedWitnesses cw{function_from_json(j.at("function"))};
  cw.n = j.at("n").get<int>();
  cw.m = j.at("m").get<int>();
  cw.N = j.at("N").get<int>();
  cw.c = j.at("c").get<double>();
  cw.A = j.at("A").get<double>();
  cw.kappa = j.at("kappa").get<int>();
  cw.one_inputs = j.at("one_inputs").get<std::vector<int>>();
  cw.zero_inputs = j.at("zero_inputs").get<std::vector<int>>();
  for (const auto& v : j.at("psi")) cw.psi_c.push_back(vector_from_json(v));
  for (const auto& v : j.at("phi")) cw.phi_c.push_back(vector_from_json(v));
  for (const auto& v : j.at("zeta")) cw.zeta_c.push_back(vector_from_json(v));
  cw.alpha = matrix_from_json(j.at("alpha"));
  cw.jl = jl_from_json(j.at("projection"));
  cw.epsilon_target = j.at("epsilon_target").get<double>();
  cw.theta = j.at("theta").get<double>();
  cw.delta = j.at("delta").get<double>();
  return cw;
}

Json to_json(const CompressedChecks& checks) {
  Json j;
  j["zeta_gram_dev"] = checks.zeta_gram_dev;
  j["zeta_gram_bound"] = checks.zeta_gram_bound;
  j["zeta_phi_max"] = checks.zeta_phi_max;
  j["zeta_phi_bound"] = checks.zeta_phi_bound;
  j["psi_norm_dev"] = checks.psi_norm_dev;
  j["psi_norm_bound"] = checks.psi_norm_bound;
  j["phi_norm_dev"] = checks.phi_norm_dev;
  j["phi_norm_bound"] = checks.phi_norm_bound;
  j["refl_phi_max"] = checks.refl_phi_max;
  j["refl_phi_bound"] = checks.refl_phi_bound;
  j["precondition_ok"] = checks.precondition_ok;
  j["all_pass"] = checks.all_pass;
  return j;
}

Json to_json(const SimulationReport& report) {
  Json j;
  j["reflection"] = report.reflection;
  j["kappa_star"] = report.kappa_star;
  j["theta"] = report.theta;
  j["delta"] = report.delta;
  j["c"] = report.c;
  j["A"] = report.A;
  j["overall_success"] = report.overall_success;
  Json rows = Json::array();
  for (const auto& r : report.rows) {
    Json row;
    row["x"] = r.x;
    row["fx"] = r.fx;
    row["mass_half"] = r.mass_half;
    row["mass_full"] = r.mass_full;
    row["lower"] = r.lower;
    row["upper"] = r.upper;
    row["verdict"] = r.verdict;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j;
}

std::string simulation_csv(const SimulationReport& report, const std::string& config_line) {
  std::ostringstream out;
  if (!config_line.empty()) out << "# " << config_line << "\n";
  out << "x,fx,mass_half,mass_full,lower,upper,verdict\n";
  for (const auto& r : report.rows) {
    out << r.x << ',' << r.fx << ',' << format_double(r.mass_half) << ','
        << format_double(r.mass_full) << ',' << format_double(r.lower) << ','
        << format_double(r.upper) << ',' << r.verdict << "\n";
  }
  return out.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write to " + path + " failed");
}

Json read_json_file(const std::string& path) {
  return Json::parse(read_text_file(path));
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace qadv
