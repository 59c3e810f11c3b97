#include "mvbandit/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "mvbandit/errors.hpp"

namespace mvbandit {

ActionSet::ActionSet(std::vector<Eigen::VectorXd> actions)
    : actions_(std::move(actions)) {
  if (actions_.empty()) throw InvalidInstanceError("action set is empty");
  dim_ = static_cast<int>(actions_.front().size());
  if (dim_ < 1) throw InvalidInstanceError("actions must have dimension >= 1");
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (actions_[i].size() != dim_)
      throw InvalidInstanceError("action " + std::to_string(i) +
                                 " has mismatched dimension");
    double norm = actions_[i].norm();
    if (norm > 1.0 + kNormSlack)
      throw InvalidInstanceError("action " + std::to_string(i) +
                                 " has norm " + std::to_string(norm) +
                                 " > 1");
  }
}

Eigen::MatrixXd ActionSet::as_matrix() const {
  Eigen::MatrixXd m(dim_, size());
  for (int i = 0; i < size(); ++i) m.col(i) = actions_[i];
  return m;
}

MVInstance::MVInstance(ActionSet actions_in, Eigen::VectorXd theta,
                       Eigen::VectorXd phi, double omega_in, double rho_in,
                       std::string label_in)
    : actions(std::move(actions_in)),
      theta_star(std::move(theta)),
      phi_star(std::move(phi)),
      omega(omega_in),
      rho(rho_in),
      label(std::move(label_in)) {
  const int d = actions.dim();
  if (theta_star.size() != d || phi_star.size() != d)
    throw InvalidInstanceError("parameter dimension does not match actions");
  if (!(omega >= 0.0))
    throw InvalidInstanceError("omega must be nonnegative");
  if (!(rho >= 0.0)) throw InvalidInstanceError("rho must be nonnegative");
  if (theta_star.norm() > 1.0 + kNormSlack)
    throw InvalidInstanceError("theta_star norm exceeds 1");
  if (phi_star.norm() > omega + kNormSlack)
    throw InvalidInstanceError("phi_star norm exceeds omega");
  sigma2_min = std::numeric_limits<double>::infinity();
  sigma2_max = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < actions.size(); ++i) {
    double v = phi_star.dot(actions[i]) + omega;
    if (!(v > 0.0))
      throw InvalidInstanceError("action " + std::to_string(i) +
                                 " has nonpositive reward variance");
    sigma2_min = std::min(sigma2_min, v);
    sigma2_max = std::max(sigma2_max, v);
  }
}

double mean_of(const MVInstance& inst, int index) {
  return inst.theta_star.dot(inst.actions[index]);
}

double variance_of(const MVInstance& inst, int index) {
  return inst.phi_star.dot(inst.actions[index]) + inst.omega;
}

Environment::Environment(const MVInstance& inst, std::uint64_t seed)
    : inst_(&inst), seed_(seed), rng_(seed) {
  const int K = inst.actions.size();
  means_.resize(K);
  stds_.resize(K);
  for (int i = 0; i < K; ++i) {
    means_[i] = mean_of(inst, i);
    stds_[i] = std::sqrt(variance_of(inst, i));
  }
}

double Environment::sample_reward(int index) {
  return means_[index] + stds_[index] * rng_.normal();
}

namespace {

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& arr, const char* name) {
  if (!arr.is_array())
    throw InvalidInstanceError(std::string(name) + " must be an array");
  Eigen::VectorXd v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) v[i] = arr[i].get<double>();
  return v;
}

}  // namespace

std::string instance_to_json(const MVInstance& inst) {
  nlohmann::json j;
  j["d"] = inst.actions.dim();
  j["K"] = inst.actions.size();
  nlohmann::json acts = nlohmann::json::array();
  for (const auto& a : inst.actions.actions()) acts.push_back(vector_to_json(a));
  j["actions"] = std::move(acts);
  j["theta_star"] = vector_to_json(inst.theta_star);
  j["phi_star"] = vector_to_json(inst.phi_star);
  j["omega"] = inst.omega;
  j["rho"] = inst.rho;
  j["label"] = inst.label;
  return j.dump(2);
}

MVInstance instance_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  const int d = j.at("d").get<int>();
  const int K = j.at("K").get<int>();
  const auto& acts = j.at("actions");
  if (!acts.is_array() || static_cast<int>(acts.size()) != K)
    throw InvalidInstanceError("actions array does not have K entries");
  std::vector<Eigen::VectorXd> actions;
  actions.reserve(acts.size());
  for (const auto& row : acts) {
    Eigen::VectorXd a = vector_from_json(row, "action");
    if (a.size() != d)
      throw InvalidInstanceError("action row does not have d entries");
    actions.push_back(std::move(a));
  }
  Eigen::VectorXd theta = vector_from_json(j.at("theta_star"), "theta_star");
  Eigen::VectorXd phi = vector_from_json(j.at("phi_star"), "phi_star");
  if (theta.size() != d || phi.size() != d)
    throw InvalidInstanceError("parameter vectors do not have d entries");
  std::string label = j.value("label", std::string{});
  return MVInstance(ActionSet(std::move(actions)), std::move(theta),
                    std::move(phi), j.at("omega").get<double>(),
                    j.at("rho").get<double>(), std::move(label));
}

void save_instance(const MVInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << instance_to_json(inst) << "\n";
}

MVInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return instance_from_json(buf.str());
}

}  // namespace mvbandit
