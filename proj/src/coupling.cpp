#include "mpp/coupling.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace mpp {

void WeightProfile::validate() const {
  std::set<std::tuple<int, int, int>> keys;
  for (const auto& e : entries) {
    if (!std::isfinite(e.amplitude) || e.amplitude < 0.0)
      throw std::invalid_argument("weight amplitude must be finite and >= 0");
    if (e.alpha < 0 && e.amplitude != 0.0)
      throw std::invalid_argument("dark entries (alpha < 0) must have amplitude 0");
    if (e.j < 1) throw std::invalid_argument("cavity index j must be >= 1");
    if (e.qw < 0) throw std::invalid_argument("qw index must be >= 0");
    if (!keys.insert({e.j, e.alpha, e.qw}).second) {
      std::ostringstream msg;
      msg << "duplicate weight key (j=" << e.j << ", alpha=" << e.alpha
          << ", qw=" << e.qw << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

double SyntheticWeightModel::base_for(int j, int abs_alpha) const {
  auto it = base.find({j, abs_alpha});
  return it == base.end() ? 1.0 : it->second;
}

double synthetic_weight(const SyntheticWeightModel& model, int j, int alpha,
                        double qw_depth_um, double q_per_um) {
  if (qw_depth_um < 0.0) throw std::invalid_argument("qw depth must be >= 0");
  if (alpha < 0) return 0.0;
  return model.base_for(j, std::abs(alpha)) *
         std::exp(-std::abs(q_per_um) * qw_depth_um);
}

WeightProfile build_synthetic_profile(const SyntheticWeightModel& model,
                                      int n_cavity, const PlasmonLadder& ladder,
                                      const std::vector<double>& qw_depths_um) {
  WeightProfile profile;
  for (int j = 1; j <= n_cavity; ++j)
    for (const auto& entry : ladder.entries)
      for (int w = 0; w < static_cast<int>(qw_depths_um.size()); ++w)
        profile.entries.push_back(
            {j, entry.alpha, w,
             synthetic_weight(model, j, entry.alpha, qw_depths_um[w],
                              entry.q_per_um)});
  profile.validate();
  return profile;
}

CouplingMatrix aggregate_coupling(const WeightProfile& profile,
                                  double global_scale_thz, int n_cavity,
                                  const PlasmonLadder& ladder) {
  profile.validate();
  if (profile.entries.empty())
    throw std::invalid_argument("cannot aggregate an empty weight profile");
  const int m = static_cast<int>(ladder.entries.size());
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(n_cavity, m);
  for (const auto& e : profile.entries) {
    if (e.j > n_cavity) continue; // weights for modes beyond the coupled set
    if (e.alpha < -ladder.alpha_cut || e.alpha > ladder.alpha_cut) {
      std::ostringstream msg;
      msg << "weight alpha=" << e.alpha << " outside ladder range +-"
          << ladder.alpha_cut;
      throw std::invalid_argument(msg.str());
    }
    sq(e.j - 1, e.alpha + ladder.alpha_cut) += e.amplitude * e.amplitude;
  }
  CouplingMatrix cm;
  cm.global_scale_thz = global_scale_thz;
  cm.omega_r_thz = global_scale_thz * sq.array().sqrt();
  return cm;
}

WeightProfile load_weights(std::istream& in) {
  WeightProfile profile;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != "j,alpha,qw,amplitude") {
        std::ostringstream msg;
        msg << "line " << lineno
            << ": expected header 'j,alpha,qw,amplitude', got '" << line << "'";
        throw std::invalid_argument(msg.str());
      }
      header_seen = true;
      continue;
    }
    std::istringstream row(line);
    WeightEntry e;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> e.j >> c1 >> e.alpha >> c2 >> e.qw >> c3 >> e.amplitude) ||
        c1 != ',' || c2 != ',' || c3 != ',') {
      std::ostringstream msg;
      msg << "line " << lineno << ": malformed weight row '" << line << "'";
      throw std::invalid_argument(msg.str());
    }
    std::string rest;
    if (row >> rest) {
      std::ostringstream msg;
      msg << "line " << lineno << ": trailing data in weight row";
      throw std::invalid_argument(msg.str());
    }
    profile.entries.push_back(e);
  }
  if (!header_seen)
    throw std::invalid_argument("weight file is empty (missing header)");
  profile.validate();
  return profile;
}

WeightProfile load_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open weight file: " + path);
  return load_weights(in);
}

} // namespace mpp
