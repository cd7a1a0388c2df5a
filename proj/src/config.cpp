#include "mpp/config.hpp"

#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mpp {

using nlohmann::json;

std::vector<double> SweepGrid::values() const {
  std::vector<double> v(points);
  for (int i = 0; i < points; ++i)
    v[i] = points == 1 ? start_thz
                       : start_thz + (stop_thz - start_thz) * i / (points - 1);
  return v;
}

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error([&errs] {
        std::ostringstream msg;
        msg << "configuration invalid (" << errs.size() << " problem"
            << (errs.size() == 1 ? "" : "s") << "):";
        for (const auto& e : errs) msg << "\n  - " << e;
        return msg.str();
      }()),
      errors(std::move(errs)) {}

namespace {

class Parser {
 public:
  RunConfig parse(const json& root) {
    RunConfig cfg;
    cfg.device = reference_device(48); // omitted device keys inherit these
    expect_keys(root, "",
                {"schema_version", "device", "single_mode", "bias", "solver",
                 "wigner", "oracle_n_max", "output_dir"});
    read(root, "", "schema_version", cfg.schema_version);
    if (cfg.schema_version != kSchemaVersion)
      fail("schema_version " + std::to_string(cfg.schema_version) +
           " unsupported (this build reads version " +
           std::to_string(kSchemaVersion) + ")");
    if (root.contains("device")) parse_device(root.at("device"), cfg.device);
    if (root.contains("single_mode")) {
      SingleModeConfig sm;
      parse_single_mode(root.at("single_mode"), sm);
      cfg.single_mode = sm;
    }
    if (root.contains("bias")) parse_bias(root.at("bias"), cfg.bias);
    if (root.contains("solver")) parse_solver(root.at("solver"), cfg.solver);
    if (root.contains("wigner")) parse_wigner(root.at("wigner"), cfg);
    read(root, "", "oracle_n_max", cfg.oracle_n_max);
    read(root, "", "output_dir", cfg.output_dir);

    check_invariants(cfg);
    if (!errors_.empty()) throw ConfigError(std::move(errors_));
    return cfg;
  }

 private:
  std::vector<std::string> errors_;

  void fail(const std::string& what) { errors_.push_back(what); }

  void expect_keys(const json& obj, const std::string& scope,
                   const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
      fail((scope.empty() ? std::string("top level") : scope) +
           ": expected a JSON object");
      return;
    }
    for (const auto& item : obj.items())
      if (!allowed.count(item.key()))
        fail((scope.empty() ? std::string("top level") : scope) +
             ": unknown key '" + item.key() + "'");
  }

  template <class T>
  void read(const json& obj, const std::string& scope, const char* key, T& out) {
    if (!obj.is_object() || !obj.contains(key)) return;
    try {
      out = obj.at(key).get<T>();
    } catch (const json::exception&) {
      fail((scope.empty() ? std::string(key) : scope + "." + key) +
           ": wrong type");
    }
  }

  void parse_stack(const json& j, MaterialStack& s) {
    expect_keys(j, "device.stack",
                {"eps_sub", "eps_barrier", "cap_thickness_um",
                 "stack_thickness_um", "metal_coverage", "effective_mass_ratio",
                 "n_qw", "qw_depths_um", "qw_spacing_um", "rho_per_qw_m2"});
    const std::string sc = "device.stack";
    read(j, sc, "eps_sub", s.eps_sub);
    read(j, sc, "eps_barrier", s.eps_barrier);
    read(j, sc, "cap_thickness_um", s.cap_thickness_um);
    read(j, sc, "stack_thickness_um", s.stack_thickness_um);
    read(j, sc, "metal_coverage", s.metal_coverage);
    read(j, sc, "effective_mass_ratio", s.effective_mass_ratio);
    read(j, sc, "n_qw", s.n_qw);
    read(j, sc, "rho_per_qw_m2", s.rho_per_qw_m2);
    if (j.is_object() && j.contains("qw_depths_um") && j.contains("qw_spacing_um"))
      fail("device.stack: give qw_depths_um or qw_spacing_um, not both");
    read(j, sc, "qw_depths_um", s.qw_depths_um);
    if (j.is_object() && j.contains("qw_spacing_um")) {
      double spacing = 0.0;
      read(j, sc, "qw_spacing_um", spacing);
      if (!(spacing > 0.0)) {
        fail("device.stack.qw_spacing_um: must be positive");
      } else {
        s.qw_depths_um.resize(s.n_qw > 0 ? s.n_qw : 0);
        for (int w = 0; w < s.n_qw; ++w)
          s.qw_depths_um[w] = s.cap_thickness_um + w * spacing;
        if (!j.contains("stack_thickness_um"))
          s.stack_thickness_um = s.n_qw * spacing;
      }
    }
  }

  void parse_coupling(const json& j, DeviceConfig& d) {
    expect_keys(j, "device.coupling",
                {"source", "path", "global_scale_thz", "base"});
    std::string source = "synthetic";
    read(j, "device.coupling", "source", source);
    if (source == "synthetic")
      d.source = CouplingSource::Synthetic;
    else if (source == "file")
      d.source = CouplingSource::File;
    else
      fail("device.coupling.source: expected 'synthetic' or 'file', got '" +
           source + "'");
    read(j, "device.coupling", "path", d.weights_path);
    read(j, "device.coupling", "global_scale_thz", d.global_scale_thz);
    if (j.is_object() && j.contains("base")) {
      const auto& base = j.at("base");
      if (!base.is_array()) {
        fail("device.coupling.base: expected an array");
        return;
      }
      for (std::size_t i = 0; i < base.size(); ++i) {
        const std::string sc = "device.coupling.base[" + std::to_string(i) + "]";
        expect_keys(base[i], sc, {"j", "abs_alpha", "amplitude"});
        int mode_j = 1, abs_alpha = 0;
        double amp = 1.0;
        read(base[i], sc, "j", mode_j);
        read(base[i], sc, "abs_alpha", abs_alpha);
        read(base[i], sc, "amplitude", amp);
        d.synthetic.base[{mode_j, abs_alpha}] = amp;
      }
    }
  }

  void parse_oscillators(const json& j, CavityOscillatorTable& t) {
    if (!j.is_array()) {
      fail("device.oscillators: expected an array");
      return;
    }
    t.rows.clear();
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string sc = "device.oscillators[" + std::to_string(i) + "]";
      expect_keys(j[i], sc, {"nu_thz", "gamma_thz", "amplitude", "phase_rad"});
      OscillatorRow r;
      read(j[i], sc, "nu_thz", r.nu_thz);
      read(j[i], sc, "gamma_thz", r.gamma_thz);
      read(j[i], sc, "amplitude", r.amplitude);
      read(j[i], sc, "phase_rad", r.phase_rad);
      t.rows.push_back(r);
    }
  }

  void parse_device(const json& j, DeviceConfig& d) {
    expect_keys(j, "device",
                {"stack", "period_um", "alpha_cut", "screening_depth_um",
                 "n_cavity", "coupling", "oscillators"});
    if (j.is_object() && j.contains("stack")) parse_stack(j.at("stack"), d.stack);
    read(j, "device", "period_um", d.period_um);
    read(j, "device", "alpha_cut", d.alpha_cut);
    read(j, "device", "screening_depth_um", d.screening_depth_um);
    read(j, "device", "n_cavity", d.n_cavity);
    if (j.is_object() && j.contains("coupling"))
      parse_coupling(j.at("coupling"), d);
    if (j.is_object() && j.contains("oscillators"))
      parse_oscillators(j.at("oscillators"), d.oscillators);
  }

  void parse_single_mode(const json& j, SingleModeConfig& sm) {
    expect_keys(j, "single_mode", {"nu_thz", "eta"});
    read(j, "single_mode", "nu_thz", sm.nu_thz);
    read(j, "single_mode", "eta", sm.eta);
  }

  void parse_bias(const json& j, BiasConfig& b) {
    expect_keys(j, "bias", {"nu_c_thz", "sweep"});
    read(j, "bias", "nu_c_thz", b.nu_c_thz);
    if (j.is_object() && j.contains("sweep")) {
      SweepGrid g;
      expect_keys(j.at("sweep"), "bias.sweep", {"start_thz", "stop_thz", "points"});
      read(j.at("sweep"), "bias.sweep", "start_thz", g.start_thz);
      read(j.at("sweep"), "bias.sweep", "stop_thz", g.stop_thz);
      read(j.at("sweep"), "bias.sweep", "points", g.points);
      b.sweep = g;
    }
  }

  void parse_solver(const json& j, SolverConfig& s) {
    expect_keys(j, "solver",
                {"dt_ps", "t_end_ps", "gamma_mp_thz", "gamma_cavity_thz",
                 "pulse", "dip_target", "nu_max_thz", "nu_points"});
    read(j, "solver", "dt_ps", s.integration.dt_ps);
    read(j, "solver", "t_end_ps", s.integration.t_end_ps);
    read(j, "solver", "gamma_mp_thz", s.integration.gamma_mp_thz);
    read(j, "solver", "gamma_cavity_thz", s.integration.gamma_cavity_thz);
    read(j, "solver", "dip_target", s.dip_target);
    read(j, "solver", "nu_max_thz", s.nu_max_thz);
    read(j, "solver", "nu_points", s.nu_points);
    if (j.is_object() && j.contains("pulse")) {
      expect_keys(j.at("pulse"), "solver.pulse",
                  {"t0_ps", "sigma_ps", "amplitude"});
      read(j.at("pulse"), "solver.pulse", "t0_ps", s.pulse.t0_ps);
      read(j.at("pulse"), "solver.pulse", "sigma_ps", s.pulse.sigma_ps);
      read(j.at("pulse"), "solver.pulse", "amplitude", s.pulse.amplitude);
    }
  }

  void parse_wigner(const json& j, RunConfig& cfg) {
    expect_keys(j, "wigner",
                {"x_min", "x_max", "p_min", "p_max", "nx", "np", "mode_j"});
    read(j, "wigner", "x_min", cfg.wigner.x_min);
    read(j, "wigner", "x_max", cfg.wigner.x_max);
    read(j, "wigner", "p_min", cfg.wigner.p_min);
    read(j, "wigner", "p_max", cfg.wigner.p_max);
    read(j, "wigner", "nx", cfg.wigner.nx);
    read(j, "wigner", "np", cfg.wigner.np);
    read(j, "wigner", "mode_j", cfg.wigner_mode_j);
  }

  void check_invariants(const RunConfig& cfg) {
    try {
      cfg.device.validate();
    } catch (const std::invalid_argument& e) {
      fail(std::string("device: ") + e.what());
    }
    if (cfg.single_mode) {
      if (!(cfg.single_mode->nu_thz > 0.0))
        fail("single_mode.nu_thz: must be positive");
      if (!(cfg.single_mode->eta >= 0.0))
        fail("single_mode.eta: must be >= 0");
    }
    if (!(cfg.bias.nu_c_thz >= 0.0)) fail("bias.nu_c_thz: must be >= 0");
    if (cfg.bias.sweep) {
      const auto& g = *cfg.bias.sweep;
      if (g.points < 1) fail("bias.sweep.points: must be >= 1");
      if (!(g.stop_thz >= g.start_thz) || !(g.start_thz >= 0.0))
        fail("bias.sweep: need 0 <= start_thz <= stop_thz");
    }
    const auto& ip = cfg.solver.integration;
    if (!(ip.dt_ps > 0.0)) fail("solver.dt_ps: must be positive");
    if (!(ip.t_end_ps > ip.dt_ps)) fail("solver.t_end_ps: must exceed dt_ps");
    if (!(ip.gamma_mp_thz >= 0.0)) fail("solver.gamma_mp_thz: must be >= 0");
    for (double g : ip.gamma_cavity_thz)
      if (!(g >= 0.0)) fail("solver.gamma_cavity_thz: entries must be >= 0");
    if (!(cfg.solver.pulse.sigma_ps > 0.0))
      fail("solver.pulse.sigma_ps: must be positive");
    if (!(cfg.solver.dip_target > 0.0 && cfg.solver.dip_target < 1.0))
      fail("solver.dip_target: must lie in (0, 1)");
    if (cfg.solver.nu_points < 2) fail("solver.nu_points: must be >= 2");
    if (!(cfg.solver.nu_max_thz > 0.0)) fail("solver.nu_max_thz: must be positive");
    if (cfg.wigner.nx < 2 || cfg.wigner.np < 2)
      fail("wigner: grid needs at least 2x2 points");
    if (!(cfg.wigner.x_max > cfg.wigner.x_min) ||
        !(cfg.wigner.p_max > cfg.wigner.p_min))
      fail("wigner: empty quadrature ranges");
    if (cfg.wigner_mode_j < 1 || cfg.wigner_mode_j > cfg.device.n_cavity)
      fail("wigner.mode_j: outside 1..n_cavity");
    if (cfg.oracle_n_max < 1) fail("oracle_n_max: must be >= 1");
    if (cfg.output_dir.empty()) fail("output_dir: must be non-empty");
  }
};

} // namespace

RunConfig parse_config_text(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("JSON parse error: ") + e.what()});
  }
  return Parser{}.parse(root);
}

RunConfig parse_config(const std::string& path) {
  return parse_config_text(read_file(path));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

} // namespace mpp
