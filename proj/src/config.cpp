#include "qbench/config.hpp"

#include <fstream>
#include <sstream>

namespace qbench {

namespace {

// allowed-key schema walk; leaves are ignored, objects enumerate their keys
void check_keys(const Json& value, const Json& schema, const std::string& path) {
  if (!schema.is_object() || !value.is_object()) return;
  for (auto it = value.begin(); it != value.end(); ++it) {
    if (!schema.contains(it.key()))
      throw std::runtime_error("config: unknown key '" + path + "/" + it.key() + "'");
    check_keys(it.value(), schema.at(it.key()), path + "/" + it.key());
  }
}

const Json& config_schema() {
  static const Json schema = Json::parse(R"({
    "device": {
      "f10_mhz": [], "nonlinearity_mhz": [], "nn_coupling_mhz": [],
      "nnn_coupling_mhz": 0, "readout_fidelity": 0, "init_fidelity": 0,
      "flux_noise_uphi0_sqrthz": 0,
      "durations": {
        "pi_ns": [], "half_ns": [], "z_ns": [], "idle_ns": [], "h_ns": [],
        "twot_ns": [], "cz_ns": {"0-1": 0, "1-2": 0, "2-3": 0, "3-4": 0}
      }
    },
    "noise": {
      "t1_us": [], "tphi_us": [], "sigma_quasistatic_mhz": [],
      "overrotation": 0, "depol_per_clifford": 0, "cz_leak": 0,
      "idle_error_per_10ns": 0, "zz_mhz": 0
    },
    "gate_error_profile": "",
    "seed": 0,
    "experiment": {
      "rb": {"n_qubits": 0, "qubits": [], "m_values": [], "k": 0, "shots": 0,
              "interleaved": "", "qs_draws": 0, "weighted_fit": false,
              "bootstrap": 0},
      "tomo": {"state": "", "shots": 0, "repetitions": 0},
      "ghz": {"n": 0, "echo": false, "shots": 0, "repetitions": 0,
               "qs_draws": 0},
      "cz": {"shape": "", "g_mhz": 0, "eta_mhz": 0, "idle_detuning_mhz": 0,
              "duration_ns": 0, "ramp_fraction": 0, "dt_ns": 0,
              "hold_detuning_mhz": 0, "tune": false},
      "filter": {"max_delay_ns": 0, "delay_step_ns": 0},
      "zstep": {"a1": 0, "a2": 0, "tau1_ns": 0, "tau2_ns": 0,
                 "amplitude_ghz": 0, "t_max_ns": 0, "dt_ns": 0}
    }
  })");
  return schema;
}

template <std::size_t N>
void read_array(const Json& j, const char* key, std::array<double, N>& out) {
  if (!j.contains(key)) return;
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != N)
    throw std::runtime_error(std::string("config: '") + key + "' must be an array of " +
                             std::to_string(N));
  for (std::size_t i = 0; i < N; ++i) out[i] = a[i].get<double>();
}

void read_vector(const Json& j, const char* key, std::vector<double>& out) {
  if (!j.contains(key)) return;
  out = j.at(key).get<std::vector<double>>();
}

}  // namespace

NoiseParams RunConfig::resolved_noise() const {
  NoiseParams np = noise;
  if (gate_error_profile == "device_tables") np.gate_errors = device_gate_error_table();
  else if (gate_error_profile != "none")
    throw std::runtime_error("config: unknown gate_error_profile '" + gate_error_profile + "'");
  return np;
}

RunConfig default_config() {
  RunConfig cfg;
  cfg.device.f10_mhz = {5805, 5238, 5780, 5060, 5696};
  cfg.device.nonlinearity_mhz = {-217, -226, -214, -212, -223};
  cfg.device.nn_coupling_mhz = {27.7, 30.8, 30.4, 30.9};
  cfg.device.durations = default_durations();
  cfg.noise.t1_us = {30, 30, 30, 30, 30};
  cfg.noise.tphi_us = {10, 10, 10, 10, 10};
  cfg.noise.sigma_qs_mhz = {0, 0, 0, 0, 0};
  cfg.noise.idle_error_per_10ns = 0.0005;
  return cfg;
}

RunConfig config_from_json(const Json& j) {
  check_keys(j, config_schema(), "");
  RunConfig cfg = default_config();
  if (j.contains("device")) {
    const auto& d = j.at("device");
    read_array(d, "f10_mhz", cfg.device.f10_mhz);
    read_array(d, "nonlinearity_mhz", cfg.device.nonlinearity_mhz);
    read_array(d, "nn_coupling_mhz", cfg.device.nn_coupling_mhz);
    if (d.contains("nnn_coupling_mhz")) cfg.device.nnn_coupling_mhz = d.at("nnn_coupling_mhz");
    if (d.contains("readout_fidelity")) cfg.device.readout_fidelity = d.at("readout_fidelity");
    if (d.contains("init_fidelity")) cfg.device.init_fidelity = d.at("init_fidelity");
    if (d.contains("flux_noise_uphi0_sqrthz"))
      cfg.device.flux_noise_uphi0_sqrthz = d.at("flux_noise_uphi0_sqrthz");
    if (d.contains("durations")) {
      const auto& t = d.at("durations");
      read_array(t, "pi_ns", cfg.device.durations.pi_ns);
      read_array(t, "half_ns", cfg.device.durations.half_ns);
      read_array(t, "z_ns", cfg.device.durations.z_ns);
      read_array(t, "idle_ns", cfg.device.durations.idle_ns);
      read_array(t, "h_ns", cfg.device.durations.h_ns);
      read_array(t, "twot_ns", cfg.device.durations.twot_ns);
      if (t.contains("cz_ns")) {
        for (auto it = t.at("cz_ns").begin(); it != t.at("cz_ns").end(); ++it) {
          int a = it.key()[0] - '0', b = it.key()[2] - '0';
          cfg.device.durations.cz_ns[{std::min(a, b), std::max(a, b)}] = it.value().get<double>();
        }
      }
      cfg.device.durations.validate();
    }
  }
  if (j.contains("noise")) {
    const auto& n = j.at("noise");
    read_vector(n, "t1_us", cfg.noise.t1_us);
    read_vector(n, "tphi_us", cfg.noise.tphi_us);
    read_vector(n, "sigma_quasistatic_mhz", cfg.noise.sigma_qs_mhz);
    if (n.contains("overrotation")) cfg.noise.overrotation = n.at("overrotation");
    if (n.contains("depol_per_clifford")) cfg.noise.depol_per_clifford = n.at("depol_per_clifford");
    if (n.contains("cz_leak")) cfg.noise.cz_leak = n.at("cz_leak");
    if (n.contains("idle_error_per_10ns")) cfg.noise.idle_error_per_10ns = n.at("idle_error_per_10ns");
    if (n.contains("zz_mhz")) cfg.noise.zz_mhz = n.at("zz_mhz");
    cfg.noise.validate();
  }
  if (j.contains("gate_error_profile")) cfg.gate_error_profile = j.at("gate_error_profile");
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("experiment")) cfg.experiment = j.at("experiment");
  cfg.resolved_noise();  // validates the profile name
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  Json j;
  try {
    j = Json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    // translate the byte offset into a line/column anchor
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw std::runtime_error("config: parse error at " + path + ":" + std::to_string(line) +
                             ":" + std::to_string(col) + ": " + e.what());
  }
  return config_from_json(j);
}

Json config_to_json(const RunConfig& cfg) {
  Json j;
  Json dur;
  dur["pi_ns"] = cfg.device.durations.pi_ns;
  dur["half_ns"] = cfg.device.durations.half_ns;
  dur["z_ns"] = cfg.device.durations.z_ns;
  dur["idle_ns"] = cfg.device.durations.idle_ns;
  dur["h_ns"] = cfg.device.durations.h_ns;
  dur["twot_ns"] = cfg.device.durations.twot_ns;
  Json czd = Json::object();
  for (const auto& [pair, v] : cfg.device.durations.cz_ns)
    czd[std::to_string(pair.first) + "-" + std::to_string(pair.second)] = v;
  dur["cz_ns"] = czd;

  j["device"] = {{"f10_mhz", cfg.device.f10_mhz},
                 {"nonlinearity_mhz", cfg.device.nonlinearity_mhz},
                 {"nn_coupling_mhz", cfg.device.nn_coupling_mhz},
                 {"nnn_coupling_mhz", cfg.device.nnn_coupling_mhz},
                 {"readout_fidelity", cfg.device.readout_fidelity},
                 {"init_fidelity", cfg.device.init_fidelity},
                 {"flux_noise_uphi0_sqrthz", cfg.device.flux_noise_uphi0_sqrthz},
                 {"durations", dur}};
  j["noise"] = {{"t1_us", cfg.noise.t1_us},
                {"tphi_us", cfg.noise.tphi_us},
                {"sigma_quasistatic_mhz", cfg.noise.sigma_qs_mhz},
                {"overrotation", cfg.noise.overrotation},
                {"depol_per_clifford", cfg.noise.depol_per_clifford},
                {"cz_leak", cfg.noise.cz_leak},
                {"idle_error_per_10ns", cfg.noise.idle_error_per_10ns},
                {"zz_mhz", cfg.noise.zz_mhz}};
  j["gate_error_profile"] = cfg.gate_error_profile;
  j["seed"] = cfg.seed;
  j["experiment"] = cfg.experiment;
  return j;
}

GateErrorTable device_gate_error_table() {
  using K = GateKind;
  GateErrorTable t;
  struct Row {
    K kind;
    std::array<double, 5> f;
  };
  // benchmarked per-gate fidelities (2T on qubit 0 was not benchmarked; its
  // column reuses the qubit average)
  static const std::vector<Row> rows = {
      {K::I, {0.9990, 0.9996, 0.9995, 0.9994, 0.9991}},
      {K::X, {0.9992, 0.9996, 0.9992, 0.9991, 0.9991}},
      {K::Y, {0.9991, 0.9995, 0.9993, 0.9992, 0.9991}},
      {K::X2, {0.9992, 0.9993, 0.9993, 0.9994, 0.9993}},
      {K::Y2, {0.9991, 0.9993, 0.9995, 0.9994, 0.9994}},
      {K::Xm, {0.9991, 0.9995, 0.9992, 0.9989, 0.9991}},
      {K::Ym, {0.9991, 0.9995, 0.9991, 0.9987, 0.9991}},
      {K::X2m, {0.9991, 0.9992, 0.9993, 0.9990, 0.9995}},
      {K::Y2m, {0.9991, 0.9992, 0.9995, 0.9990, 0.9994}},
      {K::H, {0.9986, 0.9986, 0.9991, 0.9981, 0.9988}},
      {K::Z, {0.9995, 0.9988, 0.9994, 0.9991, 0.9993}},
      {K::Z2, {0.9998, 0.9991, 0.9998, 0.9995, 0.9996}},
      {K::TwoT, {0.9992, 0.9989, 0.9994, 0.9989, 0.9990}},
  };
  for (const auto& row : rows)
    for (int q = 0; q < 5; ++q) t.sq[{row.kind, q}] = 1.0 - row.f[q];
  // no T row: only the composite 2T was benchmarked
  t.cz[{0, 1}] = 1.0 - 0.9924;
  t.cz[{1, 2}] = 1.0 - 0.9936;
  t.cz[{2, 3}] = 1.0 - 0.9944;
  t.cz[{3, 4}] = 1.0 - 0.9900;
  return t;
}

NoiseParams calibrated_ghz_noise() {
  NoiseParams np;
  np.t1_us = {30, 30, 30, 30, 30};
  np.idle_error_per_10ns = 0.0005;
  np.gate_errors = device_gate_error_table();
  return np;
}

}  // namespace qbench
