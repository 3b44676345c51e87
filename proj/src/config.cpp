#include "riswpt/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace riswpt {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return {};
    return s.substr(b, e - b + 1);
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "device_disc_center_x", "device_disc_center_y", "device_disc_radius",
        "device_ring_inner",
        "uav_init_x", "uav_init_y", "uav_init_z", "uav_altitude",
        "ris_x", "ris_y", "ris_z", "ris_spacing_over_wavelength",
        "beta0_db", "kappa1", "kappa2", "kappa3", "rician_factor",
        "noise_dbm", "tx_power_w", "eh_efficiency", "bandwidth_hz",
        "v_max", "motion_noise_std", "bounds_xy", "bounds_z_min",
        "bounds_z_max", "feature_scale", "rss_per_episode",
        "hidden1", "hidden2", "actor_lr", "critic_lr", "policy_lr",
        "value_lr", "discount", "soft_rate", "noise_scale", "noise_decay",
        "batch_size", "buffer_capacity", "warmup", "clip_epsilon",
        "ppo_epochs", "init_std", "normalize_advantages", "entropy_coef",
        "reward_scale", "oracle_tau_grid", "oracle_phase_grid",
    };
    return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw SimError(Err::ConfigParse,
                           "line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw SimError(Err::ConfigParse,
                           "line " + std::to_string(lineno) + ": empty key or value");
        if (!known_keys().count(key))
            throw SimError(Err::ConfigParse, "unknown key '" + key + "'");
        cfg.values_[key] = value;
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw SimError(Err::Io, "cannot open config file " + path);
    std::ostringstream buf;
    buf << f.rdbuf();
    return parse_string(buf.str());
}

bool KeyValueConfig::has(const std::string& key) const {
    return values_.count(key) != 0;
}

double KeyValueConfig::get_double(const std::string& key,
                                  double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size())
            throw SimError(Err::ConfigParse, "bad number for " + key);
        return v;
    } catch (const std::invalid_argument&) {
        throw SimError(Err::ConfigParse, "bad number for " + key);
    }
}

std::size_t KeyValueConfig::get_size(const std::string& key,
                                     std::size_t fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    if (v < 0.0 || v != std::floor(v))
        throw SimError(Err::ConfigParse, key + " must be a non-negative integer");
    return static_cast<std::size_t>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw SimError(Err::ConfigParse, key + " must be true/false");
}

std::string KeyValueConfig::get_string(const std::string& key,
                                       const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
    // splitmix64 over the salted seed.
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

ExperimentProfile ExperimentProfile::from_config(const KeyValueConfig& cfg) {
    ExperimentProfile p;
    p.device_disc_center_x = cfg.get_double("device_disc_center_x", p.device_disc_center_x);
    p.device_disc_center_y = cfg.get_double("device_disc_center_y", p.device_disc_center_y);
    p.device_disc_radius = cfg.get_double("device_disc_radius", p.device_disc_radius);
    p.device_ring_inner = cfg.get_double("device_ring_inner", p.device_ring_inner);
    p.uav_init_x = cfg.get_double("uav_init_x", p.uav_init_x);
    p.uav_init_y = cfg.get_double("uav_init_y", p.uav_init_y);
    p.uav_init_z = cfg.get_double("uav_init_z", p.uav_init_z);
    p.uav_altitude = cfg.get_double("uav_altitude", p.uav_altitude);
    p.ris_x = cfg.get_double("ris_x", p.ris_x);
    p.ris_y = cfg.get_double("ris_y", p.ris_y);
    p.ris_z = cfg.get_double("ris_z", p.ris_z);
    p.ris_spacing_over_wavelength =
        cfg.get_double("ris_spacing_over_wavelength", p.ris_spacing_over_wavelength);
    p.beta0_db = cfg.get_double("beta0_db", p.beta0_db);
    p.kappa1 = cfg.get_double("kappa1", p.kappa1);
    p.kappa2 = cfg.get_double("kappa2", p.kappa2);
    p.kappa3 = cfg.get_double("kappa3", p.kappa3);
    p.rician_factor = cfg.get_double("rician_factor", p.rician_factor);
    p.noise_dbm = cfg.get_double("noise_dbm", p.noise_dbm);
    p.tx_power_w = cfg.get_double("tx_power_w", p.tx_power_w);
    p.eh_efficiency = cfg.get_double("eh_efficiency", p.eh_efficiency);
    p.bandwidth_hz = cfg.get_double("bandwidth_hz", p.bandwidth_hz);
    p.v_max = cfg.get_double("v_max", p.v_max);
    p.motion_noise_std = cfg.get_double("motion_noise_std", p.motion_noise_std);
    p.bounds_xy = cfg.get_double("bounds_xy", p.bounds_xy);
    p.bounds_z_min = cfg.get_double("bounds_z_min", p.bounds_z_min);
    p.bounds_z_max = cfg.get_double("bounds_z_max", p.bounds_z_max);
    p.feature_scale = cfg.get_double("feature_scale", p.feature_scale);
    p.rss_per_episode = cfg.get_bool("rss_per_episode", p.rss_per_episode);
    p.hidden1 = cfg.get_size("hidden1", p.hidden1);
    p.hidden2 = cfg.get_size("hidden2", p.hidden2);
    p.actor_lr = cfg.get_double("actor_lr", p.actor_lr);
    p.critic_lr = cfg.get_double("critic_lr", p.critic_lr);
    p.policy_lr = cfg.get_double("policy_lr", p.policy_lr);
    p.value_lr = cfg.get_double("value_lr", p.value_lr);
    p.discount = cfg.get_double("discount", p.discount);
    p.soft_rate = cfg.get_double("soft_rate", p.soft_rate);
    p.noise_scale = cfg.get_double("noise_scale", p.noise_scale);
    p.noise_decay = cfg.get_double("noise_decay", p.noise_decay);
    p.batch_size = cfg.get_size("batch_size", p.batch_size);
    p.buffer_capacity = cfg.get_size("buffer_capacity", p.buffer_capacity);
    p.warmup = cfg.get_size("warmup", p.warmup);
    p.clip_epsilon = cfg.get_double("clip_epsilon", p.clip_epsilon);
    p.ppo_epochs = cfg.get_size("ppo_epochs", p.ppo_epochs);
    p.init_std = cfg.get_double("init_std", p.init_std);
    p.normalize_advantages =
        cfg.get_bool("normalize_advantages", p.normalize_advantages);
    p.entropy_coef = cfg.get_double("entropy_coef", p.entropy_coef);
    p.reward_scale = cfg.get_double("reward_scale", p.reward_scale);
    p.oracle_tau_grid = cfg.get_size("oracle_tau_grid", p.oracle_tau_grid);
    p.oracle_phase_grid = cfg.get_size("oracle_phase_grid", p.oracle_phase_grid);
    return p;
}

NetworkConfig ExperimentProfile::network_config(std::size_t n_devices,
                                                std::size_t k_elements,
                                                std::uint64_t seed) const {
    NetworkConfig c;
    c.device_count = n_devices;
    Rng placement(derive_seed(seed, 0));
    c.device_positions = place_devices_annulus(
        placement, n_devices,
        {device_disc_center_x, device_disc_center_y, 0.0}, device_ring_inner,
        device_disc_radius);
    c.uav_initial = {uav_init_x, uav_init_y, uav_init_z};
    c.uav_altitude = uav_altitude;
    c.ris = {{ris_x, ris_y, ris_z}, k_elements, ris_spacing_over_wavelength};
    c.pathloss.beta0 = std::pow(10.0, beta0_db / 10.0);
    c.pathloss.kappa1 = kappa1;
    c.pathloss.kappa2 = kappa2;
    c.pathloss.kappa3 = kappa3;
    c.pathloss.rician_factor = rician_factor;
    c.pathloss.noise_power = std::pow(10.0, (noise_dbm - 30.0) / 10.0);
    c.tx_power = tx_power_w;
    c.eh_efficiency = eh_efficiency;
    c.bandwidth = bandwidth_hz;
    c.flight_bounds.lo = {-bounds_xy, -bounds_xy, bounds_z_min};
    c.flight_bounds.hi = {bounds_xy, bounds_xy, bounds_z_max};
    c.v_max = v_max;
    c.motion_noise_std = motion_noise_std;
    c.feature_scale = feature_scale;
    return c;
}

DdpgConfig ExperimentProfile::ddpg_config() const {
    DdpgConfig c;
    c.hidden = {hidden1, hidden2};
    c.actor_lr = actor_lr;
    c.critic_lr = critic_lr;
    c.discount = discount;
    c.soft_rate = soft_rate;
    c.noise_scale = noise_scale;
    c.noise_decay = noise_decay;
    c.batch_size = batch_size;
    c.buffer_capacity = buffer_capacity;
    c.warmup = warmup;
    c.reward_scale = reward_scale;
    return c;
}

PpoConfig ExperimentProfile::ppo_config() const {
    PpoConfig c;
    c.hidden = {hidden1, hidden2};
    c.policy_lr = policy_lr;
    c.value_lr = value_lr;
    c.discount = discount;
    c.clip_epsilon = clip_epsilon;
    c.epochs = ppo_epochs;
    c.minibatch = batch_size;
    c.init_std = init_std;
    c.normalize_advantages = normalize_advantages;
    c.entropy_coef = entropy_coef;
    c.reward_scale = reward_scale;
    return c;
}

std::map<std::string, std::string> ExperimentProfile::describe() const {
    auto num = [](double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        return s.str();
    };
    std::map<std::string, std::string> m;
    m["device_disc_center_x"] = num(device_disc_center_x);
    m["device_disc_center_y"] = num(device_disc_center_y);
    m["device_disc_radius"] = num(device_disc_radius);
    m["device_ring_inner"] = num(device_ring_inner);
    m["uav_init_x"] = num(uav_init_x);
    m["uav_init_y"] = num(uav_init_y);
    m["uav_init_z"] = num(uav_init_z);
    m["uav_altitude"] = num(uav_altitude);
    m["ris_x"] = num(ris_x);
    m["ris_y"] = num(ris_y);
    m["ris_z"] = num(ris_z);
    m["ris_spacing_over_wavelength"] = num(ris_spacing_over_wavelength);
    m["beta0_db"] = num(beta0_db);
    m["kappa1"] = num(kappa1);
    m["kappa2"] = num(kappa2);
    m["kappa3"] = num(kappa3);
    m["rician_factor"] = num(rician_factor);
    m["noise_dbm"] = num(noise_dbm);
    m["tx_power_w"] = num(tx_power_w);
    m["eh_efficiency"] = num(eh_efficiency);
    m["bandwidth_hz"] = num(bandwidth_hz);
    m["v_max"] = num(v_max);
    m["motion_noise_std"] = num(motion_noise_std);
    m["bounds_xy"] = num(bounds_xy);
    m["bounds_z_min"] = num(bounds_z_min);
    m["bounds_z_max"] = num(bounds_z_max);
    m["feature_scale"] = num(feature_scale);
    m["rss_per_episode"] = rss_per_episode ? "true" : "false";
    m["hidden1"] = num(static_cast<double>(hidden1));
    m["hidden2"] = num(static_cast<double>(hidden2));
    m["actor_lr"] = num(actor_lr);
    m["critic_lr"] = num(critic_lr);
    m["policy_lr"] = num(policy_lr);
    m["value_lr"] = num(value_lr);
    m["discount"] = num(discount);
    m["soft_rate"] = num(soft_rate);
    m["noise_scale"] = num(noise_scale);
    m["noise_decay"] = num(noise_decay);
    m["batch_size"] = num(static_cast<double>(batch_size));
    m["buffer_capacity"] = num(static_cast<double>(buffer_capacity));
    m["warmup"] = num(static_cast<double>(warmup));
    m["clip_epsilon"] = num(clip_epsilon);
    m["ppo_epochs"] = num(static_cast<double>(ppo_epochs));
    m["init_std"] = num(init_std);
    m["normalize_advantages"] = normalize_advantages ? "true" : "false";
    m["entropy_coef"] = num(entropy_coef);
    m["reward_scale"] = num(reward_scale);
    m["oracle_tau_grid"] = num(static_cast<double>(oracle_tau_grid));
    m["oracle_phase_grid"] = num(static_cast<double>(oracle_phase_grid));
    return m;
}

}  // namespace riswpt
