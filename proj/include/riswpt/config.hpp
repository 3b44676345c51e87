#pragma once

#include <map>
#include <string>

#include "riswpt/ddpg.hpp"
#include "riswpt/env.hpp"
#include "riswpt/ppo.hpp"

namespace riswpt {

// Flat "key = value" file; '#' starts a comment. Unknown keys are rejected so
// typos fail loudly.
class KeyValueConfig {
public:
    static KeyValueConfig parse_file(const std::string& path);
    static KeyValueConfig parse_string(const std::string& text);

    bool has(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;
    std::string get_string(const std::string& key,
                           const std::string& fallback) const;

    const std::map<std::string, std::string>& entries() const {
        return values_;
    }

private:
    std::map<std::string, std::string> values_;
};

// Deterministic per-purpose seed streams derived from one experiment seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

// Experiment profile: every tunable with its shipped default, overridable
// from a KeyValueConfig. Defaults follow the simulation-parameter table
// (beta0 = -30 dB, noise = -134 dBm, P0 = 5 W, eta = 0.5, v_max = 20 m,
// kappa = 4/2/2.2, beta1 = 4, zeta = 0.9, eps = 0.2, batch = 32) with rates
// reported per Hz.
struct ExperimentProfile {
    // environment
    double device_disc_center_x = 0.0;
    double device_disc_center_y = 0.0;
    double device_disc_radius = 50.0;
    double device_ring_inner = 0.0;  // > 0 places devices in an annulus
    double uav_init_x = 0.0;
    double uav_init_y = 0.0;
    double uav_init_z = 200.0;
    double uav_altitude = 200.0;
    double ris_x = 200.0, ris_y = 0.0, ris_z = 50.0;
    double ris_spacing_over_wavelength = 0.5;
    double beta0_db = -30.0;
    double kappa1 = 4.0, kappa2 = 2.0, kappa3 = 2.2;
    double rician_factor = 4.0;
    double noise_dbm = -134.0;
    double tx_power_w = 5.0;
    double eh_efficiency = 0.5;
    double bandwidth_hz = 1.0;
    double v_max = 20.0;
    double motion_noise_std = 0.0;
    double bounds_xy = 500.0;
    double bounds_z_min = 50.0, bounds_z_max = 300.0;
    double feature_scale = 0.0;  // 0 = auto
    bool rss_per_episode = false;

    // learners
    std::size_t hidden1 = 128, hidden2 = 128;
    double actor_lr = 1e-4, critic_lr = 1e-3;
    double policy_lr = 1e-4, value_lr = 1e-3;
    double discount = 0.9;
    double soft_rate = 0.01;
    double noise_scale = 0.1, noise_decay = 0.999;
    std::size_t batch_size = 32;
    std::size_t buffer_capacity = 100000;
    std::size_t warmup = 1000;
    double clip_epsilon = 0.2;
    std::size_t ppo_epochs = 4;
    double init_std = 0.3;
    bool normalize_advantages = true;
    double entropy_coef = 0.0;
    double reward_scale = 0.0;  // 0 = auto (1 / nominal sum-rate)

    // oracle
    std::size_t oracle_tau_grid = 100;
    std::size_t oracle_phase_grid = 64;

    static ExperimentProfile from_config(const KeyValueConfig& cfg);

    NetworkConfig network_config(std::size_t n_devices, std::size_t k_elements,
                                 std::uint64_t seed) const;
    DdpgConfig ddpg_config() const;
    PpoConfig ppo_config() const;

    // All keys in file order, for self-describing result headers.
    std::map<std::string, std::string> describe() const;
};

}  // namespace riswpt
