#pragma once

#include <cstdint>
#include <vector>

#include "riswpt/channel.hpp"

namespace riswpt {

struct FlightBounds {
    Vec3 lo{-500.0, -500.0, 50.0};
    Vec3 hi{500.0, 500.0, 300.0};

    bool contains(const Vec3& p) const;
    Vec3 clamp(const Vec3& p) const;
};

struct NetworkConfig {
    std::size_t device_count = 10;          // N
    std::vector<Vec3> device_positions;     // ground devices, z = 0
    Vec3 uav_initial{0.0, 0.0, 200.0};
    double uav_altitude = 200.0;            // H_UAV (hover height)
    RisGeometry ris{{200.0, 0.0, 50.0}, 20, 0.5};
    PathLossParams pathloss{};
    double tx_power = 5.0;                  // P0, watts
    double eh_efficiency = 0.5;             // eta
    double bandwidth = 1.0;                 // B; 1 reports bits/s/Hz
    FlightBounds flight_bounds{};           // Z
    double v_max = 20.0;                    // meters per step
    double motion_noise_std = 0.0;
    std::size_t episode_length = 100;       // T
    bool mobile = false;                    // hovering vs joint-trajectory MDP
    bool ris_enabled = true;                // false: H forced to zero
    bool freeze_channels = false;           // sample once at reset, reuse
    double feature_scale = 0.0;             // 0 = derive from geometry

    void validate() const;
    // State features are gains scaled to O(1); by default the inverse of the
    // nominal direct-link amplitude at hover height.
    double effective_feature_scale() const;
    Vec3 hover_point() const;               // cluster centre at uav_altitude
};

struct EnvState {
    std::vector<double> features;  // 2N: interleaved (re, im) per device
    Vec3 uav_position;
    int step_index = 0;
};

struct Action {
    double tau = 0.5;
    PhaseShiftVector phases;
    double velocity = 0.0;  // mobile only
    double heading = 0.0;   // mobile only, radians in [0, 2*pi)
};

enum class ConstraintTag { None, ClampedToBounds };

struct StepOutcome {
    double reward = 0.0;  // sum-rate, Eq.-(9) units (per Hz when B = 1)
    EnvState next_state;
    std::vector<double> per_device_sinr;
    std::vector<double> per_device_harvested_power;
    ConstraintTag constraint_violation = ConstraintTag::None;
};

// tau * eta * P0 * |gain|^2, watts.
double harvested_power(double tau, const NetworkConfig& config, Complex gain);

// p_n |gain_n|^2 / ( sum_{m != n} p_m |gain_m|^2 + noise ).
double sinr(std::size_t n, const std::vector<double>& powers,
            const std::vector<Complex>& gains, double noise_power);

// sum_n (1 - tau) * B * log2(1 + sinr_n).
double sum_rate(double tau, const std::vector<double>& sinrs,
                double bandwidth);

// Velocity/heading kinematics with additive position noise, clamped into the
// flying zone. `clamped` (optional) reports whether the clamp bound.
Vec3 apply_motion(const Vec3& uav, double velocity, double heading, Rng& rng,
                  const NetworkConfig& config, bool* clamped = nullptr);

// Unscaled state: interleaved (re, im) of the per-device effective gains.
EnvState build_state(const ChannelSet& channels,
                     const PhaseShiftVector& phases, const Vec3& uav,
                     int step_index);

// Uniform placement inside a ground disc (z = 0).
std::vector<Vec3> place_devices_disc(Rng& rng, std::size_t n,
                                     const Vec3& center, double radius);

// Area-uniform placement in the annulus inner <= r <= outer (inner = 0
// recovers the disc).
std::vector<Vec3> place_devices_annulus(Rng& rng, std::size_t n,
                                        const Vec3& center, double inner,
                                        double outer);

// Deterministic sum-rate at the reset position with fading suppressed (LoS
// terms only), zero phases, tau = 1/2. Reference point for auto reward
// scaling; never used as a reward.
double nominal_sum_rate(const NetworkConfig& config);

// Frozen channel snapshot consumed by the grid oracle.
struct EnvSnapshot {
    ChannelSet channels;
    double eh_efficiency;
    double tx_power;
    double noise_power;
    double bandwidth;
};

// The two-phase WPT/WIT environment. Owns its RNG stream; reproducible as a
// function of (config, seed, action sequence).
class WptEnv {
public:
    WptEnv(NetworkConfig config, std::uint64_t seed);

    EnvState reset();
    StepOutcome step(const Action& action);

    // Draw a fresh frozen realization (the oracle scheme uses one per episode).
    void refreeze();

    const NetworkConfig& config() const { return cfg_; }
    const ChannelSet& channels() const { return channels_; }
    const Vec3& uav_position() const { return uav_; }
    std::size_t state_dim() const { return 2 * cfg_.device_count; }
    EnvSnapshot snapshot() const;

private:
    ChannelSet sample_at(const Vec3& uav);
    EnvState scaled_state(const PhaseShiftVector& phases) const;

    NetworkConfig cfg_;
    Rng rng_;
    Vec3 uav_{};
    ChannelSet channels_;
    int step_index_ = 0;
    double feature_scale_ = 1.0;
};

}  // namespace riswpt
