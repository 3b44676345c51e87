#pragma once

#include <optional>
#include <string>

#include "riswpt/action_map.hpp"
#include "riswpt/env.hpp"

namespace riswpt {

enum class SchemeId {
    HDdpg,
    HPpo,
    FDdpg,
    FPpo,
    RssHddpg,
    RehDdpg,
    RehPpo,
    WithoutRisHddpg,
    WithoutRisHppo,
    OracleGrid,
};

// CLI spellings: H-DDPG, H-PPO, F-DDPG, F-PPO, RSS-HDDPG, REH-DDPG, REH-PPO,
// WithoutRIS-HDDPG, WithoutRIS-HPPO, ORACLE-GRID.
const char* scheme_name(SchemeId id);
std::optional<SchemeId> parse_scheme(const std::string& tag);
const std::vector<SchemeId>& all_schemes();

// i.i.d. uniform angles on [0, 2*pi).
PhaseShiftVector random_phase_policy(Rng& rng, std::size_t k);

// Uniform on (0,1) with the standard clipping margins.
double random_tau_policy(Rng& rng);

// Hovering environment with the reflected term removed (H forced to zero).
WptEnv without_ris_env(const NetworkConfig& config, std::uint64_t seed);
NetworkConfig without_ris_config(NetworkConfig config);

enum class Algo { Ddpg, Ppo, Oracle };

// How a scheme wires env variant, controlled action parts, and algorithm.
// RSS trains only the tau head under randomly drawn phases; REH trains
// everything except tau (mobile env); WithoutRIS drops the reflected path and
// trains tau only.
struct SchemeSetup {
    NetworkConfig env_config;
    ActionSpec spec;
    Algo algo = Algo::Ddpg;
};

SchemeSetup make_scheme_setup(SchemeId id, const NetworkConfig& base,
                              bool rss_per_episode = false);

struct GridOracleResult {
    Action best_action;
    double best_reward = 0.0;
};

// Exhaustive maximization of the sum-rate over a discretized action grid on
// frozen channels. tau grid: (i+1)/(tau_grid+1); phase grid: 2*pi*j/phase_grid.
// Guarded: K <= 4 and phase_grid^K * tau_grid <= 1e7.
GridOracleResult grid_oracle(const EnvSnapshot& snap, std::size_t tau_grid,
                             std::size_t phase_grid);

constexpr std::size_t kOracleTauGrid = 100;
constexpr std::size_t kOraclePhaseGrid = 64;

}  // namespace riswpt
