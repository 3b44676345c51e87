#include "riswpt/baselines.hpp"

#include <cmath>

namespace riswpt {

const char* scheme_name(SchemeId id) {
    switch (id) {
        case SchemeId::HDdpg: return "H-DDPG";
        case SchemeId::HPpo: return "H-PPO";
        case SchemeId::FDdpg: return "F-DDPG";
        case SchemeId::FPpo: return "F-PPO";
        case SchemeId::RssHddpg: return "RSS-HDDPG";
        case SchemeId::RehDdpg: return "REH-DDPG";
        case SchemeId::RehPpo: return "REH-PPO";
        case SchemeId::WithoutRisHddpg: return "WithoutRIS-HDDPG";
        case SchemeId::WithoutRisHppo: return "WithoutRIS-HPPO";
        case SchemeId::OracleGrid: return "ORACLE-GRID";
    }
    return "?";
}

const std::vector<SchemeId>& all_schemes() {
    static const std::vector<SchemeId> ids{
        SchemeId::HDdpg,          SchemeId::HPpo,
        SchemeId::FDdpg,          SchemeId::FPpo,
        SchemeId::RssHddpg,       SchemeId::RehDdpg,
        SchemeId::RehPpo,         SchemeId::WithoutRisHddpg,
        SchemeId::WithoutRisHppo, SchemeId::OracleGrid};
    return ids;
}

std::optional<SchemeId> parse_scheme(const std::string& tag) {
    for (SchemeId id : all_schemes())
        if (tag == scheme_name(id)) return id;
    return std::nullopt;
}

PhaseShiftVector random_phase_policy(Rng& rng, std::size_t k) {
    if (k == 0) throw SimError(Err::ShapeMismatch, "K must be >= 1");
    return PhaseShiftVector(uniform_phases(rng, k));
}

double random_tau_policy(Rng& rng) { return uniform_tau(rng); }

NetworkConfig without_ris_config(NetworkConfig config) {
    config.ris_enabled = false;
    config.mobile = false;
    return config;
}

WptEnv without_ris_env(const NetworkConfig& config, std::uint64_t seed) {
    return WptEnv(without_ris_config(config), seed);
}

SchemeSetup make_scheme_setup(SchemeId id, const NetworkConfig& base,
                              bool rss_per_episode) {
    SchemeSetup s;
    s.env_config = base;
    s.spec.phase_count = base.ris.element_count;
    s.spec.v_max = base.v_max;
    switch (id) {
        case SchemeId::HDdpg:
        case SchemeId::HPpo:
            s.env_config.mobile = false;
            s.algo = id == SchemeId::HDdpg ? Algo::Ddpg : Algo::Ppo;
            break;
        case SchemeId::FDdpg:
        case SchemeId::FPpo:
            s.env_config.mobile = true;
            s.spec.mobile = true;
            s.algo = id == SchemeId::FDdpg ? Algo::Ddpg : Algo::Ppo;
            break;
        case SchemeId::RssHddpg:
            s.env_config.mobile = false;
            s.spec.phases = PartSource::Random;
            s.spec.random_per_episode = rss_per_episode;
            s.algo = Algo::Ddpg;
            break;
        case SchemeId::RehDdpg:
        case SchemeId::RehPpo:
            s.env_config.mobile = true;
            s.spec.mobile = true;
            s.spec.tau = PartSource::Random;
            s.algo = id == SchemeId::RehDdpg ? Algo::Ddpg : Algo::Ppo;
            break;
        case SchemeId::WithoutRisHddpg:
        case SchemeId::WithoutRisHppo:
            s.env_config = without_ris_config(s.env_config);
            s.spec.phases = PartSource::Zero;
            s.algo = id == SchemeId::WithoutRisHddpg ? Algo::Ddpg : Algo::Ppo;
            break;
        case SchemeId::OracleGrid:
            s.env_config.mobile = false;
            s.env_config.freeze_channels = true;
            s.algo = Algo::Oracle;
            break;
    }
    return s;
}

GridOracleResult grid_oracle(const EnvSnapshot& snap, std::size_t tau_grid,
                             std::size_t phase_grid) {
    const ChannelSet& cs = snap.channels;
    cs.validate();
    const std::size_t n_dev = cs.device_count();
    const std::size_t k = cs.element_count();
    if (tau_grid == 0 || phase_grid == 0)
        throw SimError(Err::IntractableGrid, "grid sizes must be positive");
    if (k > 4)
        throw SimError(Err::IntractableGrid, "grid oracle is limited to K <= 4");
    double cells = static_cast<double>(tau_grid);
    for (std::size_t i = 0; i < k; ++i)
        cells *= static_cast<double>(phase_grid);
    if (cells > 1e7)
        throw SimError(Err::IntractableGrid,
                       "phase_grid^K * tau_grid exceeds 1e7");

    // Per-element reflected products: gain_n(theta) = h_n + sum_k P_nk e^{j t_k}.
    std::vector<std::vector<Complex>> prod(n_dev, std::vector<Complex>(k));
    for (std::size_t n = 0; n < n_dev; ++n)
        for (std::size_t e = 0; e < k; ++e)
            prod[n][e] = cs.uav_ris[e] * cs.ris_iot[n][e];

    ComplexVector phasor(phase_grid);
    std::vector<double> theta_of(phase_grid);
    for (std::size_t j = 0; j < phase_grid; ++j) {
        theta_of[j] = 2.0 * M_PI * static_cast<double>(j) /
                      static_cast<double>(phase_grid);
        phasor[j] = {std::cos(theta_of[j]), std::sin(theta_of[j])};
    }

    std::vector<double> taus(tau_grid);
    for (std::size_t i = 0; i < tau_grid; ++i)
        taus[i] = static_cast<double>(i + 1) / static_cast<double>(tau_grid + 1);

    std::vector<std::size_t> digit(k, 0);
    std::vector<double> q(n_dev);
    GridOracleResult best;
    best.best_reward = -1.0;

    const double power_coef = snap.eh_efficiency * snap.tx_power;
    bool done = false;
    while (!done) {
        double q_total = 0.0;
        for (std::size_t n = 0; n < n_dev; ++n) {
            Complex gain = cs.direct[n];
            for (std::size_t e = 0; e < k; ++e)
                gain += prod[n][e] * phasor[digit[e]];
            const double g2 = std::norm(gain);
            q[n] = power_coef * g2 * g2;
            q_total += q[n];
        }
        for (double tau : taus) {
            double rate = 0.0;
            for (std::size_t n = 0; n < n_dev; ++n) {
                const double denom =
                    tau * (q_total - q[n]) + snap.noise_power;
                rate += (1.0 - tau) * snap.bandwidth *
                        std::log2(1.0 + tau * q[n] / denom);
            }
            if (rate > best.best_reward) {
                best.best_reward = rate;
                best.best_action.tau = tau;
                std::vector<double> theta(k);
                for (std::size_t e = 0; e < k; ++e)
                    theta[e] = theta_of[digit[e]];
                best.best_action.phases = PhaseShiftVector(std::move(theta));
            }
        }
        // Odometer over phase digits, element 0 fastest.
        done = true;
        for (std::size_t e = 0; e < k; ++e) {
            if (++digit[e] < phase_grid) {
                done = false;
                break;
            }
            digit[e] = 0;
        }
    }
    return best;
}

}  // namespace riswpt
