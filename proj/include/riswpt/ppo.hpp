#pragma once

#include "riswpt/action_map.hpp"
#include "riswpt/ddpg.hpp"  // EpisodeStats / TrainingLog
#include "riswpt/net.hpp"

namespace riswpt {

struct PpoConfig {
    std::vector<std::size_t> hidden{128, 128};
    double policy_lr = 1e-4;
    double value_lr = 1e-3;
    double discount = 0.9;      // zeta
    double clip_epsilon = 0.2;
    std::size_t epochs = 4;     // passes over each collected batch
    std::size_t minibatch = 32;
    double init_std = 0.3;
    bool normalize_advantages = true;
    double entropy_coef = 0.0;
    double reward_scale = 1.0;
};

// One collection cycle of on-policy data. `stamp` ties the batch to the
// policy version that produced it; updates reject foreign batches.
struct TrajectoryBatch {
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> raw_actions;
    std::vector<double> rewards;  // learner units
    std::vector<std::vector<double>> next_states;
    std::vector<double> log_probs;  // under the collecting policy
    std::vector<double> advantages;
    std::vector<double> value_targets;
    std::uint64_t stamp = 0;

    std::size_t size() const { return states.size(); }
};

// One-step TD advantage: r + zeta V(s') - V(s).
double advantage(double reward, double value_s, double value_next,
                 double discount);

// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A).
double clipped_surrogate(double ratio, double advantage, double epsilon);

// Diagonal-Gaussian policy over the pre-mapping action space with a learned
// state-independent log-std, plus a state-value network. Log-densities live
// in pre-mapping space; the raw->Action map is parameter-free, so its
// correction cancels in the probability ratio.
class PpoAgent {
public:
    PpoAgent(std::size_t state_dim, ActionSpec spec, PpoConfig config,
             std::uint64_t seed);

    const ActionSpec& action_spec() const { return spec_; }
    const PpoConfig& config() const { return cfg_; }

    std::vector<double> mean_raw(const std::vector<double>& state) const;
    double value(const std::vector<double>& state) const;

    // Sample plus its exact log-density.
    std::pair<std::vector<double>, double> sample_raw(
        const std::vector<double>& state, Rng& rng) const;
    double log_prob(const std::vector<double>& state,
                    const std::vector<double>& raw) const;

    // Run `steps` env steps under the current policy; fills advantages and
    // value targets. Adds true (unscaled) rewards into *true_reward_sum.
    TrajectoryBatch collect(WptEnv& env, EnvState& state, std::size_t steps,
                            Rng& rng, StickyRandom* sticky,
                            double* true_reward_sum);

    struct UpdateStats {
        double surrogate_before = 0.0;
        double surrogate_after = 0.0;
        double value_loss = 0.0;
    };

    // Several epochs of minibatch ascent on the clipped surrogate plus value
    // regression toward the stored targets.
    UpdateStats update_policy(const TrajectoryBatch& batch, Rng& rng);

    // Mean clipped surrogate of `batch` under the current parameters.
    double mean_clipped_surrogate(const TrajectoryBatch& batch) const;

    double reward_scale() const { return cfg_.reward_scale; }
    void set_reward_scale(double s) { cfg_.reward_scale = s; }
    const std::vector<double>& log_std() const { return log_std_; }
    const DenseNet& mean_net() const { return mean_net_; }
    const DenseNet& value_net() const { return value_net_; }

    void save_checkpoint(const std::string& prefix) const;
    void load_checkpoint(const std::string& prefix);

private:
    ActionSpec spec_;
    PpoConfig cfg_;
    std::size_t state_dim_;
    std::size_t action_dim_;
    DenseNet mean_net_;
    DenseNet value_net_;
    std::vector<double> log_std_;
    OptimizerState mean_opt_, value_opt_;
    std::vector<double> std_m_, std_v_;
    std::int64_t std_steps_ = 0;
    std::uint64_t collect_counter_ = 0;
};

// Alg.-2 loop: collect a T-step trajectory per episode, estimate one-step
// advantages, update with the clipped surrogate.
TrainingLog train(PpoAgent& agent, WptEnv& env, std::size_t episodes,
                  std::size_t steps, Rng& rng);

// Mean true reward of one episode following the policy mean.
double run_mean_policy_episode(const PpoAgent& agent, WptEnv& env, Rng& rng,
                               std::size_t steps);

}  // namespace riswpt
