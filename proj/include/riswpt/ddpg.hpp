#pragma once

#include <optional>

#include "riswpt/action_map.hpp"
#include "riswpt/net.hpp"

namespace riswpt {

struct Transition {
    std::vector<double> state;
    std::vector<double> raw_action;  // pre-mapping, angle dims wrapped
    double reward = 0.0;             // learner units (reward_scale applied)
    std::vector<double> next_state;
};

// Fixed-capacity ring; oldest transitions evicted first.
class ReplayBuffer {
public:
    explicit ReplayBuffer(std::size_t capacity);

    void push(Transition t);
    std::size_t size() const { return data_.size(); }
    std::size_t capacity() const { return capacity_; }
    const Transition& at(std::size_t i) const { return data_[i]; }

    // Uniform with replacement; reproducible under a fixed rng state.
    std::vector<const Transition*> sample(Rng& rng, std::size_t batch) const;

private:
    std::size_t capacity_;
    std::size_t next_ = 0;
    std::vector<Transition> data_;
};

struct DdpgConfig {
    std::vector<std::size_t> hidden{128, 128};
    double actor_lr = 1e-4;
    double critic_lr = 1e-3;
    double discount = 0.9;        // zeta
    double soft_rate = 0.01;      // varkappa
    double noise_scale = 0.1;     // psi
    double noise_decay = 0.999;   // per episode
    std::size_t batch_size = 32;
    std::size_t buffer_capacity = 100000;
    std::size_t warmup = 1000;    // transitions before updates start
    double reward_scale = 1.0;
};

struct EpisodeStats {
    int episode = 0;
    double mean_reward = 0.0;  // true env units
    double mean_loss = 0.0;
};

using TrainingLog = std::vector<EpisodeStats>;

// Deterministic actor-critic with target networks and soft updates. The
// critic scores (state, raw action) pairs; the env consumes mapped actions.
class DdpgAgent {
public:
    DdpgAgent(std::size_t state_dim, ActionSpec spec, DdpgConfig config,
              std::uint64_t seed);

    const ActionSpec& action_spec() const { return spec_; }
    const DdpgConfig& config() const { return cfg_; }

    // mu(s) plus, when exploring, psi * N(0,1) per dimension; angle dims
    // wrapped afterwards.
    std::vector<double> select_raw(const std::vector<double>& state_features,
                                   Rng& rng, bool explore) const;
    Action select_action(const EnvState& state, Rng& rng, bool explore,
                         StickyRandom* sticky = nullptr) const;

    // y_i = r_i + zeta * Q'(s', mu'(s')) from the target networks only.
    std::vector<double> critic_targets(
        const std::vector<const Transition*>& batch) const;

    // One optimizer step on the critic; returns the pre-step MSE.
    double update_critic(const std::vector<const Transition*>& batch);

    // The sampled policy gradient as a descent direction on -Q.
    DenseNet::Gradients actor_gradient(
        const std::vector<const Transition*>& batch) const;

    // Ascend (1/B) sum grad_a Q(s,a)|_{a=mu(s)} grad_theta mu(s).
    void update_actor(const std::vector<const Transition*>& batch);

    // theta' <- rate * theta + (1 - rate) * theta' for both target nets.
    void soft_update();

    ReplayBuffer& buffer() { return buffer_; }
    const DenseNet& actor() const { return actor_; }
    const DenseNet& critic() const { return critic_; }
    const DenseNet& target_actor() const { return target_actor_; }
    const DenseNet& target_critic() const { return target_critic_; }
    DenseNet& mutable_actor() { return actor_; }
    DenseNet& mutable_critic() { return critic_; }
    DenseNet& mutable_target_actor() { return target_actor_; }
    DenseNet& mutable_target_critic() { return target_critic_; }

    double noise_scale() const { return noise_scale_; }
    void set_noise_scale(double s) { noise_scale_ = s; }
    double reward_scale() const { return cfg_.reward_scale; }
    void set_reward_scale(double s) { cfg_.reward_scale = s; }

    void save_checkpoint(const std::string& prefix) const;
    void load_checkpoint(const std::string& prefix);

private:
    std::vector<double> critic_input(const std::vector<double>& state,
                                     const std::vector<double>& raw) const;

    ActionSpec spec_;
    DdpgConfig cfg_;
    std::size_t state_dim_;
    std::size_t action_dim_;
    DenseNet actor_, critic_, target_actor_, target_critic_;
    OptimizerState actor_opt_, critic_opt_;
    ReplayBuffer buffer_;
    double noise_scale_;
};

class WptEnv;

// Alg.-1 loop: act, store, sample a batch, critic step, actor step, soft
// update, once the warmup has filled the buffer.
TrainingLog train(DdpgAgent& agent, WptEnv& env, std::size_t episodes,
                  std::size_t steps, Rng& rng);

// Mean true reward of one greedy (noise-free) episode.
double run_greedy_episode(const DdpgAgent& agent, WptEnv& env, Rng& rng,
                          std::size_t steps);

}  // namespace riswpt
