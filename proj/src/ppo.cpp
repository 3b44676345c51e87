#include "riswpt/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "riswpt/env.hpp"
#include "riswpt/kernels.hpp"

namespace riswpt {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 ln(2 pi)
}

double advantage(double reward, double value_s, double value_next,
                 double discount) {
    return reward + discount * value_next - value_s;
}

double clipped_surrogate(double ratio, double advantage, double epsilon) {
    const double clipped =
        std::clamp(ratio, 1.0 - epsilon, 1.0 + epsilon) * advantage;
    return std::min(ratio * advantage, clipped);
}

PpoAgent::PpoAgent(std::size_t state_dim, ActionSpec spec, PpoConfig config,
                   std::uint64_t seed)
    : spec_(spec),
      cfg_(std::move(config)),
      state_dim_(state_dim),
      action_dim_(spec.agent_dim()) {
    if (action_dim_ == 0)
        throw SimError(Err::ShapeMismatch, "policy controls no action dims");
    Rng init_rng(seed);
    std::vector<std::size_t> mean_sizes{state_dim_};
    std::vector<std::size_t> value_sizes{state_dim_};
    for (std::size_t h : cfg_.hidden) {
        mean_sizes.push_back(h);
        value_sizes.push_back(h);
    }
    mean_sizes.push_back(action_dim_);
    value_sizes.push_back(1);
    mean_net_ = DenseNet(mean_sizes, Activation::Tanh, Activation::Identity,
                         init_rng);
    value_net_ = DenseNet(value_sizes, Activation::Tanh, Activation::Identity,
                          init_rng);
    log_std_.assign(action_dim_, std::log(cfg_.init_std));
    mean_opt_ = OptimizerState::adam(cfg_.policy_lr);
    value_opt_ = OptimizerState::adam(cfg_.value_lr);
    std_m_.assign(action_dim_, 0.0);
    std_v_.assign(action_dim_, 0.0);
}

std::vector<double> PpoAgent::mean_raw(const std::vector<double>& state) const {
    return mean_net_.forward(state);
}

double PpoAgent::value(const std::vector<double>& state) const {
    return value_net_.forward(state)[0];
}

std::pair<std::vector<double>, double> PpoAgent::sample_raw(
    const std::vector<double>& state, Rng& rng) const {
    std::vector<double> raw = mean_net_.forward(state);
    std::normal_distribution<double> unit(0.0, 1.0);
    double logp = 0.0;
    for (std::size_t d = 0; d < action_dim_; ++d) {
        const double sigma = std::exp(log_std_[d]);
        const double z = unit(rng);
        raw[d] += sigma * z;
        logp += -0.5 * z * z - log_std_[d] - kHalfLog2Pi;
    }
    return {std::move(raw), logp};
}

double PpoAgent::log_prob(const std::vector<double>& state,
                          const std::vector<double>& raw) const {
    if (raw.size() != action_dim_)
        throw SimError(Err::ShapeMismatch, "raw action dim mismatch");
    const std::vector<double> mu = mean_net_.forward(state);
    double logp = 0.0;
    for (std::size_t d = 0; d < action_dim_; ++d) {
        const double sigma = std::exp(log_std_[d]);
        const double z = (raw[d] - mu[d]) / sigma;
        logp += -0.5 * z * z - log_std_[d] - kHalfLog2Pi;
    }
    return logp;
}

TrajectoryBatch PpoAgent::collect(WptEnv& env, EnvState& state,
                                  std::size_t steps, Rng& rng,
                                  StickyRandom* sticky,
                                  double* true_reward_sum) {
    TrajectoryBatch b;
    b.stamp = ++collect_counter_;
    b.states.reserve(steps);
    for (std::size_t t = 0; t < steps; ++t) {
        auto [raw, logp] = sample_raw(state.features, rng);
        const Action action = spec_.compose(raw, rng, sticky);
        StepOutcome out = env.step(action);
        if (true_reward_sum) *true_reward_sum += out.reward;
        b.states.push_back(state.features);
        b.raw_actions.push_back(std::move(raw));
        b.rewards.push_back(out.reward * cfg_.reward_scale);
        b.next_states.push_back(out.next_state.features);
        b.log_probs.push_back(logp);
        state = std::move(out.next_state);
    }
    b.advantages.resize(b.size());
    b.value_targets.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double v_s = value(b.states[i]);
        const double v_n = value(b.next_states[i]);
        b.advantages[i] = advantage(b.rewards[i], v_s, v_n, cfg_.discount);
        b.value_targets[i] = b.rewards[i] + cfg_.discount * v_n;
    }
    return b;
}

double PpoAgent::mean_clipped_surrogate(const TrajectoryBatch& batch) const {
    if (batch.size() == 0) throw SimError(Err::EmptyBatch, "empty batch");
    double total = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const double ratio = std::exp(log_prob(batch.states[i],
                                               batch.raw_actions[i]) -
                                      batch.log_probs[i]);
        total += clipped_surrogate(ratio, batch.advantages[i],
                                   cfg_.clip_epsilon);
    }
    return total / static_cast<double>(batch.size());
}

PpoAgent::UpdateStats PpoAgent::update_policy(const TrajectoryBatch& batch,
                                              Rng& rng) {
    if (batch.size() == 0) throw SimError(Err::EmptyBatch, "empty batch");
    if (batch.stamp != collect_counter_)
        throw SimError(Err::BatchIdentity,
                       "batch was collected under a different policy version");

    std::vector<double> adv = batch.advantages;
    if (cfg_.normalize_advantages && adv.size() > 1) {
        const double mean =
            std::accumulate(adv.begin(), adv.end(), 0.0) / adv.size();
        double var = 0.0;
        for (double a : adv) var += (a - mean) * (a - mean);
        const double sd = std::sqrt(var / adv.size()) + 1e-8;
        for (double& a : adv) a = (a - mean) / sd;
    }

    UpdateStats stats;
    stats.surrogate_before = mean_clipped_surrogate(batch);

    std::vector<std::size_t> order(batch.size());
    std::iota(order.begin(), order.end(), 0);
    DenseNet::Cache mean_cache, value_cache;
    double value_loss_last = 0.0;

    for (std::size_t epoch = 0; epoch < cfg_.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size();
             start += cfg_.minibatch) {
            const std::size_t end =
                std::min(order.size(), start + cfg_.minibatch);
            const double inv_mb = 1.0 / static_cast<double>(end - start);
            DenseNet::Gradients mean_grads = mean_net_.make_gradients();
            DenseNet::Gradients value_grads = value_net_.make_gradients();
            std::vector<double> std_grads(action_dim_, 0.0);
            double vloss = 0.0;
            for (std::size_t idx = start; idx < end; ++idx) {
                const std::size_t i = order[idx];
                const std::vector<double> mu =
                    mean_net_.forward(batch.states[i], mean_cache);
                double logp = 0.0;
                std::vector<double> z(action_dim_);
                for (std::size_t d = 0; d < action_dim_; ++d) {
                    const double sigma = std::exp(log_std_[d]);
                    z[d] = (batch.raw_actions[i][d] - mu[d]) / sigma;
                    logp += -0.5 * z[d] * z[d] - log_std_[d] - kHalfLog2Pi;
                }
                const double ratio = std::exp(logp - batch.log_probs[i]);
                const double a = adv[i];
                const double unclipped = ratio * a;
                const double clipped =
                    std::clamp(ratio, 1.0 - cfg_.clip_epsilon,
                               1.0 + cfg_.clip_epsilon) *
                    a;
                // d surr / d logp is ratio*A on the unclipped branch, 0 on
                // the clipped one.
                const double dsurr_dlogp =
                    unclipped <= clipped ? unclipped : 0.0;
                std::vector<double> upstream(action_dim_);
                for (std::size_t d = 0; d < action_dim_; ++d) {
                    const double sigma = std::exp(log_std_[d]);
                    const double dlogp_dmu = z[d] / sigma;
                    upstream[d] = -dsurr_dlogp * dlogp_dmu * inv_mb;
                    const double dlogp_dlogstd = z[d] * z[d] - 1.0;
                    std_grads[d] += -(dsurr_dlogp * dlogp_dlogstd +
                                      cfg_.entropy_coef) *
                                    inv_mb;
                }
                mean_net_.backward(mean_cache, upstream, mean_grads);

                const double v =
                    value_net_.forward(batch.states[i], value_cache)[0];
                const double err = v - batch.value_targets[i];
                vloss += err * err * inv_mb;
                value_net_.backward(value_cache,
                                    std::vector<double>{2.0 * err * inv_mb},
                                    value_grads);
            }
            apply_gradients(mean_net_, mean_grads, mean_opt_);
            apply_gradients(value_net_, value_grads, value_opt_);
            ++std_steps_;
            const double t = static_cast<double>(std_steps_);
            kernels::adam_step(log_std_.data(), std_grads.data(),
                               std_m_.data(), std_v_.data(), action_dim_,
                               cfg_.policy_lr, 0.9, 0.999, 1e-8,
                               1.0 - std::pow(0.9, t),
                               1.0 - std::pow(0.999, t));
            value_loss_last = vloss;
        }
    }
    stats.surrogate_after = mean_clipped_surrogate(batch);
    stats.value_loss = value_loss_last;
    return stats;
}

void PpoAgent::save_checkpoint(const std::string& prefix) const {
    mean_net_.save_file(prefix + ".policy.net");
    value_net_.save_file(prefix + ".value.net");
}

void PpoAgent::load_checkpoint(const std::string& prefix) {
    mean_net_ = DenseNet::load_file(prefix + ".policy.net");
    value_net_ = DenseNet::load_file(prefix + ".value.net");
}

TrainingLog train(PpoAgent& agent, WptEnv& env, std::size_t episodes,
                  std::size_t steps, Rng& rng) {
    if (agent.mean_net().input_dim() != env.state_dim() ||
        agent.action_spec().phase_count != env.config().ris.element_count ||
        agent.action_spec().mobile != env.config().mobile)
        throw SimError(Err::ShapeMismatch, "agent/env dimensions disagree");
    TrainingLog log;
    log.reserve(episodes);
    StickyRandom sticky;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        EnvState state = env.reset();
        sticky.clear();
        double true_sum = 0.0;
        TrajectoryBatch batch =
            agent.collect(env, state, steps, rng, &sticky, &true_sum);
        const PpoAgent::UpdateStats stats = agent.update_policy(batch, rng);
        log.push_back({static_cast<int>(ep),
                       true_sum / static_cast<double>(steps),
                       stats.value_loss});
    }
    return log;
}

double run_mean_policy_episode(const PpoAgent& agent, WptEnv& env, Rng& rng,
                               std::size_t steps) {
    EnvState state = env.reset();
    StickyRandom sticky;
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const Action action = agent.action_spec().compose(
            agent.mean_raw(state.features), rng, &sticky);
        StepOutcome out = env.step(action);
        total += out.reward;
        state = std::move(out.next_state);
    }
    return total / static_cast<double>(steps);
}

}  // namespace riswpt
