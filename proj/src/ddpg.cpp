#include "riswpt/ddpg.hpp"

#include <cmath>
#include <numeric>

#include "riswpt/env.hpp"
#include "riswpt/kernels.hpp"

namespace riswpt {

ReplayBuffer::ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0)
        throw SimError(Err::ShapeMismatch, "buffer capacity must be > 0");
    data_.reserve(capacity_);
}

void ReplayBuffer::push(Transition t) {
    if (data_.size() < capacity_) {
        data_.push_back(std::move(t));
    } else {
        data_[next_] = std::move(t);
        next_ = (next_ + 1) % capacity_;
    }
}

std::vector<const Transition*> ReplayBuffer::sample(Rng& rng,
                                                    std::size_t batch) const {
    if (data_.empty()) throw SimError(Err::EmptyBatch, "buffer is empty");
    std::uniform_int_distribution<std::size_t> pick(0, data_.size() - 1);
    std::vector<const Transition*> out;
    out.reserve(batch);
    for (std::size_t i = 0; i < batch; ++i) out.push_back(&data_[pick(rng)]);
    return out;
}

DdpgAgent::DdpgAgent(std::size_t state_dim, ActionSpec spec, DdpgConfig config,
                     std::uint64_t seed)
    : spec_(spec),
      cfg_(std::move(config)),
      state_dim_(state_dim),
      action_dim_(spec.agent_dim()),
      buffer_(cfg_.buffer_capacity),
      noise_scale_(cfg_.noise_scale) {
    if (action_dim_ == 0)
        throw SimError(Err::ShapeMismatch, "agent controls no action dims");
    Rng init_rng(seed);
    std::vector<std::size_t> actor_sizes{state_dim_};
    std::vector<std::size_t> critic_sizes{state_dim_ + action_dim_};
    for (std::size_t h : cfg_.hidden) {
        actor_sizes.push_back(h);
        critic_sizes.push_back(h);
    }
    actor_sizes.push_back(action_dim_);
    critic_sizes.push_back(1);
    actor_ = DenseNet(actor_sizes, Activation::Tanh, Activation::Identity,
                      init_rng);
    critic_ = DenseNet(critic_sizes, Activation::Tanh, Activation::Identity,
                       init_rng);
    target_actor_ = actor_;
    target_critic_ = critic_;
    actor_opt_ = OptimizerState::adam(cfg_.actor_lr);
    critic_opt_ = OptimizerState::adam(cfg_.critic_lr);
}

std::vector<double> DdpgAgent::critic_input(
    const std::vector<double>& state, const std::vector<double>& raw) const {
    std::vector<double> in;
    in.reserve(state.size() + raw.size());
    in.insert(in.end(), state.begin(), state.end());
    in.insert(in.end(), raw.begin(), raw.end());
    return in;
}

std::vector<double> DdpgAgent::select_raw(
    const std::vector<double>& state_features, Rng& rng, bool explore) const {
    std::vector<double> raw = actor_.forward(state_features);
    if (explore && noise_scale_ > 0.0) {
        std::normal_distribution<double> noise(0.0, 1.0);
        for (double& r : raw) r += noise_scale_ * noise(rng);
    }
    spec_.canonicalize_raw(raw);
    return raw;
}

Action DdpgAgent::select_action(const EnvState& state, Rng& rng, bool explore,
                                StickyRandom* sticky) const {
    return spec_.compose(select_raw(state.features, rng, explore), rng,
                         sticky);
}

std::vector<double> DdpgAgent::critic_targets(
    const std::vector<const Transition*>& batch) const {
    if (batch.empty()) throw SimError(Err::EmptyBatch, "empty target batch");
    std::vector<double> y(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        std::vector<double> next_raw = target_actor_.forward(t.next_state);
        spec_.canonicalize_raw(next_raw);
        const double q_next =
            target_critic_.forward(critic_input(t.next_state, next_raw))[0];
        y[i] = t.reward + cfg_.discount * q_next;
    }
    return y;
}

double DdpgAgent::update_critic(const std::vector<const Transition*>& batch) {
    if (batch.empty()) throw SimError(Err::EmptyBatch, "empty critic batch");
    const std::vector<double> y = critic_targets(batch);
    DenseNet::Gradients grads = critic_.make_gradients();
    DenseNet::Cache cache;
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    double loss = 0.0;
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const Transition& t = *batch[i];
        const double q =
            critic_.forward(critic_input(t.state, t.raw_action), cache)[0];
        const double err = q - y[i];
        loss += err * err;
        const std::vector<double> upstream{2.0 * err * inv_b};
        critic_.backward(cache, upstream, grads);
    }
    apply_gradients(critic_, grads, critic_opt_);
    return loss * inv_b;
}

DenseNet::Gradients DdpgAgent::actor_gradient(
    const std::vector<const Transition*>& batch) const {
    if (batch.empty()) throw SimError(Err::EmptyBatch, "empty actor batch");
    DenseNet::Gradients actor_grads = actor_.make_gradients();
    DenseNet::Gradients critic_scratch = critic_.make_gradients();
    DenseNet::Cache actor_cache, critic_cache;
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    for (const Transition* t : batch) {
        std::vector<double> raw = actor_.forward(t->state, actor_cache);
        // Wrapping is a unit-derivative reparameterization, so the critic
        // sees canonical angles while the gradient passes through unchanged.
        std::vector<double> canon = raw;
        spec_.canonicalize_raw(canon);
        critic_.forward(critic_input(t->state, canon), critic_cache);
        critic_scratch.zero();
        const std::vector<double> dq = critic_.backward(
            critic_cache, std::vector<double>{1.0}, critic_scratch);
        std::vector<double> upstream(action_dim_);
        for (std::size_t d = 0; d < action_dim_; ++d)
            upstream[d] = -dq[state_dim_ + d] * inv_b;  // descend on -Q
        actor_.backward(actor_cache, upstream, actor_grads);
    }
    return actor_grads;
}

void DdpgAgent::update_actor(const std::vector<const Transition*>& batch) {
    const DenseNet::Gradients grads = actor_gradient(batch);
    apply_gradients(actor_, grads, actor_opt_);
}

void DdpgAgent::soft_update() {
    actor_.soft_blend_into(target_actor_, cfg_.soft_rate);
    critic_.soft_blend_into(target_critic_, cfg_.soft_rate);
}

void DdpgAgent::save_checkpoint(const std::string& prefix) const {
    actor_.save_file(prefix + ".actor.net");
    critic_.save_file(prefix + ".critic.net");
}

void DdpgAgent::load_checkpoint(const std::string& prefix) {
    actor_ = DenseNet::load_file(prefix + ".actor.net");
    critic_ = DenseNet::load_file(prefix + ".critic.net");
    target_actor_ = actor_;
    target_critic_ = critic_;
}

TrainingLog train(DdpgAgent& agent, WptEnv& env, std::size_t episodes,
                  std::size_t steps, Rng& rng) {
    if (agent.actor().input_dim() != env.state_dim() ||
        agent.action_spec().phase_count != env.config().ris.element_count ||
        agent.action_spec().mobile != env.config().mobile)
        throw SimError(Err::ShapeMismatch, "agent/env dimensions disagree");
    TrainingLog log;
    log.reserve(episodes);
    StickyRandom sticky;
    for (std::size_t ep = 0; ep < episodes; ++ep) {
        EnvState state = env.reset();
        sticky.clear();
        double reward_sum = 0.0;
        double loss_sum = 0.0;
        std::size_t updates = 0;
        for (std::size_t t = 0; t < steps; ++t) {
            std::vector<double> raw =
                agent.select_raw(state.features, rng, /*explore=*/true);
            const Action action =
                agent.action_spec().compose(raw, rng, &sticky);
            StepOutcome out = env.step(action);
            reward_sum += out.reward;
            agent.buffer().push({state.features, std::move(raw),
                                 out.reward * agent.reward_scale(),
                                 out.next_state.features});
            if (agent.buffer().size() >= agent.config().warmup) {
                const auto batch =
                    agent.buffer().sample(rng, agent.config().batch_size);
                loss_sum += agent.update_critic(batch);
                agent.update_actor(batch);
                agent.soft_update();
                ++updates;
            }
            state = std::move(out.next_state);
        }
        log.push_back({static_cast<int>(ep),
                       reward_sum / static_cast<double>(steps),
                       updates ? loss_sum / static_cast<double>(updates)
                               : 0.0});
        agent.set_noise_scale(agent.noise_scale() *
                              agent.config().noise_decay);
    }
    return log;
}

double run_greedy_episode(const DdpgAgent& agent, WptEnv& env, Rng& rng,
                          std::size_t steps) {
    EnvState state = env.reset();
    StickyRandom sticky;
    double total = 0.0;
    for (std::size_t t = 0; t < steps; ++t) {
        const Action action =
            agent.select_action(state, rng, /*explore=*/false, &sticky);
        StepOutcome out = env.step(action);
        total += out.reward;
        state = std::move(out.next_state);
    }
    return total / static_cast<double>(steps);
}

}  // namespace riswpt
