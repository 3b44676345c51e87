#pragma once

#include <vector>

#include "riswpt/env.hpp"

namespace riswpt {

// The optimizers act in an unbounded pre-mapping space; per-dimension
// transforms enforce Eq.-(10)'s box constraints by construction:
//   tau     = margin + (1 - 2 margin) * sigmoid(raw)
//   theta_k = wrap(raw)
//   v       = v_max * sigmoid(raw)
//   heading = wrap(raw)
constexpr double kTauMargin = 1e-3;

double sigmoid(double x);
double map_tau(double raw);
double uniform_tau(Rng& rng);                       // U(margin, 1-margin)
std::vector<double> uniform_phases(Rng& rng, std::size_t k);  // U[0, 2pi)^k

enum class PartSource { Agent, Random, Zero };

// Episode-scoped cache for Random-sourced parts; trainers clear it at each
// reset when a scheme redraws per episode instead of per step.
struct StickyRandom {
    std::vector<double> phases;
    double tau = -1.0;
    bool has_phases = false;
    bool has_tau = false;

    void clear() {
        has_phases = false;
        has_tau = false;
    }
};

// Declares which action parts the learner controls and which the scheme
// fills in (randomly or with zeros). Raw agent vectors are ordered
// [v, heading][tau][theta_1..theta_K], present parts only.
struct ActionSpec {
    bool mobile = false;
    std::size_t phase_count = 0;  // K of the target env
    PartSource motion = PartSource::Agent;  // ignored unless mobile
    PartSource tau = PartSource::Agent;
    PartSource phases = PartSource::Agent;
    double v_max = 20.0;
    bool random_per_episode = false;  // cache Random parts via StickyRandom

    std::size_t agent_dim() const;

    // Build the env action from the agent's raw vector, drawing any
    // Random-sourced parts from `rng` (or from `sticky` when caching).
    Action compose(const std::vector<double>& raw, Rng& rng,
                   StickyRandom* sticky = nullptr) const;

    // Wrap angle-typed raw dims into [0, 2*pi) so equivalent raw vectors
    // stored in a replay buffer coincide.
    void canonicalize_raw(std::vector<double>& raw) const;
};

}  // namespace riswpt
