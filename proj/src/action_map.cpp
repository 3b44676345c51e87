#include "riswpt/action_map.hpp"

#include <cmath>

namespace riswpt {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double map_tau(double raw) {
    return kTauMargin + (1.0 - 2.0 * kTauMargin) * sigmoid(raw);
}

double uniform_tau(Rng& rng) {
    std::uniform_real_distribution<double> u(kTauMargin, 1.0 - kTauMargin);
    return u(rng);
}

std::vector<double> uniform_phases(Rng& rng, std::size_t k) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
    std::vector<double> out(k);
    for (double& t : out) t = wrap_angle(u(rng));
    return out;
}

std::size_t ActionSpec::agent_dim() const {
    std::size_t d = 0;
    if (mobile && motion == PartSource::Agent) d += 2;
    if (tau == PartSource::Agent) d += 1;
    if (phases == PartSource::Agent) d += phase_count;
    return d;
}

Action ActionSpec::compose(const std::vector<double>& raw, Rng& rng,
                           StickyRandom* sticky) const {
    if (raw.size() != agent_dim())
        throw SimError(Err::ShapeMismatch, "raw action dim != agent_dim()");
    const bool cache = random_per_episode && sticky != nullptr;
    Action a;
    std::size_t i = 0;
    if (mobile) {
        switch (motion) {
            case PartSource::Agent:
                a.velocity = v_max * sigmoid(raw[i++]);
                a.heading = wrap_angle(raw[i++]);
                break;
            case PartSource::Random: {
                std::uniform_real_distribution<double> uv(0.0, v_max);
                std::uniform_real_distribution<double> uh(0.0, 2.0 * M_PI);
                a.velocity = uv(rng);
                a.heading = wrap_angle(uh(rng));
                break;
            }
            case PartSource::Zero:
                a.velocity = 0.0;
                a.heading = 0.0;
                break;
        }
    }
    switch (tau) {
        case PartSource::Agent: a.tau = map_tau(raw[i++]); break;
        case PartSource::Random:
            if (cache) {
                if (!sticky->has_tau) {
                    sticky->tau = uniform_tau(rng);
                    sticky->has_tau = true;
                }
                a.tau = sticky->tau;
            } else {
                a.tau = uniform_tau(rng);
            }
            break;
        case PartSource::Zero:
            throw SimError(Err::TauOutOfRange, "tau cannot be zero-sourced");
    }
    std::vector<double> theta(phase_count, 0.0);
    switch (phases) {
        case PartSource::Agent:
            for (std::size_t k = 0; k < phase_count; ++k)
                theta[k] = wrap_angle(raw[i++]);
            break;
        case PartSource::Random:
            if (cache) {
                if (!sticky->has_phases) {
                    sticky->phases = uniform_phases(rng, phase_count);
                    sticky->has_phases = true;
                }
                theta = sticky->phases;
            } else {
                theta = uniform_phases(rng, phase_count);
            }
            break;
        case PartSource::Zero: break;
    }
    a.phases = PhaseShiftVector(std::move(theta));
    return a;
}

void ActionSpec::canonicalize_raw(std::vector<double>& raw) const {
    std::size_t i = 0;
    if (mobile && motion == PartSource::Agent) {
        ++i;                              // velocity raw is unbounded
        raw[i] = wrap_angle(raw[i]);      // heading
        ++i;
    }
    if (tau == PartSource::Agent) ++i;
    if (phases == PartSource::Agent)
        for (std::size_t k = 0; k < phase_count; ++k, ++i)
            raw[i] = wrap_angle(raw[i]);
}

}  // namespace riswpt
