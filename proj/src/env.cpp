#include "riswpt/env.hpp"

#include <algorithm>
#include <cmath>

namespace riswpt {

bool FlightBounds::contains(const Vec3& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y &&
           p.z >= lo.z && p.z <= hi.z;
}

Vec3 FlightBounds::clamp(const Vec3& p) const {
    return {std::clamp(p.x, lo.x, hi.x), std::clamp(p.y, lo.y, hi.y),
            std::clamp(p.z, lo.z, hi.z)};
}

void NetworkConfig::validate() const {
    if (device_count == 0)
        throw SimError(Err::ShapeMismatch, "device_count must be >= 1");
    if (device_positions.size() != device_count)
        throw SimError(Err::ShapeMismatch,
                       "device_positions size != device_count");
    if (eh_efficiency <= 0.0 || eh_efficiency > 1.0)
        throw SimError(Err::ShapeMismatch, "eh_efficiency outside (0,1]");
    if (v_max <= 0.0) throw SimError(Err::ShapeMismatch, "v_max must be > 0");
    if (!flight_bounds.contains(uav_initial))
        throw SimError(Err::ShapeMismatch, "uav_initial outside flight bounds");
    if (ris.element_count == 0)
        throw SimError(Err::ShapeMismatch, "RIS needs at least one element");
    if (mobile && freeze_channels)
        throw SimError(Err::ShapeMismatch,
                       "frozen channels require a hovering UAV");
    if (pathloss.beta0 <= 0.0 || pathloss.noise_power <= 0.0)
        throw SimError(Err::ShapeMismatch,
                       "beta0 and noise_power must be positive");
}

Vec3 NetworkConfig::hover_point() const {
    double cx = 0.0, cy = 0.0;
    for (const Vec3& d : device_positions) {
        cx += d.x;
        cy += d.y;
    }
    const double n = static_cast<double>(device_positions.size());
    return {cx / n, cy / n, uav_altitude};
}

double NetworkConfig::effective_feature_scale() const {
    if (feature_scale > 0.0) return feature_scale;
    const double amp =
        std::sqrt(pathloss.beta0 * std::pow(uav_altitude, -pathloss.kappa1));
    return amp > 0.0 ? 1.0 / amp : 1.0;
}

double harvested_power(double tau, const NetworkConfig& config, Complex gain) {
    if (!(tau > 0.0 && tau < 1.0))
        throw SimError(Err::TauOutOfRange, "tau must lie in (0,1)");
    return tau * config.eh_efficiency * config.tx_power * std::norm(gain);
}

double sinr(std::size_t n, const std::vector<double>& powers,
            const std::vector<Complex>& gains, double noise_power) {
    if (powers.size() != gains.size())
        throw SimError(Err::LengthMismatch, "powers/gains length mismatch");
    if (n >= powers.size())
        throw SimError(Err::IndexOutOfRange, "device index out of range");
    double interference = 0.0;
    for (std::size_t m = 0; m < powers.size(); ++m) {
        if (m == n) continue;
        interference += powers[m] * std::norm(gains[m]);
    }
    return powers[n] * std::norm(gains[n]) / (interference + noise_power);
}

double sum_rate(double tau, const std::vector<double>& sinrs,
                double bandwidth) {
    if (!(tau > 0.0 && tau < 1.0))
        throw SimError(Err::TauOutOfRange, "tau must lie in (0,1)");
    double total = 0.0;
    for (double g : sinrs) total += (1.0 - tau) * bandwidth * std::log2(1.0 + g);
    return total;
}

Vec3 apply_motion(const Vec3& uav, double velocity, double heading, Rng& rng,
                  const NetworkConfig& config, bool* clamped) {
    if (velocity > config.v_max)
        throw SimError(Err::VelocityExceedsMax, "velocity above v_max");
    Vec3 next = uav;
    next.x += velocity * std::cos(heading);
    next.y += velocity * std::sin(heading);
    if (config.motion_noise_std > 0.0) {
        std::normal_distribution<double> noise(0.0, config.motion_noise_std);
        next.x += noise(rng);
        next.y += noise(rng);
        next.z += noise(rng);
    }
    const Vec3 bounded = config.flight_bounds.clamp(next);
    if (clamped)
        *clamped = bounded.x != next.x || bounded.y != next.y ||
                   bounded.z != next.z;
    return bounded;
}

EnvState build_state(const ChannelSet& channels,
                     const PhaseShiftVector& phases, const Vec3& uav,
                     int step_index) {
    channels.validate();
    if (phases.size() != channels.element_count())
        throw SimError(Err::LengthMismatch, "phase count != element count");
    EnvState s;
    s.features.reserve(2 * channels.device_count());
    const ComplexVector ph = phases.phasors();
    for (std::size_t n = 0; n < channels.device_count(); ++n) {
        const Complex g = effective_gain_phasors(
            channels.direct[n], channels.uav_ris, ph, channels.ris_iot[n]);
        s.features.push_back(g.real());
        s.features.push_back(g.imag());
    }
    s.uav_position = uav;
    s.step_index = step_index;
    return s;
}

std::vector<Vec3> place_devices_disc(Rng& rng, std::size_t n,
                                     const Vec3& center, double radius) {
    return place_devices_annulus(rng, n, center, 0.0, radius);
}

std::vector<Vec3> place_devices_annulus(Rng& rng, std::size_t n,
                                        const Vec3& center, double inner,
                                        double outer) {
    if (inner < 0.0 || outer < inner)
        throw SimError(Err::ShapeMismatch, "need 0 <= inner <= outer");
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Vec3> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = std::sqrt(inner * inner +
                                   unit(rng) * (outer * outer - inner * inner));
        const double a = 2.0 * M_PI * unit(rng);
        out.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a),
                       0.0});
    }
    return out;
}

double nominal_sum_rate(const NetworkConfig& config) {
    config.validate();
    const Vec3 uav = config.mobile ? config.uav_initial : config.hover_point();
    const PathLossParams& pl = config.pathloss;
    const std::size_t n_dev = config.device_count;

    ChannelSet cs;
    cs.uav_ris = uav_ris_channel(uav, config.ris, pl);
    if (!config.ris_enabled)
        std::fill(cs.uav_ris.begin(), cs.uav_ris.end(), Complex{0.0, 0.0});
    const double w_los =
        std::sqrt(pl.rician_factor / (1.0 + pl.rician_factor));
    for (const Vec3& dev : config.device_positions) {
        cs.direct.push_back(
            std::sqrt(pl.beta0 * std::pow(distance(uav, dev), -pl.kappa1)));
        const double amp = std::sqrt(
            pl.beta0 *
            std::pow(distance(config.ris.reference_position, dev), -pl.kappa3));
        ComplexVector g = array_response(aod_cosine(config.ris, dev), config.ris);
        for (Complex& c : g) c *= amp * w_los;
        cs.ris_iot.push_back(std::move(g));
    }

    const double tau = 0.5;
    const PhaseShiftVector zeros =
        PhaseShiftVector::zeros(config.ris.element_count);
    const ComplexVector ph = zeros.phasors();
    std::vector<Complex> gains(n_dev);
    std::vector<double> powers(n_dev);
    for (std::size_t n = 0; n < n_dev; ++n) {
        gains[n] = effective_gain_phasors(cs.direct[n], cs.uav_ris, ph,
                                          cs.ris_iot[n]);
        powers[n] = harvested_power(tau, config, gains[n]);
    }
    std::vector<double> sinrs(n_dev);
    for (std::size_t n = 0; n < n_dev; ++n)
        sinrs[n] = sinr(n, powers, gains, pl.noise_power);
    return sum_rate(tau, sinrs, config.bandwidth);
}

WptEnv::WptEnv(NetworkConfig config, std::uint64_t seed)
    : cfg_(std::move(config)), rng_(seed) {
    cfg_.validate();
    feature_scale_ = cfg_.effective_feature_scale();
    reset();
}

ChannelSet WptEnv::sample_at(const Vec3& uav) {
    ChannelSet cs = sample_channels(rng_, uav, cfg_.device_positions, cfg_.ris,
                                    cfg_.pathloss);
    if (!cfg_.ris_enabled)
        std::fill(cs.uav_ris.begin(), cs.uav_ris.end(), Complex{0.0, 0.0});
    return cs;
}

EnvState WptEnv::scaled_state(const PhaseShiftVector& phases) const {
    EnvState s = build_state(channels_, phases, uav_, step_index_);
    for (double& f : s.features) f *= feature_scale_;
    return s;
}

EnvState WptEnv::reset() {
    step_index_ = 0;
    uav_ = cfg_.mobile ? cfg_.uav_initial : cfg_.hover_point();
    // A frozen env keeps the realization drawn at construction across
    // resets; refreeze() draws a new one.
    if (!cfg_.freeze_channels || channels_.direct.empty())
        channels_ = sample_at(uav_);
    return scaled_state(PhaseShiftVector::zeros(cfg_.ris.element_count));
}

void WptEnv::refreeze() { channels_ = sample_at(uav_); }

StepOutcome WptEnv::step(const Action& action) {
    if (!(action.tau > 0.0 && action.tau < 1.0))
        throw SimError(Err::TauOutOfRange, "action.tau outside (0,1)");
    if (action.phases.size() != cfg_.ris.element_count)
        throw SimError(Err::LengthMismatch, "action phase count != K");

    StepOutcome out;
    if (cfg_.mobile) {
        bool clamped = false;
        uav_ = apply_motion(uav_, action.velocity, action.heading, rng_, cfg_,
                            &clamped);
        if (clamped) out.constraint_violation = ConstraintTag::ClampedToBounds;
    }
    if (!cfg_.freeze_channels) channels_ = sample_at(uav_);

    const std::size_t n_dev = cfg_.device_count;
    std::vector<Complex> gains(n_dev);
    const ComplexVector ph = action.phases.phasors();
    for (std::size_t n = 0; n < n_dev; ++n)
        gains[n] = effective_gain_phasors(channels_.direct[n],
                                          channels_.uav_ris, ph,
                                          channels_.ris_iot[n]);

    out.per_device_harvested_power.resize(n_dev);
    for (std::size_t n = 0; n < n_dev; ++n)
        out.per_device_harvested_power[n] =
            harvested_power(action.tau, cfg_, gains[n]);

    // The RIS holds the action's phases through both the WPT and WIT phase,
    // so the uplink reuses the same composite gains.
    out.per_device_sinr.resize(n_dev);
    for (std::size_t n = 0; n < n_dev; ++n)
        out.per_device_sinr[n] = sinr(n, out.per_device_harvested_power, gains,
                                      cfg_.pathloss.noise_power);

    out.reward = sum_rate(action.tau, out.per_device_sinr, cfg_.bandwidth);
    ++step_index_;
    out.next_state = scaled_state(action.phases);
    return out;
}

EnvSnapshot WptEnv::snapshot() const {
    return {channels_, cfg_.eh_efficiency, cfg_.tx_power,
            cfg_.pathloss.noise_power, cfg_.bandwidth};
}

}  // namespace riswpt
