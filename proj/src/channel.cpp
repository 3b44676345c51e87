#include "riswpt/channel.hpp"

#include <cmath>

#include "riswpt/kernels.hpp"

namespace riswpt {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Zero-mean unit-variance complex Gaussian: each component N(0, 1/2).
Complex sample_cn01(Rng& rng) {
    std::normal_distribution<double> comp(0.0, std::sqrt(0.5));
    const double re = comp(rng);
    const double im = comp(rng);
    return {re, im};
}

}  // namespace

PhaseShiftVector::PhaseShiftVector(std::vector<double> angles)
    : theta(std::move(angles)) {
    for (double& t : theta) t = wrap_angle(t);
}

PhaseShiftVector PhaseShiftVector::zeros(std::size_t k) {
    PhaseShiftVector p;
    p.theta.assign(k, 0.0);
    return p;
}

ComplexVector PhaseShiftVector::phasors() const {
    ComplexVector out(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k)
        out[k] = {std::cos(theta[k]), std::sin(theta[k])};
    return out;
}

void ChannelSet::validate() const {
    if (ris_iot.size() != direct.size())
        throw SimError(Err::LengthMismatch,
                       "per-device channel sequences differ in length");
    for (const auto& g : ris_iot)
        if (g.size() != uav_ris.size())
            throw SimError(Err::LengthMismatch,
                           "ris_iot vector length != element count");
}

ComplexVector array_response(double cos_angle, const RisGeometry& geometry) {
    ComplexVector v(geometry.element_count);
    const double step = -kTwoPi * geometry.spacing_over_wavelength * cos_angle;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double phase = step * static_cast<double>(k);
        v[k] = {std::cos(phase), std::sin(phase)};
    }
    return v;
}

Complex direct_channel(Rng& rng, double d_n, const PathLossParams& params) {
    if (d_n <= 0.0)
        throw SimError(Err::NonpositiveDistance, "direct link distance <= 0");
    const double amp = std::sqrt(params.beta0 * std::pow(d_n, -params.kappa1));
    return amp * sample_cn01(rng);
}

ComplexVector uav_ris_channel(const Vec3& uav, const RisGeometry& ris,
                              const PathLossParams& params) {
    const double d = distance(uav, ris.reference_position);
    if (d == 0.0)
        throw SimError(Err::ZeroDistance, "UAV sits on the RIS reference");
    const double amp = std::sqrt(params.beta0 * std::pow(d, -params.kappa2));
    ComplexVector v = array_response(aoa_cosine(uav, ris), ris);
    for (Complex& c : v) c *= amp;
    return v;
}

ComplexVector ris_iot_channel(Rng& rng, const RisGeometry& ris,
                              const Vec3& device,
                              const PathLossParams& params) {
    const double d = distance(ris.reference_position, device);
    if (d == 0.0)
        throw SimError(Err::ZeroDistance, "device sits on the RIS reference");
    const double amp = std::sqrt(params.beta0 * std::pow(d, -params.kappa3));
    const double b1 = params.rician_factor;
    const double w_los = std::sqrt(b1 / (1.0 + b1));
    const double w_nlos = std::sqrt(1.0 / (1.0 + b1));
    ComplexVector v = array_response(aod_cosine(ris, device), ris);
    for (Complex& c : v) c = amp * (w_los * c + w_nlos * sample_cn01(rng));
    return v;
}

Complex effective_gain(Complex h, const ComplexVector& uav_ris,
                       const PhaseShiftVector& phases,
                       const ComplexVector& ris_iot) {
    if (phases.size() != uav_ris.size())
        throw SimError(Err::LengthMismatch, "phase count != element count");
    return effective_gain_phasors(h, uav_ris, phases.phasors(), ris_iot);
}

Complex effective_gain_phasors(Complex h, const ComplexVector& uav_ris,
                               const ComplexVector& phasors,
                               const ComplexVector& ris_iot) {
    if (uav_ris.size() != phasors.size() || uav_ris.size() != ris_iot.size())
        throw SimError(Err::LengthMismatch,
                       "effective gain operands differ in length");
    return h + kernels::complex_triple_dot(uav_ris.data(), phasors.data(),
                                           ris_iot.data(), uav_ris.size());
}

ChannelSet sample_channels(Rng& rng, const Vec3& uav,
                           const std::vector<Vec3>& devices,
                           const RisGeometry& ris,
                           const PathLossParams& params) {
    ChannelSet cs;
    cs.direct.reserve(devices.size());
    cs.ris_iot.reserve(devices.size());
    for (const Vec3& dev : devices)
        cs.direct.push_back(direct_channel(rng, distance(uav, dev), params));
    cs.uav_ris = uav_ris_channel(uav, ris, params);
    for (const Vec3& dev : devices)
        cs.ris_iot.push_back(ris_iot_channel(rng, ris, dev, params));
    return cs;
}

}  // namespace riswpt
