#pragma once

#include <complex>
#include <random>
#include <vector>

#include "riswpt/geometry.hpp"

namespace riswpt {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;
using Rng = std::mt19937_64;

// K RIS phase angles, stored wrapped into [0, 2*pi).
struct PhaseShiftVector {
    std::vector<double> theta;

    PhaseShiftVector() = default;
    explicit PhaseShiftVector(std::vector<double> angles);
    static PhaseShiftVector zeros(std::size_t k);

    std::size_t size() const { return theta.size(); }

    // Unit phasors e^{j theta_k}.
    ComplexVector phasors() const;
};

// One time step's channel realization: direct gains h_n, the UAV->RIS array
// vector H, and the RIS->IoT vectors g_n.
struct ChannelSet {
    std::vector<Complex> direct;           // per device
    ComplexVector uav_ris;                 // length K
    std::vector<ComplexVector> ris_iot;    // per device, each length K

    std::size_t device_count() const { return direct.size(); }
    std::size_t element_count() const { return uav_ris.size(); }
    void validate() const;
};

// Steering vector [1, e^{-j 2pi (d/lambda) cos}, ..., e^{-j 2pi (d/lambda)(K-1) cos}].
ComplexVector array_response(double cos_angle, const RisGeometry& geometry);

// sqrt(beta0 d^-kappa1) * CN(0,1)
Complex direct_channel(Rng& rng, double d_n, const PathLossParams& params);

// Deterministic LoS channel sqrt(beta0 d^-kappa2) * steering(aoa).
ComplexVector uav_ris_channel(const Vec3& uav, const RisGeometry& ris,
                              const PathLossParams& params);

// Rician: sqrt(beta0 d^-kappa3) (sqrt(b1/(1+b1)) LoS + sqrt(1/(1+b1)) NLoS).
ComplexVector ris_iot_channel(Rng& rng, const RisGeometry& ris,
                              const Vec3& device,
                              const PathLossParams& params);

// h + sum_k H_k e^{j theta_k} g_k
Complex effective_gain(Complex h, const ComplexVector& uav_ris,
                       const PhaseShiftVector& phases,
                       const ComplexVector& ris_iot);

// Same with precomputed unit phasors (the grid oracle's inner loop).
Complex effective_gain_phasors(Complex h, const ComplexVector& uav_ris,
                               const ComplexVector& phasors,
                               const ComplexVector& ris_iot);

// One block-fading draw for every link at the given positions.
ChannelSet sample_channels(Rng& rng, const Vec3& uav,
                           const std::vector<Vec3>& devices,
                           const RisGeometry& ris,
                           const PathLossParams& params);

}  // namespace riswpt
