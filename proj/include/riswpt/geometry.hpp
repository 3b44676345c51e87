#pragma once

#include <cstddef>

#include "riswpt/errors.hpp"

namespace riswpt {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

// Uniform linear RIS array along the world x-axis. Large-scale distances use
// the reference element; the per-element index enters only the phase
// progression (far-field approximation).
struct RisGeometry {
    Vec3 reference_position;
    std::size_t element_count = 1;          // K
    double spacing_over_wavelength = 0.5;   // d / lambda
};

struct PathLossParams {
    double beta0 = 1e-3;        // linear power gain at 1 m
    double kappa1 = 4.0;        // UAV <-> IoT exponent
    double kappa2 = 2.0;        // UAV <-> RIS exponent
    double kappa3 = 2.2;        // RIS <-> IoT exponent
    double rician_factor = 4.0; // beta1
    double noise_power = 4e-17; // alpha^2, watts (-134 dBm)
};

double distance(const Vec3& a, const Vec3& b);

// Cosine of the angle between the UAV->RIS direction and the array axis
// (+x). Sign convention: positive when the RIS lies in +x from the UAV.
double aoa_cosine(const Vec3& uav, const RisGeometry& ris);

// Departure-side counterpart: RIS->device direction projected on +x.
double aod_cosine(const RisGeometry& ris, const Vec3& device);

// Wrap an angle into [0, 2*pi).
double wrap_angle(double theta);

}  // namespace riswpt
