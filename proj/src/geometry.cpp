#include "riswpt/geometry.hpp"

#include <cmath>

namespace riswpt {

double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    const double dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

double axis_cosine(const Vec3& from, const Vec3& to) {
    const double d = distance(from, to);
    if (d == 0.0)
        throw SimError(Err::ZeroDistance, "coincident positions have no angle");
    return (to.x - from.x) / d;
}

}  // namespace

double aoa_cosine(const Vec3& uav, const RisGeometry& ris) {
    return axis_cosine(uav, ris.reference_position);
}

double aod_cosine(const RisGeometry& ris, const Vec3& device) {
    return axis_cosine(ris.reference_position, device);
}

double wrap_angle(double theta) {
    constexpr double two_pi = 6.283185307179586476925286766559;
    double t = std::fmod(theta, two_pi);
    if (t < 0.0) t += two_pi;
    return t;
}

}  // namespace riswpt
