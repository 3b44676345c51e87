#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "riswpt/env.hpp"

using namespace riswpt;

namespace {

NetworkConfig small_config(std::size_t n_dev = 2, std::size_t k = 3) {
    NetworkConfig c;
    c.device_count = n_dev;
    c.device_positions.clear();
    for (std::size_t i = 0; i < n_dev; ++i) {
        const double angle = 2.0 * M_PI * static_cast<double>(i) /
                             static_cast<double>(n_dev);
        c.device_positions.push_back(
            {30.0 * std::cos(angle), 30.0 * std::sin(angle), 0.0});
    }
    c.ris.element_count = k;
    return c;
}

}  // namespace

TEST_CASE("harvested power follows tau * eta * P0 * |gain|^2") {
    NetworkConfig c = small_config();
    c.eh_efficiency = 0.5;
    c.tx_power = 5.0;
    const Complex gain{1e-3, 0.0};  // |gain|^2 = 1e-6
    CHECK(harvested_power(0.5, c, gain) == doctest::Approx(1.25e-6));
    // linearity in |gain|^2
    const Complex gain2{0.0, std::sqrt(2.0) * 1e-3};
    CHECK(harvested_power(0.5, c, gain2) ==
          doctest::Approx(2.0 * harvested_power(0.5, c, gain)));
    // vanishing harvest time
    CHECK(harvested_power(1e-12, c, gain) < 1e-17);
    CHECK_THROWS_AS(harvested_power(0.0, c, gain), SimError);
    CHECK_THROWS_AS(harvested_power(1.0, c, gain), SimError);
}

TEST_CASE("sinr") {
    SUBCASE("single device has no interference") {
        const double got = sinr(0, {2.0}, {Complex{3.0, 0.0}}, 0.5);
        CHECK(got == doctest::Approx(2.0 * 9.0 / 0.5));
    }
    SUBCASE("two symmetric devices") {
        const std::vector<double> p{2.0, 2.0};
        const std::vector<Complex> g{{1.0, 0.0}, {0.0, 1.0}};
        const double s = 2.0;  // p |g|^2
        CHECK(sinr(0, p, g, 0.25) == doctest::Approx(s / (s + 0.25)));
        CHECK(sinr(1, p, g, 0.25) == doctest::Approx(s / (s + 0.25)));
    }
    SUBCASE("three devices against a direct evaluation") {
        const std::vector<double> p{0.3, 1.1, 0.7};
        const std::vector<Complex> g{{0.2, -0.5}, {1.0, 0.25}, {-0.4, 0.9}};
        const double noise = 0.05;
        for (std::size_t n = 0; n < 3; ++n) {
            double interf = 0.0;
            for (std::size_t m = 0; m < 3; ++m)
                if (m != n) interf += p[m] * std::norm(g[m]);
            CHECK(sinr(n, p, g, noise) ==
                  doctest::Approx(p[n] * std::norm(g[n]) / (interf + noise)));
        }
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(sinr(1, {1.0}, {Complex{1.0, 0.0}}, 0.1), SimError);
        CHECK_THROWS_AS(sinr(0, {1.0, 2.0}, {Complex{1.0, 0.0}}, 0.1),
                        SimError);
    }
}

TEST_CASE("sum rate") {
    CHECK(sum_rate(0.5, {1.0}, 1.0) == doctest::Approx(0.5));
    CHECK(sum_rate(0.25, {3.0, 7.0}, 1.0) == doctest::Approx(3.75));
    CHECK(sum_rate(1.0 - 1e-12, {5.0, 5.0}, 1.0) < 1e-9);
    CHECK_THROWS_AS(sum_rate(0.0, {1.0}, 1.0), SimError);
    CHECK_THROWS_AS(sum_rate(1.0, {1.0}, 1.0), SimError);
}

TEST_CASE("motion kinematics") {
    NetworkConfig c = small_config();
    Rng rng(5);
    SUBCASE("null action leaves the position unchanged") {
        const Vec3 p = apply_motion({10, 20, 100}, 0.0, 1.2, rng, c);
        CHECK(p.x == 10.0);
        CHECK(p.y == 20.0);
        CHECK(p.z == 100.0);
    }
    SUBCASE("axis-aligned move of exactly v") {
        const Vec3 p = apply_motion({0, 0, 100}, 20.0, 0.0, rng, c);
        CHECK(p.x == doctest::Approx(20.0));
        CHECK(p.y == doctest::Approx(0.0));
    }
    SUBCASE("component-wise clamp onto the flying zone") {
        bool clamped = false;
        const Vec3 p =
            apply_motion({495, -495, 100}, 20.0, M_PI / 4.0, rng, c, &clamped);
        CHECK(clamped);
        CHECK(p.x == doctest::Approx(500.0));  // 495 + 14.14 clamped
        CHECK(p.y == doctest::Approx(-495.0 + 20.0 * std::sin(M_PI / 4.0)));
        // scalar clamp oracle on each component
        const double raw_x = 495.0 + 20.0 * std::cos(M_PI / 4.0);
        CHECK(p.x == std::clamp(raw_x, -500.0, 500.0));
    }
    SUBCASE("velocity above v_max is rejected") {
        CHECK_THROWS_AS(apply_motion({0, 0, 100}, 20.01, 0.0, rng, c),
                        SimError);
    }
    SUBCASE("altitude noise stays inside the zone") {
        c.motion_noise_std = 50.0;
        for (int i = 0; i < 200; ++i) {
            const Vec3 p = apply_motion({0, 0, 60}, 5.0, 1.0, rng, c);
            CHECK(c.flight_bounds.contains(p));
        }
    }
}

TEST_CASE("state features interleave effective gains") {
    ChannelSet cs;
    cs.direct = {Complex{0, 0}};
    cs.uav_ris = {Complex{0, 0}, Complex{0, 0}};
    cs.ris_iot = {{Complex{0, 0}, Complex{0, 0}}};
    const EnvState s =
        build_state(cs, PhaseShiftVector::zeros(2), {0, 0, 200}, 0);
    REQUIRE(s.features.size() == 2);
    CHECK(s.features[0] == 0.0);
    CHECK(s.features[1] == 0.0);

    Rng rng(9);
    const std::vector<Vec3> devices{{10, 0, 0}, {-5, 12, 0}};
    RisGeometry ris{{200, 0, 50}, 4, 0.5};
    PathLossParams p;
    const ChannelSet full = sample_channels(rng, {0, 0, 200}, devices, ris, p);
    const PhaseShiftVector phases({0.3, 1.0, 2.2, 5.9});
    const EnvState s2 = build_state(full, phases, {0, 0, 200}, 3);
    REQUIRE(s2.features.size() == 4);
    CHECK(s2.step_index == 3);
    for (std::size_t n = 0; n < 2; ++n) {
        const Complex want = effective_gain(full.direct[n], full.uav_ris,
                                            phases, full.ris_iot[n]);
        CHECK(s2.features[2 * n] == doctest::Approx(want.real()));
        CHECK(s2.features[2 * n + 1] == doctest::Approx(want.imag()));
    }
}

TEST_CASE("env reset contract") {
    NetworkConfig c = small_config();
    WptEnv env(c, 7);
    const EnvState s = env.reset();
    CHECK(s.step_index == 0);
    // symmetric devices put the hover point at the origin
    CHECK(env.uav_position().x == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(env.uav_position().y == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(env.uav_position().z == doctest::Approx(c.uav_altitude));

    WptEnv env2(c, 7);
    const EnvState s2 = env2.reset();
    REQUIRE(s.features.size() == s2.features.size());
    for (std::size_t i = 0; i < s.features.size(); ++i)
        CHECK(s.features[i] == s2.features[i]);
}

TEST_CASE("hovering step keeps the UAV fixed and reward is recomputable") {
    NetworkConfig c = small_config(3, 4);
    WptEnv env(c, 11);
    env.reset();
    const Vec3 before = env.uav_position();
    Action a;
    a.tau = 0.35;
    a.phases = PhaseShiftVector({0.1, 2.0, 4.0, 1.5});
    const StepOutcome out = env.step(a);
    const Vec3 after = env.uav_position();
    CHECK(before.x == after.x);
    CHECK(before.y == after.y);
    CHECK(before.z == after.z);
    CHECK(out.reward >= 0.0);
    REQUIRE(out.per_device_sinr.size() == 3);
    REQUIRE(out.per_device_harvested_power.size() == 3);

    // end-to-end recomputation from the channels the step used
    const ChannelSet& cs = env.channels();
    std::vector<Complex> gains(3);
    std::vector<double> powers(3);
    for (std::size_t n = 0; n < 3; ++n) {
        gains[n] =
            effective_gain(cs.direct[n], cs.uav_ris, a.phases, cs.ris_iot[n]);
        powers[n] = harvested_power(a.tau, c, gains[n]);
        CHECK(out.per_device_harvested_power[n] == doctest::Approx(powers[n]));
    }
    std::vector<double> sinrs(3);
    for (std::size_t n = 0; n < 3; ++n) {
        sinrs[n] = sinr(n, powers, gains, c.pathloss.noise_power);
        CHECK(out.per_device_sinr[n] == doctest::Approx(sinrs[n]));
    }
    CHECK(out.reward == doctest::Approx(sum_rate(a.tau, sinrs, c.bandwidth)));
}

TEST_CASE("same seed and actions reproduce identical trajectories") {
    NetworkConfig c = small_config(2, 3);
    c.mobile = true;
    c.uav_initial = {50, 50, 200};
    WptEnv ea(c, 13), eb(c, 13);
    ea.reset();
    eb.reset();
    Rng act_rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        Action a;
        a.tau = 0.1 + 0.8 * u(act_rng);
        a.velocity = 20.0 * u(act_rng);
        a.heading = 2.0 * M_PI * u(act_rng);
        a.phases = PhaseShiftVector(
            {6.0 * u(act_rng), 6.0 * u(act_rng), 6.0 * u(act_rng)});
        const StepOutcome oa = ea.step(a);
        const StepOutcome ob = eb.step(a);
        CHECK(oa.reward == ob.reward);
        for (std::size_t i = 0; i < oa.next_state.features.size(); ++i)
            CHECK(oa.next_state.features[i] == ob.next_state.features[i]);
    }
}

TEST_CASE("mobile UAV never leaves the flying zone") {
    NetworkConfig c = small_config(1, 2);
    c.mobile = true;
    c.uav_initial = {480, -480, 60};
    WptEnv env(c, 21);
    env.reset();
    Rng act_rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        Action a;
        a.tau = 0.5;
        a.velocity = 20.0 * u(act_rng);
        a.heading = 2.0 * M_PI * u(act_rng);
        a.phases = PhaseShiftVector({0.0, 0.0});
        env.step(a);
        CHECK(c.flight_bounds.contains(env.uav_position()));
    }
}

TEST_CASE("invalid actions are rejected loudly") {
    NetworkConfig c = small_config(1, 2);
    WptEnv env(c, 3);
    env.reset();
    Action bad_tau;
    bad_tau.tau = 0.0;
    bad_tau.phases = PhaseShiftVector::zeros(2);
    CHECK_THROWS_AS(env.step(bad_tau), SimError);
    Action bad_k;
    bad_k.tau = 0.5;
    bad_k.phases = PhaseShiftVector::zeros(3);
    CHECK_THROWS_AS(env.step(bad_k), SimError);
}

TEST_CASE("frozen single-device reward is unimodal in tau") {
    NetworkConfig c = small_config(1, 3);
    c.freeze_channels = true;
    WptEnv env(c, 2024);
    env.reset();
    const PhaseShiftVector phases({1.0, 2.0, 3.0});
    std::vector<double> r;
    const int grid = 1000;
    for (int i = 1; i <= grid; ++i) {
        Action a;
        a.tau = static_cast<double>(i) / (grid + 1);
        a.phases = phases;
        r.push_back(env.step(a).reward);
    }
    int local_maxima = 0;
    for (int i = 1; i + 1 < grid; ++i)
        if (r[i] > r[i - 1] && r[i] > r[i + 1]) ++local_maxima;
    CHECK(local_maxima == 1);
}

TEST_CASE("aligning phases for a device never lowers its received power") {
    NetworkConfig c = small_config(2, 3);
    c.freeze_channels = true;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        WptEnv env(c, seed);
        env.reset();
        const ChannelSet& cs = env.channels();
        Rng rng(seed * 31);
        std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
        for (std::size_t n = 0; n < 2; ++n) {
            std::vector<double> aligned(3);
            for (std::size_t e = 0; e < 3; ++e)
                aligned[e] = std::arg(cs.direct[n]) -
                             std::arg(cs.uav_ris[e] * cs.ris_iot[n][e]);
            const Complex ga = effective_gain(cs.direct[n], cs.uav_ris,
                                              PhaseShiftVector(aligned),
                                              cs.ris_iot[n]);
            for (int trial = 0; trial < 20; ++trial) {
                const PhaseShiftVector other(
                    {ang(rng), ang(rng), ang(rng)});
                const Complex go = effective_gain(cs.direct[n], cs.uav_ris,
                                                  other, cs.ris_iot[n]);
                // numerator p_n |gain_n|^2 is monotone in |gain_n|
                CHECK(std::norm(ga) >= std::norm(go) - 1e-30);
            }
        }
    }
}

TEST_CASE("config validation") {
    NetworkConfig c = small_config();
    c.eh_efficiency = 0.0;
    CHECK_THROWS_AS(c.validate(), SimError);
    c = small_config();
    c.mobile = true;
    c.freeze_channels = true;
    CHECK_THROWS_AS(WptEnv(c, 1), SimError);
    c = small_config();
    c.uav_initial = {0, 0, 1000};
    c.mobile = true;
    CHECK_THROWS_AS(WptEnv(c, 1), SimError);
}

TEST_CASE("annulus placement respects its radii") {
    Rng rng(33);
    const auto ring = place_devices_annulus(rng, 200, {10, -5, 0}, 80.0, 120.0);
    for (const Vec3& d : ring) {
        const double r = std::hypot(d.x - 10.0, d.y + 5.0);
        CHECK(r >= 80.0 - 1e-9);
        CHECK(r <= 120.0 + 1e-9);
        CHECK(d.z == 0.0);
    }
    CHECK_THROWS_AS(place_devices_annulus(rng, 1, {0, 0, 0}, 50.0, 20.0),
                    SimError);
}

TEST_CASE("nominal sum rate is positive and deterministic") {
    const NetworkConfig c = small_config(4, 8);
    const double r1 = nominal_sum_rate(c);
    const double r2 = nominal_sum_rate(c);
    CHECK(r1 > 0.0);
    CHECK(r1 == r2);
}
