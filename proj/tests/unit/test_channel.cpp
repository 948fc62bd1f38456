// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace rbisac;

namespace {
constexpr double pi = std::numbers::pi;

PlanarArray single(const Vec3& center, const Vec3& boresight) {
    return PlanarArray(1, 0.005, center, boresight, Vec3::UnitX());
}
} // namespace

TEST_SUITE("channel") {

TEST_CASE("cosine element pattern") {
    CHECK(element_gain(0.0) == doctest::Approx(3.141).epsilon(0.01 / 3.141));
    CHECK(linear_to_db(element_gain(0.0)) == doctest::Approx(4.97));
    CHECK(element_gain(pi / 2) == 0.0);
    CHECK(element_gain(pi / 3) == doctest::Approx(default_peak_gain() / 2));
    CHECK(element_gain(2.0) == 0.0);
    double prev = element_gain(0.0);
    for (double t = 0.01; t <= pi / 2; t += 0.01) {
        const double g = element_gain(t);
        CHECK(g <= prev);
        prev = g;
    }
}

TEST_CASE("single-pair channel matches the closed-form Friis amplitude") {
    const auto tx = single(Vec3::Zero(), Vec3::UnitZ());
    const auto rx = single(Vec3(0, 0, 1), -Vec3::UnitZ());
    const auto h = build_channel(tx, rx, 29e9, 2.0);
    const double lambda = wavelength(29e9);
    const double g = default_peak_gain();
    const double expected = lambda / (4 * pi) * std::sqrt(g * g * 1.0);
    CHECK(std::abs(h.gains(0, 0)) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(std::abs(h.gains(0, 0)) == doctest::Approx(2.58e-3).epsilon(0.01));

    // noiseless phase is exactly k l
    CHECK(std::abs(std::remainder(std::arg(h.gains(0, 0)) - 2 * pi / lambda * 1.0, 2 * pi)) < 1e-9);
}

TEST_CASE("carrier and distance scaling") {
    const auto tx = single(Vec3::Zero(), Vec3::UnitZ());
    const auto rx = single(Vec3(0, 0, 1.5), -Vec3::UnitZ());
    const auto rx2 = single(Vec3(0, 0, 3.0), -Vec3::UnitZ());
    const double h1 = std::abs(build_channel(tx, rx, 29e9, 2.0).gains(0, 0));
    const double h2 = std::abs(build_channel(tx, rx, 31e9, 2.0).gains(0, 0));
    CHECK(h2 / h1 == doctest::Approx(wavelength(31e9) / wavelength(29e9)).epsilon(1e-12));
    const double far = std::abs(build_channel(tx, rx2, 29e9, 2.0).gains(0, 0));
    CHECK(std::abs(far / h1 - 0.5) < 1e-12);
    const double far3 = std::abs(build_channel(tx, rx2, 29e9, 3.0).gains(0, 0));
    const double near3 = std::abs(build_channel(tx, rx, 29e9, 3.0).gains(0, 0));
    CHECK(far3 / near3 == doctest::Approx(std::pow(2.0, -1.5)).epsilon(1e-12));
}

TEST_CASE("entry magnitudes follow the per-pair formula and are reciprocal") {
    ScenarioConfig c;
    c.m_side = 3;
    c.n_side = 4;
    c.elevation_deg = 25.0;
    c.azimuth_deg = 70.0;
    const auto g = build_link_geometry(c);
    const auto h = build_channel(g.bs_tx, g.ue_rx, c.f1, 2.0);
    const auto back = build_channel(g.ue_rx, g.bs_tx, c.f1, 2.0);
    REQUIRE(h.gains.rows() == g.ue_rx.size());
    REQUIRE(h.gains.cols() == g.bs_tx.size());
    CHECK((h.gains.cwiseAbs() - back.gains.cwiseAbs().transpose()).norm() < 1e-18);

    const double lambda = wavelength(c.f1);
    for (int n = 0; n < g.ue_rx.size(); ++n) {
        for (int m = 0; m < g.bs_tx.size(); ++m) {
            const Vec3 d = g.ue_rx.position(n) - g.bs_tx.position(m);
            const double r = d.norm();
            const double gt = element_gain(std::acos(d.dot(g.bs_tx.boresight()) / r));
            const double gr = element_gain(std::acos(-d.dot(g.ue_rx.boresight()) / r));
            const double expected = lambda / (4 * pi) * std::sqrt(gt * gr / (r * r));
            CHECK(std::abs(h.gains(n, m)) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("phase noise consumes one draw per entry in row-major order") {
    ScenarioConfig c;
    c.m_side = 2;
    c.n_side = 2;
    const auto g = build_link_geometry(c);
    const auto clean = build_channel(g.bs_tx, g.ue_rx, c.f1, 2.0);

    RandomStream rng(314), replay(314);
    const auto noisy = build_channel(g.bs_tx, g.ue_rx, c.f1, 2.0, 0.3, rng);
    for (Eigen::Index n = 0; n < noisy.gains.rows(); ++n) {
        for (Eigen::Index m = 0; m < noisy.gains.cols(); ++m) {
            const double err = 0.3 * replay.normal();
            CHECK(std::abs(noisy.gains(n, m) - clean.gains(n, m) * std::polar(1.0, err)) < 1e-15);
        }
    }
    CHECK(rng.next_u64() == replay.next_u64());

    RandomStream untouched(5), reference(5);
    const auto zero_sigma = build_channel(g.bs_tx, g.ue_rx, c.f1, 2.0, 0.0, untouched);
    CHECK(zero_sigma.gains == clean.gains);
    CHECK(untouched.next_u64() == reference.next_u64());

    const auto again = build_channel(g.bs_tx, g.ue_rx, c.f1, 2.0);
    CHECK(again.gains == clean.gains);
}

TEST_CASE("thermal noise variance") {
    CHECK(noise_variance(295, 100e6, 377) == doctest::Approx(3.07e-10).epsilon(0.01));
    CHECK(noise_variance(295, 0.0, 377) == 0.0);
    CHECK(noise_variance(295, 200e6, 377) == doctest::Approx(2 * noise_variance(295, 100e6, 377)));
}

TEST_CASE("field-level link budget equals the Friis power") {
    const double eta = 377.0;
    const double g = default_peak_gain();
    for (double l : {0.5, 1.0, 3.0, 5.0}) {
        for (double f : {29e9, 31e9}) {
            const double lambda = wavelength(f);
            const double p_t = 1e-4;
            const double e = radiated_field(p_t, g, l, 2.0, eta);
            const double p_field = captured_power(e, g, lambda, eta);
            const auto h = build_channel(single(Vec3::Zero(), Vec3::UnitZ()), single(Vec3(0, 0, l), -Vec3::UnitZ()),
                                         f, 2.0);
            const double p_friis = std::norm(h.gains(0, 0)) * p_t;
            CHECK(p_field == doctest::Approx(p_friis).epsilon(1e-9));
            CHECK(power_density(e, eta) == doctest::Approx(p_t * g / (4 * pi * l * l)).epsilon(1e-12));
        }
    }
}

}
