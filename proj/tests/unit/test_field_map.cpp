// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/field_map.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"
#include "rbisac/resonance.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace rbisac;

namespace {

constexpr double pi = std::numbers::pi;

double probe(const PlanarArray& arr, const Eigen::VectorXcd& amp, double carrier, const Eigen::Vector3d& p) {
    MapSpec s;
    s.plane = MapPlane::xoz;
    s.offset = p.y();
    s.nu = s.nv = 1;
    s.u_min = s.u_max = p.x();
    s.v_min = s.v_max = p.z();
    return compute_field_map(arr, amp, carrier, s, default_peak_gain(), 1).peak_raw;
}

} // namespace

TEST_SUITE("field_map") {

TEST_CASE("single element falls off as inverse square along boresight") {
    const PlanarArray one(1, 0.005, Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX());
    const Eigen::VectorXcd a = Eigen::VectorXcd::Constant(1, 1.0);
    const double i1 = probe(one, a, 29e9, {0, 0, 0.5});
    for (double z : {1.0, 2.0, 3.7}) {
        CHECK(probe(one, a, 29e9, {0, 0, z}) / i1 == doctest::Approx(0.25 / (z * z)).epsilon(1e-12));
    }
}

TEST_CASE("in-phase pair follows the two-element array factor") {
    const double lambda = wavelength(29e9);
    // 2x2 at half-wavelength: the two rows are symmetric about the xoz plane,
    // so the map sees the x-axis array factor.
    const PlanarArray quad(2, lambda / 2, Vec3::Zero(), Vec3::UnitZ(), Vec3::UnitX());
    const Eigen::VectorXcd a = Eigen::VectorXcd::Ones(4);
    const double r = 400.0;
    const double broadside = probe(quad, a, 29e9, {0, 0, r});
    for (double deg : {10.0, 30.0, 60.0, 80.0, 89.0}) {
        const double psi = deg * pi / 180.0;
        const double af = std::pow(std::cos(pi / 2 * std::sin(psi)), 2);
        const double expected = af * std::cos(psi);
        const double got = probe(quad, a, 29e9, {r * std::sin(psi), 0, r * std::cos(psi)}) / broadside;
        CHECK(got == doctest::Approx(expected).epsilon(1e-3));
    }
    // toward the array axis the pattern vanishes
    CHECK(probe(quad, a, 29e9, {r * std::sin(1.5703), 0, r * std::cos(1.5703)}) / broadside < 1e-6);
}

TEST_CASE("normalization, linearity and scale invariance") {
    ScenarioConfig c = small_profile(ScenarioConfig{});
    const auto g = build_link_geometry(c);
    RandomStream rng(4);
    Eigen::VectorXcd amp(g.bs_tx.size());
    for (Eigen::Index i = 0; i < amp.size(); ++i) amp(i) = rng.complex_normal(1e-6);
    MapSpec s = default_map_spec(g);
    s.nu = s.nv = 40;
    const auto m1 = compute_field_map(g.bs_tx, amp, c.f1, s, default_peak_gain());
    const std::complex<double> k(3.0, -4.0);
    const Eigen::VectorXcd scaled = k * amp;
    const auto m2 = compute_field_map(g.bs_tx, scaled, c.f1, s, default_peak_gain());
    CHECK(m1.intensity.maxCoeff() == doctest::Approx(1.0));
    CHECK(m1.intensity.minCoeff() >= 0.0);
    CHECK(m2.peak_raw == doctest::Approx(25.0 * m1.peak_raw).epsilon(1e-12));
    CHECK((m1.intensity - m2.intensity).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(m1.intensity.rows() == 40);
    CHECK(m1.intensity.cols() == 40);

    const Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(amp.size());
    const auto mz = compute_field_map(g.bs_tx, zero, c.f1, s, default_peak_gain());
    CHECK(mz.intensity.maxCoeff() == 0.0);

    CHECK_THROWS(compute_field_map(g.bs_tx, Eigen::VectorXcd::Ones(3), c.f1, s, default_peak_gain()));
}

TEST_CASE("worker count does not change the map") {
    ScenarioConfig c = small_profile(ScenarioConfig{});
    const auto g = build_link_geometry(c);
    const auto s0 = initialize_loop(g, c);
    MapSpec s = default_map_spec(g);
    s.nu = s.nv = 30;
    const auto a = compute_field_map(g.bs_tx, s0.bs_tx_amplitude, c.f1, s, default_peak_gain(), 1);
    const auto b = compute_field_map(g.bs_tx, s0.bs_tx_amplitude, c.f1, s, default_peak_gain(), 3);
    CHECK(a.intensity == b.intensity);
}

TEST_CASE("grid points on an element are skipped and marked") {
    const PlanarArray one(1, 0.005, Vec3(0.5, 0, 1.0), Vec3::UnitZ(), Vec3::UnitX());
    MapSpec s;
    s.nu = 3;
    s.nv = 3;
    s.u_min = 0.0;
    s.u_max = 1.0;
    s.v_min = 0.0;
    s.v_max = 2.0;
    const auto m = compute_field_map(one, Eigen::VectorXcd::Ones(1), 29e9, s, default_peak_gain());
    CHECK(m.skipped(1, 1));
    CHECK(m.intensity(1, 1) == 1.0);
    CHECK(m.skipped.count() == 1);
    const auto c = centroid(m);
    CHECK(std::isfinite(c.u));
}

TEST_CASE("uniform-phase start on a small aperture peaks next to the array") {
    ScenarioConfig c = small_profile(ScenarioConfig{});
    c.azimuth_deg = 0.0;
    const auto g = build_link_geometry(c);
    const auto s0 = initialize_loop(g, c);
    MapSpec s = default_map_spec(g);
    s.nu = s.nv = 100;
    const auto m = compute_field_map(g.bs_tx, s0.bs_tx_amplitude, c.f1, s, default_peak_gain());
    const auto pk = peak_location(m);
    CHECK(std::hypot(std::max(0.0, std::abs(pk.u) - 0.02), pk.v) < 0.3);
}

TEST_CASE("steady-state downlink ridge follows the link") {
    ScenarioConfig c;
    c.azimuth_deg = 0.0;
    const auto g = build_link_geometry(c);
    RandomStream rng(c.rng_seed);
    const auto r = run_to_resonance(g, c, rng);
    REQUIRE(r.converged);
    MapSpec s = default_map_spec(g);
    s.nu = s.nv = 100;
    const auto m = compute_field_map(g.bs_tx, r.steady_state.bs_tx_amplitude, c.f1, s, default_peak_gain());
    const PlanePoint ue = project(s, g.ue_rx.center());
    const double cell = std::max(s.du(), s.dv());
    CHECK(distance_to_segment(peak_location(m), {0, 0}, ue) <= cell);
    CHECK(distance_to_segment(centroid(m), {0, 0}, ue) <= 5 * cell);
}

TEST_CASE("plane helpers") {
    CHECK(distance_to_segment({1, 1}, {0, 0}, {2, 0}) == doctest::Approx(1.0));
    CHECK(distance_to_segment({-3, 4}, {0, 0}, {2, 0}) == doctest::Approx(5.0));
    CHECK(distance_to_segment({5, 0}, {0, 0}, {2, 0}) == doctest::Approx(3.0));

    MapSpec s;
    s.plane = MapPlane::yoz;
    s.offset = 0.25;
    const auto p = project(s, {0.1, 0.2, 0.3});
    CHECK(p.u == 0.2);
    CHECK(p.v == 0.3);
    CHECK(to_string(parse_map_plane("xoy")) == "xoy");
    CHECK_THROWS(parse_map_plane("abc"));

    FieldMap m;
    m.spec.nu = m.spec.nv = 2;
    m.spec.u_min = 0;
    m.spec.u_max = 1;
    m.spec.v_min = 0;
    m.spec.v_max = 1;
    m.intensity = Eigen::MatrixXd::Zero(2, 2);
    m.skipped = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(2, 2, false);
    m.intensity(1, 1) = 1.0;
    m.intensity(0, 1) = 1.0;
    const auto c = centroid(m);
    CHECK(c.u == doctest::Approx(1.0));
    CHECK(c.v == doctest::Approx(0.5));
}

TEST_CASE("CSV and matrix exports") {
    FieldMap m;
    m.spec.nu = 3;
    m.spec.nv = 2;
    m.spec.u_min = -1;
    m.spec.u_max = 1;
    m.spec.v_min = 0;
    m.spec.v_max = 1;
    m.carrier = 29e9;
    m.label = "fig6a";
    m.intensity = Eigen::MatrixXd::Constant(2, 3, 0.5);
    m.skipped = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(2, 3, false);

    std::ostringstream csv;
    write_field_csv(csv, m);
    CHECK(csv.str() == "x,z,intensity\n-1,0,0.5\n-1,1,0.5\n0,0,0.5\n0,1,0.5\n1,0,0.5\n1,1,0.5\n");

    std::ostringstream txt;
    write_field_matrix(txt, m);
    std::istringstream in(txt.str());
    std::string header, row;
    std::getline(in, header);
    CHECK(header.rfind("# plane=xoz", 0) == 0);
    CHECK(header.find("label=fig6a") != std::string::npos);
    std::getline(in, row);
    CHECK(row == "0.5 0.5 0.5");
}

}
