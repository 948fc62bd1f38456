// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/doa.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"
#include "rbisac/resonance.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace rbisac;

namespace {

ArrayManifold manifold(int side) {
    const double lambda = wavelength(31e9);
    return {side, lambda / 2, lambda};
}

SnapshotModel clean_model(int side, double theta, double phi, int k = 16) {
    SnapshotModel m;
    m.array = manifold(side);
    m.theta_deg = theta;
    m.phi_deg = phi;
    m.signal_amplitude = 1e-3;
    m.noise_sigma2 = 0.0;
    m.phase_noise_sigma = 0.0;
    m.snapshots = k;
    return m;
}

} // namespace

TEST_SUITE("doa") {

TEST_CASE("noiseless single snapshot is the scaled steering vector") {
    auto m = clean_model(4, 30, 30, 1);
    RandomStream rng(12), replay(12);
    const auto block = synthesize_snapshots(m, rng);
    const std::complex<double> s0 = replay.unit_phasor();
    const Eigen::VectorXcd expected = m.signal_amplitude * m.array.steering(30, 30) * s0;
    CHECK((block.samples.col(0) - expected).norm() < 1e-18);
}

TEST_CASE("empirical per-element SNR matches the model") {
    SnapshotModel m = clean_model(4, 20, 60, 10000);
    m.noise_sigma2 = 1e-6;
    m = with_snr_db(m, 0.0);
    CHECK(m.snr() == doctest::Approx(1.0));
    RandomStream rng(5);
    const auto block = synthesize_snapshots(m, rng);
    const double total = block.samples.cwiseAbs2().mean();
    const double snr = (total - m.noise_sigma2) / m.noise_sigma2;
    CHECK(snr == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("zero localization tap leaves pure noise") {
    ScenarioConfig c = small_profile(ScenarioConfig{});
    c.beta_loc = 0.0;
    const auto g = build_link_geometry(c);
    RandomStream loop_rng(1);
    const auto r = run_to_resonance(g, c, loop_rng);
    const auto m = snapshot_model(g, r.steady_state, c);
    CHECK(m.signal_amplitude == 0.0);
    RandomStream rng(2);
    const auto block = synthesize_snapshots(m, rng);
    CHECK(block.samples.cwiseAbs2().mean() == doctest::Approx(m.noise_sigma2).epsilon(0.1));
}

TEST_CASE("snapshot model uses the central block at the uplink wavelength") {
    ScenarioConfig c;
    const auto g = build_link_geometry(c);
    const auto arr = doa_manifold(g, c);
    CHECK(arr.side == 16);
    CHECK(arr.spacing == g.bs_rx.spacing());
    CHECK(arr.wavelength == wavelength(c.f2));
    c.doa_subarray_side = 0;
    CHECK(doa_manifold(g, c).side == 40);

    LoopState s;
    s.bs_rx_amplitude = Eigen::VectorXcd::Zero(1600);
    // only the centre block carries power
    for (int ix = 12; ix < 28; ++ix) {
        for (int iy = 12; iy < 28; ++iy) s.bs_rx_amplitude(ix * 40 + iy) = std::sqrt(2e-12);
    }
    c.doa_subarray_side = 16;
    const auto m = snapshot_model(g, s, c);
    CHECK(m.signal_amplitude * m.signal_amplitude == doctest::Approx(2 * c.eta * c.beta_loc * 2e-12));
    CHECK(m.noise_sigma2 == doctest::Approx(noise_variance(c.temperature, c.bandwidth_ul, c.eta)));
    CHECK(m.theta_deg == c.elevation_deg);
}

TEST_CASE("sample covariance") {
    auto m = clean_model(4, 30, 30, 8);
    RandomStream rng(3);
    const auto block = synthesize_snapshots(m, rng);
    const auto r = sample_covariance(block);
    CHECK(r == r.adjoint());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r);
    const auto ev = es.eigenvalues();
    CHECK(ev(ev.size() - 1) == doctest::Approx(16 * 1e-6).epsilon(1e-9));
    CHECK(std::abs(ev(ev.size() - 2)) < 1e-12 * ev(ev.size() - 1));

    SnapshotModel noise = m;
    noise.signal_amplitude = 0.0;
    noise.noise_sigma2 = 2.0;
    noise.snapshots = 20000;
    RandomStream nrng(4);
    const auto rn = sample_covariance(synthesize_snapshots(noise, nrng));
    const Eigen::MatrixXcd dev = rn - 2.0 * Eigen::MatrixXcd::Identity(16, 16);
    CHECK(dev.cwiseAbs().maxCoeff() < 6 * 2.0 / std::sqrt(20000.0));
}

TEST_CASE("subspace split") {
    auto m = clean_model(4, 40, 75, 4);
    RandomStream rng(6);
    const auto r = sample_covariance(synthesize_snapshots(m, rng));
    const auto sub = subspace_split(r, 1);
    const Eigen::VectorXcd a = m.array.steering(40, 75);
    REQUIRE(sub.signal.cols() == 1);
    REQUIRE(sub.noise.cols() == 15);
    CHECK(std::abs(sub.signal.col(0).dot(a)) == doctest::Approx(a.norm()).epsilon(1e-10));
    CHECK((sub.noise.adjoint() * a).norm() < 1e-10 * a.norm());
    for (Eigen::Index i = 1; i < sub.eigenvalues.size(); ++i) CHECK(sub.eigenvalues(i) <= sub.eigenvalues(i - 1));
    CHECK(sub.eigenvalues.sum() == doctest::Approx(r.trace().real()).epsilon(1e-9));

    const auto id = subspace_split(Eigen::MatrixXcd::Identity(9, 9), 1);
    CHECK((id.signal.adjoint() * id.noise).norm() < 1e-12);
    CHECK((id.noise.adjoint() * id.noise - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-12);

    CHECK_THROWS_AS(subspace_split(Eigen::MatrixXcd::Identity(3, 4), 1), EigenSolverError);
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(3, 3);
    bad(1, 1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(subspace_split(bad, 1), EigenSolverError);
}

TEST_CASE("complement form equals the explicit noise projection") {
    SnapshotModel m = clean_model(5, 25, 140, 64);
    m.noise_sigma2 = 1e-7;
    RandomStream rng(9);
    const auto sub = subspace_split(sample_covariance(synthesize_snapshots(m, rng)), 1);
    for (double t : {0.0, 10.0, 25.0, 61.0}) {
        for (double p : {0.0, 140.0, 300.0}) {
            const auto a = m.array.steering(t, p);
            CHECK(music_value(sub.signal, a) == doctest::Approx(music_value_explicit(sub.noise, a)).epsilon(1e-6));
        }
    }
}

TEST_CASE("noiseless spectrum peaks at the truth") {
    auto m = clean_model(8, 30, 30);
    RandomStream rng(1);
    const auto sub = subspace_split(sample_covariance(synthesize_snapshots(m, rng)), 1);
    const auto spec = music_spectrum(sub, m.array);
    CHECK(std::abs(spec.peak_theta - 30.0) <= 0.05);
    CHECK(std::abs(wrap_degrees(spec.peak_phi - 30.0)) <= 0.05);
    CHECK_FALSE(spec.azimuth_degenerate);
    CHECK(spec.theta_grid.size() == 90);
    CHECK(spec.phi_grid.size() == 360);
    CHECK(spec.values.minCoeff() >= 0.0);
    CHECK(spec.peak_value >= spec.values.maxCoeff());
}

TEST_CASE("boresight truth flags the azimuth as degenerate") {
    auto m = clean_model(6, 0, 0);
    RandomStream rng(1);
    const auto est = estimate_doa(m, rng);
    CHECK(est.theta_deg < 0.05);
    CHECK(est.azimuth_degenerate);
}

TEST_CASE("scaling the snapshots leaves the peak in place") {
    SnapshotModel m = clean_model(6, 35, 200, 32);
    m.noise_sigma2 = 1e-7;
    RandomStream rng(21);
    auto block = synthesize_snapshots(m, rng);
    const auto p1 = music_spectrum(subspace_split(sample_covariance(block), 1), m.array);
    block.samples *= std::complex<double>(-0.2, 7.0);
    const auto p2 = music_spectrum(subspace_split(sample_covariance(block), 1), m.array);
    CHECK(std::abs(p1.peak_theta - p2.peak_theta) < 1e-5);
    CHECK(std::abs(p1.peak_phi - p2.peak_phi) < 1e-5);
}

TEST_CASE("noise subspace is orthogonal to the truth at high SNR") {
    SnapshotModel m = clean_model(8, 30, 30, 64);
    m.noise_sigma2 = 1e-6;
    m = with_snr_db(m, 60.0);
    RandomStream rng(17);
    const auto sub = subspace_split(sample_covariance(synthesize_snapshots(m, rng)), 1);
    const Eigen::VectorXcd a = m.array.steering(30, 30);
    CHECK((sub.noise.adjoint() * a).squaredNorm() / a.squaredNorm() < 1e-6);
}

TEST_CASE("Monte Carlo RMSE") {
    auto m = clean_model(6, 30, 30);
    const auto exact = estimate_rmse(m, 5, RandomStream(1), {}, 1);
    CHECK(exact.rmse_total < 0.05);
    CHECK(exact.invalid_trials == 0);
    CHECK(exact.trials == 5);

    SnapshotModel noisy = m;
    noisy.noise_sigma2 = 1e-6;
    noisy = with_snr_db(noisy, -5.0);
    noisy.phase_noise_sigma = 0.3;
    const auto a = estimate_rmse(noisy, 12, RandomStream(8), {}, 1);
    const auto b = estimate_rmse(noisy, 12, RandomStream(8), {}, 3);
    CHECK(a.rmse_total == b.rmse_total);
    CHECK(a.rmse_total * a.rmse_total ==
          doctest::Approx(a.rmse_theta * a.rmse_theta + a.rmse_phi * a.rmse_phi).epsilon(1e-12));
    CHECK(a.snr_db == doctest::Approx(-5.0));

    SnapshotModel broken = m;
    broken.signal_amplitude = std::numeric_limits<double>::quiet_NaN();
    const auto bad = estimate_rmse(broken, 3, RandomStream(1), {}, 1);
    CHECK(bad.invalid_trials == 3);
    CHECK(std::isnan(bad.rmse_total));
}

TEST_CASE("azimuth differences wrap to a half-open interval") {
    CHECK(wrap_degrees(359.0) == doctest::Approx(-1.0));
    CHECK(wrap_degrees(-359.0) == doctest::Approx(1.0));
    CHECK(wrap_degrees(180.0) == doctest::Approx(180.0));
    CHECK(wrap_degrees(-180.0) == doctest::Approx(180.0));
    CHECK(wrap_degrees(0.25) == doctest::Approx(0.25));
}

TEST_CASE("spectrum and RMSE CSV headers") {
    MusicSpectrum s;
    s.theta_grid = {0, 1};
    s.phi_grid = {0};
    s.values = Eigen::MatrixXd::Constant(2, 1, 2.0);
    std::ostringstream out;
    write_spectrum_csv(out, s);
    CHECK(out.str() == "theta_deg,phi_deg,p_music\n0,0,2\n1,0,2\n");

    std::ostringstream rm;
    RmseReport r;
    r.rmse_theta = 0.5;
    r.rmse_phi = 1.0;
    r.rmse_total = std::sqrt(1.25);
    write_rmse_csv(rm, "snr_db", {{-5.0, r}});
    CHECK(rm.str().rfind("snr_db,rmse_theta,rmse_phi,rmse_total,invalid_trials\n-5,0.5,1,", 0) == 0);
}

}
