// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/channel.hpp"

#include "rbisac/config.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"

#include <cmath>
#include <numbers>

namespace rbisac {

double default_peak_gain() { return db_to_linear(4.97); }

double element_gain(double theta_off, double g_max) {
    if (theta_off >= 0.5 * std::numbers::pi) return 0.0;
    return g_max * std::cos(std::abs(theta_off));
}

namespace {

ChannelMatrix build(const PlanarArray& tx, const PlanarArray& rx, double carrier, double alpha,
                    double phase_noise_sigma, RandomStream* rng, double g_max) {
    const double lambda = wavelength(carrier);
    const double k = 2.0 * std::numbers::pi / lambda;
    const double scale = lambda / (4.0 * std::numbers::pi);
    const bool noisy = phase_noise_sigma > 0.0 && rng != nullptr;

    ChannelMatrix h;
    h.carrier = carrier;
    h.gains.resize(rx.size(), tx.size());

    const auto& ptx = tx.positions();
    const auto& prx = rx.positions();
    const Vec3 btx = tx.boresight();
    const Vec3 brx = rx.boresight();

    for (Eigen::Index n = 0; n < prx.cols(); ++n) {
        for (Eigen::Index m = 0; m < ptx.cols(); ++m) {
            const Vec3 d = prx.col(n) - ptx.col(m);
            const double r = d.norm();
            if (!(r > 0.0)) throw GeometryError("coincident tx/rx elements");
            const double g_t = element_gain_from_cos(d.dot(btx) / r, g_max);
            const double g_r = element_gain_from_cos(-d.dot(brx) / r, g_max);
            const double mag = scale * std::sqrt(g_t * g_r * std::pow(r, -alpha));
            double phase = k * r;
            if (noisy) phase += phase_noise_sigma * rng->normal();
            h.gains(n, m) = std::polar(mag, phase);
        }
    }
    return h;
}

} // namespace

ChannelMatrix build_channel(const PlanarArray& tx, const PlanarArray& rx, double carrier, double alpha,
                            double phase_noise_sigma, RandomStream& rng, double g_max) {
    return build(tx, rx, carrier, alpha, phase_noise_sigma, &rng, g_max);
}

ChannelMatrix build_channel(const PlanarArray& tx, const PlanarArray& rx, double carrier, double alpha,
                            double g_max) {
    return build(tx, rx, carrier, alpha, 0.0, nullptr, g_max);
}

double noise_variance(double temperature, double bandwidth, double eta) {
    return 2.0 * eta * PhysicalConstants::boltzmann * temperature * bandwidth;
}

std::vector<double> draw_phase_noise(double sigma, std::size_t count, RandomStream& rng) {
    std::vector<double> out(count, 0.0);
    if (sigma <= 0.0) return out;
    for (auto& v : out) v = sigma * rng.normal();
    return out;
}

double radiated_field(double p_tx, double g_tx, double distance, double alpha, double eta) {
    return std::sqrt(eta / (2.0 * std::numbers::pi) * p_tx * g_tx * std::pow(distance, -alpha));
}

double power_density(double field, double eta) { return field * field / (2.0 * eta); }

double captured_power(double field, double g_rx, double wavelength, double eta) {
    return g_rx * wavelength * wavelength / (8.0 * std::numbers::pi * eta) * field * field;
}

} // namespace rbisac
