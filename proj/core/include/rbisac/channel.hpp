// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <Eigen/Dense>

#include <vector>

namespace rbisac {

class PlanarArray;
class RandomStream;

/// Peak element gain, 4.97 dBi as linear (~pi).
double default_peak_gain();

/// Cosine element pattern g_max * cos(theta_off); zero at and beyond 90 deg.
double element_gain(double theta_off, double g_max = default_peak_gain());

/// Same pattern from the cosine of the off-boresight angle (clamped at 0).
inline double element_gain_from_cos(double cos_off, double g_max) {
    return cos_off > 0.0 ? g_max * cos_off : 0.0;
}

/// Complex amplitude gains between two arrays at one carrier, rx x tx.
/// Entry (n, m) is (lambda/4pi) sqrt(G_rx G_tx l^-alpha) exp{j(k l + phi_err)}.
struct ChannelMatrix {
    Eigen::MatrixXcd gains;
    double carrier = 0.0;
    double noise_sigma2 = 0.0;
};

/// Free-space channel from every element of `tx` to every element of `rx`.
/// With phase_noise_sigma > 0 each entry gets one independent Gaussian phase
/// draw from `rng`, consumed in row-major order; with 0 the stream is untouched.
ChannelMatrix build_channel(const PlanarArray& tx, const PlanarArray& rx, double carrier, double alpha,
                            double phase_noise_sigma, RandomStream& rng,
                            double g_max = default_peak_gain());

/// Noiseless overload.
ChannelMatrix build_channel(const PlanarArray& tx, const PlanarArray& rx, double carrier, double alpha,
                            double g_max = default_peak_gain());

/// AWGN variance 2 eta kappa T B.
double noise_variance(double temperature, double bandwidth, double eta);

/// n i.i.d. zero-mean Gaussian phases with standard deviation sigma.
std::vector<double> draw_phase_noise(double sigma, std::size_t count, RandomStream& rng);

// Field-level link budget. These follow the Poynting relation W = |E|^2 / 2 eta
// and reproduce the Friis power |h|^2 P_t.

/// |E| at distance l from an element radiating p_tx with gain g_tx.
double radiated_field(double p_tx, double g_tx, double distance, double alpha, double eta);

/// Time-averaged power density |E|^2 / (2 eta).
double power_density(double field, double eta);

/// Power captured by an element of gain g_rx: g_rx lambda^2 / (8 pi eta) |E|^2.
double captured_power(double field, double g_rx, double wavelength, double eta);

} // namespace rbisac
