// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/resonance.hpp"

#include "rbisac/config.hpp"
#include "rbisac/csv.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

namespace rbisac {

DivergenceError::DivergenceError(int iteration, double power)
    : std::runtime_error("loop diverged at iteration " + std::to_string(iteration) + " (BS power " +
                         std::to_string(power) + " W)"),
      iteration_(iteration) {}

LoopSummary summarize(const LoopState& s) {
    return {s.iteration, s.p_bs_tx, s.p_bs_rx, s.p_ue_rx, s.p_ue_tx, s.mu_dl, s.mu_ul, s.gain_w, s.loss_w};
}

LoopChannels build_loop_channels(const LinkGeometry& geom, const ScenarioConfig& cfg) {
    const double g_max = db_to_linear(cfg.g_max_dbi);
    LoopChannels ch{build_channel(geom.bs_tx, geom.ue_rx, cfg.f1, cfg.path_loss_exp, g_max),
                    build_channel(geom.ue_tx, geom.bs_rx, cfg.f2, cfg.path_loss_exp, g_max)};
    ch.downlink.noise_sigma2 = noise_variance(cfg.temperature, cfg.bandwidth_dl, cfg.eta);
    ch.uplink.noise_sigma2 = noise_variance(cfg.temperature, cfg.bandwidth_ul, cfg.eta);
    return ch;
}

LoopState initialize_loop(const LinkGeometry& geom, const ScenarioConfig& cfg) {
    LoopState s;
    const auto m = geom.bs_tx.size();
    s.bs_tx_amplitude = Eigen::VectorXcd::Constant(m, std::sqrt(cfg.p_bs_init / m));
    s.ue_rx_amplitude = Eigen::VectorXcd::Zero(geom.ue_rx.size());
    s.ue_tx_amplitude = Eigen::VectorXcd::Zero(geom.ue_tx.size());
    s.bs_rx_amplitude = Eigen::VectorXcd::Zero(geom.bs_rx.size());
    s.p_bs_tx = s.bs_tx_amplitude.squaredNorm();
    return s;
}

namespace {

double ratio(double num, double den) { return den > 0.0 ? num / den : 0.0; }

// exp(-j arg(x)) scaled to the given power; zero input stays zero.
std::complex<double> conjugate_with_power(std::complex<double> x, double power, double extra_phase) {
    if (x == std::complex<double>(0.0, 0.0) || power <= 0.0) return {0.0, 0.0};
    return std::polar(std::sqrt(power), -std::arg(x) + extra_phase);
}

} // namespace

LoopState downlink_hop(LoopState state, const ChannelMatrix& h_dl) {
    state.ue_rx_amplitude = h_dl.gains * state.bs_tx_amplitude;
    state.p_ue_rx = state.ue_rx_amplitude.squaredNorm();
    state.mu_dl = ratio(state.p_ue_rx, state.p_bs_tx);
    return state;
}

LoopState ue_retroreflect(LoopState state, const ScenarioConfig& cfg, RandomStream& rng) {
    const double keep = 1.0 - cfg.gamma_com - cfg.gamma_wok;
    const bool noisy = cfg.loop_phase_noise && cfg.phase_noise_sigma > 0.0;
    const auto n = state.ue_rx_amplitude.size();
    state.ue_tx_amplitude.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto r = state.ue_rx_amplitude(i);
        const double err = noisy ? cfg.phase_noise_sigma * rng.normal() : 0.0;
        state.ue_tx_amplitude(i) = conjugate_with_power(r, keep * std::norm(r), err);
    }
    state.p_ue_tx = state.ue_tx_amplitude.squaredNorm();
    return state;
}

LoopState uplink_hop(LoopState state, const ChannelMatrix& h_ul) {
    state.bs_rx_amplitude = h_ul.gains * state.ue_tx_amplitude;
    state.p_bs_rx = state.bs_rx_amplitude.squaredNorm();
    state.mu_ul = ratio(state.p_bs_rx, state.p_ue_tx);
    return state;
}

double amplifier_output(double p_in, double small_signal_gain, double p_sat) {
    if (p_in <= 0.0) return 0.0;
    return small_signal_gain * p_in / (1.0 + small_signal_gain * p_in / p_sat);
}

LoopState bs_regenerate(LoopState state, const ScenarioConfig& cfg, RandomStream& rng) {
    const double keep = 1.0 - cfg.beta_com - cfg.beta_loc;
    const double g0 = db_to_linear(cfg.amp_small_signal_gain_db);
    const auto m = state.bs_rx_amplitude.size();
    const double p_sat_el = cfg.amp_sat_power / static_cast<double>(m);
    const bool noisy = cfg.loop_phase_noise && cfg.phase_noise_sigma > 0.0;

    state.bs_tx_amplitude.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto r = state.bs_rx_amplitude(i);
        const double p_out = amplifier_output(keep * std::norm(r), g0, p_sat_el);
        const double err = noisy ? cfg.phase_noise_sigma * rng.normal() : 0.0;
        state.bs_tx_amplitude(i) = conjugate_with_power(r, p_out, err);
    }
    state.p_bs_tx = state.bs_tx_amplitude.squaredNorm();
    ++state.iteration;
    return state;
}

ResonanceResult run_to_resonance(const LinkGeometry& geom, const ScenarioConfig& cfg, RandomStream& rng) {
    return run_to_resonance(geom, cfg, rng, build_loop_channels(geom, cfg));
}

ResonanceResult run_to_resonance(const LinkGeometry& geom, const ScenarioConfig& cfg, RandomStream& rng,
                                 const LoopChannels& channels) {
    ResonanceResult result;
    result.history.reserve(static_cast<std::size_t>(cfg.max_iterations));

    const double divergence_limit = 1e3 * cfg.amp_sat_power;
    LoopState state = initialize_loop(geom, cfg);
    int stable = 0;

    for (int k = 0; k < cfg.max_iterations; ++k) {
        state = downlink_hop(std::move(state), channels.downlink);
        state = ue_retroreflect(std::move(state), cfg, rng);
        state = uplink_hop(std::move(state), channels.uplink);

        LoopState next = bs_regenerate(state, cfg, rng);
        state.loss_w = state.p_bs_tx - state.p_bs_rx;
        state.gain_w = next.p_bs_tx - state.p_bs_rx;

        result.history.push_back(summarize(state));
        result.iterations_run = k + 1;
        if (k == 0) result.first_cycle = state;

        if (!std::isfinite(next.p_bs_tx) || next.p_bs_tx > divergence_limit) {
            throw DivergenceError(k + 1, next.p_bs_tx);
        }

        const double denom = std::max(state.gain_w, std::numeric_limits<double>::min());
        const bool balanced =
            state.gain_w > 0.0 && std::abs(state.gain_w - state.loss_w) / denom <= cfg.convergence_tol;
        stable = balanced ? stable + 1 : 0;

        if (stable >= kConvergenceWindow) {
            result.converged = true;
            result.steady_state = std::move(state);
            return result;
        }
        if (next.p_bs_tx <= 0.0) {
            // Loop died; nothing left to circulate.
            result.steady_state = std::move(state);
            return result;
        }
        state = std::move(next);
    }
    result.steady_state = std::move(state);
    return result;
}

void write_history_csv(std::ostream& out, const std::vector<LoopSummary>& history) {
    CsvWriter csv(out, {"iteration", "p_bs_tx", "p_bs_rx", "p_ue_rx", "p_ue_tx", "mu_dl", "mu_ul", "gain_w",
                        "loss_w", "gain_db", "loss_db"});
    for (const auto& h : history) {
        csv.row(h.iteration, h.p_bs_tx, h.p_bs_rx, h.p_ue_rx, h.p_ue_tx, h.mu_dl, h.mu_ul, h.gain_w, h.loss_w,
                linear_to_db(h.gain_w), linear_to_db(h.loss_w));
    }
}

} // namespace rbisac
