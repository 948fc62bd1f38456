// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include "rbisac/channel.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace rbisac {

struct ScenarioConfig;
struct LinkGeometry;
class RandomStream;

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(int iteration, double power);
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// Per-element complex amplitudes (sqrt(W), carrier phase) of one BS -> UE -> BS
/// cycle, plus the totals derived from them.
struct LoopState {
    int iteration = 0;

    Eigen::VectorXcd bs_tx_amplitude; // M, at f1
    Eigen::VectorXcd ue_rx_amplitude; // N, at f1
    Eigen::VectorXcd ue_tx_amplitude; // N, at f2
    Eigen::VectorXcd bs_rx_amplitude; // M, at f2

    double p_bs_tx = 0.0;
    double p_bs_rx = 0.0;
    double p_ue_tx = 0.0;
    double p_ue_rx = 0.0;

    double mu_dl = 0.0;
    double mu_ul = 0.0;

    // Amplifier gain and propagation loss of this cycle, W:
    //   loss = P_bs_tx(k) - P_bs_rx(k),  gain = P_bs_tx(k+1) - P_bs_rx(k).
    double gain_w = 0.0;
    double loss_w = 0.0;
};

struct LoopSummary {
    int iteration = 0;
    double p_bs_tx = 0.0;
    double p_bs_rx = 0.0;
    double p_ue_rx = 0.0;
    double p_ue_tx = 0.0;
    double mu_dl = 0.0;
    double mu_ul = 0.0;
    double gain_w = 0.0;
    double loss_w = 0.0;
};

LoopSummary summarize(const LoopState& s);

struct ResonanceResult {
    bool converged = false;
    int iterations_run = 0;
    std::vector<LoopSummary> history;
    LoopState first_cycle;  // cycle 0 after the uplink hop
    LoopState steady_state; // last cycle after the uplink hop
};

/// Downlink (BS Tx -> UE Rx, f1) and uplink (UE Tx -> BS Rx, f2) channels.
/// Always noiseless; PLL phase noise enters at regeneration.
struct LoopChannels {
    ChannelMatrix downlink;
    ChannelMatrix uplink;
};

LoopChannels build_loop_channels(const LinkGeometry& geom, const ScenarioConfig& cfg);

/// Uniform-phase start with P_bs_init split evenly over the BS elements.
LoopState initialize_loop(const LinkGeometry& geom, const ScenarioConfig& cfg);

LoopState downlink_hop(LoopState state, const ChannelMatrix& h_dl);

/// Taps gamma_com + gamma_wok off every UE element and re-emits the rest
/// phase-conjugated. Phase noise is drawn per element only when the scenario
/// enables loop phase noise.
LoopState ue_retroreflect(LoopState state, const ScenarioConfig& cfg, RandomStream& rng);

LoopState uplink_hop(LoopState state, const ChannelMatrix& h_ul);

/// Per-element soft-saturating amplifier
///   p_out = G0 p_in / (1 + G0 p_in / p_sat_el),  p_sat_el = amp_sat_power / M,
/// applied to p_in = (1 - beta_com - beta_loc) |recv|^2, then phase conjugation.
/// Advances the iteration counter and resets the per-cycle receive fields'
/// meaning: bs_tx_amplitude now belongs to the next cycle.
LoopState bs_regenerate(LoopState state, const ScenarioConfig& cfg, RandomStream& rng);

/// Saturating amplifier law for a single element.
double amplifier_output(double p_in, double small_signal_gain, double p_sat);

/// Iterates downlink -> retroreflect -> uplink -> regenerate until
/// |gain - loss| / gain <= convergence_tol holds for kConvergenceWindow
/// consecutive cycles, or max_iterations is reached. Throws DivergenceError if
/// the BS power exceeds 1e3 * amp_sat_power.
ResonanceResult run_to_resonance(const LinkGeometry& geom, const ScenarioConfig& cfg, RandomStream& rng);
ResonanceResult run_to_resonance(const LinkGeometry& geom, const ScenarioConfig& cfg, RandomStream& rng,
                                 const LoopChannels& channels);

inline constexpr int kConvergenceWindow = 5;

/// History CSV: iteration,p_bs_tx,p_bs_rx,p_ue_rx,p_ue_tx,mu_dl,mu_ul,gain_w,loss_w,gain_db,loss_db
void write_history_csv(std::ostream& out, const std::vector<LoopSummary>& history);

} // namespace rbisac
