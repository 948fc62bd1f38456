// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/comm_metrics.hpp"

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/csv.hpp"
#include "rbisac/resonance.hpp"

#include <cmath>
#include <ostream>

namespace rbisac {

double snr_downlink(double p_ue_rx, double gamma_com, double sigma2) { return gamma_com * p_ue_rx / sigma2; }

double snr_uplink(double p_bs_rx, double beta_com, double sigma2) { return beta_com * p_bs_rx / sigma2; }

double rate(double snr, double bandwidth) { return bandwidth * std::log2(1.0 + snr); }

double spectral_efficiency(double snr_db, double loss_db) {
    return std::log2(1.0 + std::pow(10.0, 0.1 * (snr_db - loss_db)));
}

CommReport comm_report(const LoopSummary& state, const ScenarioConfig& cfg, bool converged) {
    CommReport r;
    r.link_length = cfg.link_length;
    r.elevation = deg_to_rad(cfg.elevation_deg);
    r.iteration = state.iteration;
    r.converged = converged;

    r.snr_dl = snr_downlink(state.p_ue_rx, cfg.gamma_com, noise_variance(cfg.temperature, cfg.bandwidth_dl, cfg.eta));
    r.snr_ul = snr_uplink(state.p_bs_rx, cfg.beta_com, noise_variance(cfg.temperature, cfg.bandwidth_ul, cfg.eta));
    r.snr_dl_db = linear_to_db(r.snr_dl);
    r.snr_ul_db = linear_to_db(r.snr_ul);

    r.rate_dl = rate(r.snr_dl, cfg.bandwidth_dl);
    r.rate_ul = rate(r.snr_ul, cfg.bandwidth_ul);
    r.se_dl = r.snr_dl > 0.0 ? spectral_efficiency(r.snr_dl_db, cfg.channel_loss_db) : 0.0;
    r.se_ul = r.snr_ul > 0.0 ? spectral_efficiency(r.snr_ul_db, cfg.channel_loss_db) : 0.0;

    r.mu_dl = state.mu_dl;
    r.mu_ul = state.mu_ul;
    return r;
}

CommReport comm_report(const LoopState& state, const ScenarioConfig& cfg, bool converged) {
    return comm_report(summarize(state), cfg, converged);
}

void write_comm_csv(std::ostream& out, const std::vector<CommReport>& rows, const ScenarioConfig& cfg) {
    CsvWriter csv(out, {"l", "theta_deg", "iteration", "snr_dl_db", "snr_ul_db", "se_dl", "se_ul", "mu_dl", "mu_ul",
                        "se_dl_rate", "se_ul_rate", "converged"});
    for (const auto& r : rows) {
        csv.row(r.link_length, rad_to_deg(r.elevation), r.iteration, r.snr_dl_db, r.snr_ul_db, r.se_dl, r.se_ul,
                r.mu_dl, r.mu_ul, r.rate_dl / cfg.bandwidth_dl, r.rate_ul / cfg.bandwidth_ul, r.converged);
    }
}

} // namespace rbisac
