// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <iosfwd>
#include <vector>

namespace rbisac {

struct ScenarioConfig;
struct LoopState;
struct LoopSummary;

/// gamma_com * p_ue_rx / sigma2.
double snr_downlink(double p_ue_rx, double gamma_com, double sigma2);

/// beta_com * p_bs_rx / sigma2.
double snr_uplink(double p_bs_rx, double beta_com, double sigma2);

/// Shannon rate B log2(1 + snr), bit/s.
double rate(double snr, double bandwidth);

/// log2(1 + 10^((snr_db - loss_db) / 10)), bit/s/Hz.
double spectral_efficiency(double snr_db, double loss_db);

struct CommReport {
    double link_length = 0.0;
    double elevation = 0.0; // rad
    int iteration = 0;

    double snr_dl = 0.0;
    double snr_ul = 0.0;
    double snr_dl_db = 0.0;
    double snr_ul_db = 0.0;

    double rate_dl = 0.0;
    double rate_ul = 0.0;
    double se_dl = 0.0;
    double se_ul = 0.0;

    double mu_dl = 0.0;
    double mu_ul = 0.0;
    bool converged = false;
};

/// Metrics for one loop cycle (after the uplink hop).
CommReport comm_report(const LoopSummary& cycle, const ScenarioConfig& cfg, bool converged = false);
CommReport comm_report(const LoopState& state, const ScenarioConfig& cfg, bool converged = false);

/// Columns: l,theta_deg,iteration,snr_dl_db,snr_ul_db,se_dl,se_ul,mu_dl,mu_ul,se_dl_rate,se_ul_rate,converged
/// where se_*_rate = rate / bandwidth.
void write_comm_csv(std::ostream& out, const std::vector<CommReport>& rows, const ScenarioConfig& cfg);

} // namespace rbisac
