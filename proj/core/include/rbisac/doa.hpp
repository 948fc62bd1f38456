// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbisac {

struct ScenarioConfig;
struct LinkGeometry;
struct LoopState;
class RandomStream;

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform square receive aperture used for estimation.
struct ArrayManifold {
    int side = 16;
    double spacing = 0.0;
    double wavelength = 0.0;

    int size() const { return side * side; }
    Eigen::VectorXcd steering(double theta_deg, double phi_deg) const;
};

/// Estimation aperture for a scenario: the central doa_subarray_side^2 block
/// of the BS Rx array (or all of it), at the uplink wavelength.
ArrayManifold doa_manifold(const LinkGeometry& geom, const ScenarioConfig& cfg);

/// Everything needed to synthesize one trial's snapshots.
struct SnapshotModel {
    ArrayManifold array;
    double theta_deg = 30.0;
    double phi_deg = 30.0;
    double signal_amplitude = 0.0; // per-element, same units as sqrt(noise_sigma2)
    double noise_sigma2 = 0.0;
    double phase_noise_sigma = 0.0; // rad, per element per snapshot
    int snapshots = 128;

    /// Per-element signal-to-noise ratio (linear).
    double snr() const;
};

/// Model from a steady loop state. The per-element signal amplitude is
/// sqrt(2 eta beta_loc P_m), with P_m the mean per-element BS receive power,
/// against uplink noise 2 eta kappa T B_UL.
SnapshotModel snapshot_model(const LinkGeometry& geom, const LoopState& steady, const ScenarioConfig& cfg);

/// Same model with the per-element SNR forced to snr_db.
SnapshotModel with_snr_db(SnapshotModel model, double snr_db);

struct SnapshotBlock {
    Eigen::MatrixXcd samples; // M x K
    double snr = 0.0;         // per-element, linear
};

/// x_k = A a(theta, phi) .* exp(j e_k) s_k + n_k with s_k a unit random-phase
/// symbol, e_k per-element Gaussian phase error and n_k circular Gaussian
/// noise. Draw order per snapshot: symbol, then for each element phase error
/// (when enabled) and noise (when enabled).
SnapshotBlock synthesize_snapshots(const SnapshotModel& model, RandomStream& rng);

/// (1/K) X X^H, exactly Hermitian.
Eigen::MatrixXcd sample_covariance(const SnapshotBlock& block);

struct Subspaces {
    Eigen::VectorXd eigenvalues; // descending
    Eigen::MatrixXcd signal;     // M x sources
    Eigen::MatrixXcd noise;      // M x (M - sources)
};

Subspaces subspace_split(const Eigen::MatrixXcd& covariance, int source_count = 1);

/// 1 / ||U_n^H a||^2 through the explicit noise basis.
double music_value_explicit(const Eigen::MatrixXcd& noise_basis, const Eigen::VectorXcd& a);

/// 1 / (||a||^2 - ||U_s^H a||^2), identical to the explicit form for
/// complementary orthonormal bases.
double music_value(const Eigen::MatrixXcd& signal_basis, const Eigen::VectorXcd& a);

struct MusicGrid {
    double theta_min = 0.0;
    double theta_max = 90.0; // exclusive
    double phi_min = 0.0;
    double phi_max = 360.0; // exclusive
    double coarse_step = 1.0;
    double fine_step = 0.05;
    double refine_halfwidth = 1.0;
    bool polish = true;
};

struct MusicSpectrum {
    std::vector<double> theta_grid; // deg
    std::vector<double> phi_grid;   // deg
    Eigen::MatrixXd values;         // theta x phi, coarse grid
    double peak_theta = 0.0;        // deg, refined
    double peak_phi = 0.0;          // deg, refined
    double peak_value = 0.0;
    bool azimuth_degenerate = false;
};

MusicSpectrum music_spectrum(const Subspaces& subspaces, const ArrayManifold& array, const MusicGrid& grid = {});

struct DoaEstimate {
    double theta_deg = 0.0;
    double phi_deg = 0.0;
    bool azimuth_degenerate = false;
};

/// One complete trial: snapshots, covariance, split, spectrum peak.
DoaEstimate estimate_doa(const SnapshotModel& model, RandomStream& rng, const MusicGrid& grid = {});

struct RmseReport {
    double rmse_total = 0.0;
    double rmse_theta = 0.0;
    double rmse_phi = 0.0;
    int trials = 0;
    int invalid_trials = 0;
    double truth_theta = 0.0; // deg
    double truth_phi = 0.0;   // deg
    double snr_db = 0.0;      // per-element
};

/// Azimuth difference wrapped to (-180, 180].
double wrap_degrees(double delta);

/// Monte Carlo RMSE over `trials` independent trials; trial i uses
/// rng.derive({i}). Trials that throw are counted as invalid.
RmseReport estimate_rmse(const SnapshotModel& model, int trials, const RandomStream& rng,
                         const MusicGrid& grid = {}, int workers = 0);

/// End-to-end RMSE for a scenario. The loop runs once and its steady state is
/// shared by every trial unless loop phase noise is enabled, in which case
/// each trial runs its own loop. Optionally forces the per-element SNR.
RmseReport estimate_rmse(const LinkGeometry& geom, const ScenarioConfig& cfg, int trials, const RandomStream& rng,
                         std::optional<double> snr_db = std::nullopt, const MusicGrid& grid = {},
                         int workers = 0);

/// CSV: theta_deg,phi_deg,p_music over the coarse grid, phi fastest.
void write_spectrum_csv(std::ostream& out, const MusicSpectrum& spectrum);

struct RmseRow {
    double axis_value = 0.0;
    RmseReport report;
};

/// CSV: <axis_name>,rmse_theta,rmse_phi,rmse_total,invalid_trials
void write_rmse_csv(std::ostream& out, const std::string& axis_name, const std::vector<RmseRow>& rows);

} // namespace rbisac
