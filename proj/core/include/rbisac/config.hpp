// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace rbisac {

struct PhysicalConstants {
    static constexpr double boltzmann = 1.38e-23;        // J/K
    static constexpr double speed_of_light = 299792458.0; // m/s
};

/// Thrown for unparsable scenario files and for invariant violations.
/// `field()` names the offending key; `line()` is 0 when not file-related.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& message, int line = 0);

    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

/// Full experiment parameterization. All quantities SI (Hz, m, W, K, rad)
/// except members suffixed _db, _dbi or _deg.
///
/// The default element spacings (0.48 cm Tx / 0.52 cm Rx at the BS) swap the
/// Tx/Rx roles with respect to the retrodirective spacing rule; build_link_geometry() detects this and uses
/// half-wavelength spacings instead.
struct ScenarioConfig {
    double f1 = 29e9; // downlink carrier
    double f2 = 31e9; // uplink carrier

    double d_bs_tx = 0.0048;
    double d_bs_rx = 0.0052;
    double d_ue_tx = 0.0052;
    double d_ue_rx = 0.0048;

    int m_side = 40;
    int n_side = 40;

    double beta_com = 0.1;
    double beta_loc = 0.1;
    double gamma_com = 0.1;
    double gamma_wok = 0.2;

    double phase_noise_sigma = 0.3; // rad
    double g_max_dbi = 4.97;
    double temperature = 295.0;
    double eta = 377.0;
    double path_loss_exp = 2.0;
    double channel_loss_db = 3.0;

    double link_length = 3.0;
    double elevation_deg = 30.0;
    double azimuth_deg = 30.0;

    double p_bs_init = 1e-4;
    double bandwidth_dl = 100e6;
    double bandwidth_ul = 100e6;

    double amp_small_signal_gain_db = 15.0;
    double amp_sat_power = 1e-8;

    int monte_carlo_trials = 100;
    std::uint64_t rng_seed = 20250611;
    int snapshots = 128;

    int max_iterations = 200;
    double convergence_tol = 1e-3;

    // Extensions to the base parameter set.
    bool loop_phase_noise = false;
    int doa_subarray_side = 16; // 0 selects the full BS Rx array
    double pll_lo_freq = 28e9;
    double pll_ref_freq = 1e9;
    int pll_d1 = 4;
    int pll_d2 = 1;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Throws ConfigError naming the first violated field.
void validate(const ScenarioConfig& cfg);

/// Parses the flat `key = value` format (one key per line, `#` comments).
/// Missing keys keep their defaults. `source` labels diagnostics.
ScenarioConfig parse_config(std::istream& in, const std::string& source = "<stream>");
ScenarioConfig load_config(const std::filesystem::path& path);

/// Writes every key in canonical order with round-trip exact values.
void write_config(std::ostream& out, const ScenarioConfig& cfg);
std::string to_config_string(const ScenarioConfig& cfg);
void save_config(const std::filesystem::path& path, const ScenarioConfig& cfg);

/// Reduced profile for CI: 8x8 arrays, fewer trials and snapshots, and enough
/// amplifier gain for the small apertures to resonate.
ScenarioConfig small_profile(ScenarioConfig cfg);

double wavelength(double frequency_hz);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

} // namespace rbisac
