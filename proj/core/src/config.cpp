// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <variant>
#include <vector>

namespace rbisac {

ConfigError::ConfigError(std::string field, const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      field_(std::move(field)),
      line_(line) {}

namespace {

using Member = std::variant<double ScenarioConfig::*, int ScenarioConfig::*,
                            std::uint64_t ScenarioConfig::*, bool ScenarioConfig::*>;

struct Key {
    std::string_view name;
    Member member;
};

// Canonical key order for serialization.
const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        {"f1", &ScenarioConfig::f1},
        {"f2", &ScenarioConfig::f2},
        {"d_bs_tx", &ScenarioConfig::d_bs_tx},
        {"d_bs_rx", &ScenarioConfig::d_bs_rx},
        {"d_ue_tx", &ScenarioConfig::d_ue_tx},
        {"d_ue_rx", &ScenarioConfig::d_ue_rx},
        {"m_side", &ScenarioConfig::m_side},
        {"n_side", &ScenarioConfig::n_side},
        {"beta_com", &ScenarioConfig::beta_com},
        {"beta_loc", &ScenarioConfig::beta_loc},
        {"gamma_com", &ScenarioConfig::gamma_com},
        {"gamma_wok", &ScenarioConfig::gamma_wok},
        {"phase_noise_sigma", &ScenarioConfig::phase_noise_sigma},
        {"g_max_dbi", &ScenarioConfig::g_max_dbi},
        {"temperature", &ScenarioConfig::temperature},
        {"eta", &ScenarioConfig::eta},
        {"path_loss_exp", &ScenarioConfig::path_loss_exp},
        {"channel_loss_db", &ScenarioConfig::channel_loss_db},
        {"link_length", &ScenarioConfig::link_length},
        {"elevation_deg", &ScenarioConfig::elevation_deg},
        {"azimuth_deg", &ScenarioConfig::azimuth_deg},
        {"p_bs_init", &ScenarioConfig::p_bs_init},
        {"bandwidth_dl", &ScenarioConfig::bandwidth_dl},
        {"bandwidth_ul", &ScenarioConfig::bandwidth_ul},
        {"amp_small_signal_gain_db", &ScenarioConfig::amp_small_signal_gain_db},
        {"amp_sat_power", &ScenarioConfig::amp_sat_power},
        {"monte_carlo_trials", &ScenarioConfig::monte_carlo_trials},
        {"rng_seed", &ScenarioConfig::rng_seed},
        {"snapshots", &ScenarioConfig::snapshots},
        {"max_iterations", &ScenarioConfig::max_iterations},
        {"convergence_tol", &ScenarioConfig::convergence_tol},
        {"loop_phase_noise", &ScenarioConfig::loop_phase_noise},
        {"doa_subarray_side", &ScenarioConfig::doa_subarray_side},
        {"pll_lo_freq", &ScenarioConfig::pll_lo_freq},
        {"pll_ref_freq", &ScenarioConfig::pll_ref_freq},
        {"pll_d1", &ScenarioConfig::pll_d1},
        {"pll_d2", &ScenarioConfig::pll_d2},
    };
    return table;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view text, std::string_view key, int line) {
    T value{};
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ConfigError(std::string(key),
                          "cannot parse value '" + std::string(text) + "' for key '" +
                              std::string(key) + "'",
                          line);
    }
    return value;
}

void assign(ScenarioConfig& cfg, const Key& key, std::string_view text, int line) {
    std::visit(
        [&](auto member) {
            using T = std::remove_reference_t<decltype(cfg.*member)>;
            if constexpr (std::is_same_v<T, bool>) {
                if (text == "1" || text == "true") {
                    cfg.*member = true;
                } else if (text == "0" || text == "false") {
                    cfg.*member = false;
                } else {
                    throw ConfigError(std::string(key.name),
                                      "expected 0/1/true/false for key '" +
                                          std::string(key.name) + "'",
                                      line);
                }
            } else {
                cfg.*member = parse_number<T>(text, key.name, line);
            }
        },
        key.member);
}

std::string format_value(const ScenarioConfig& cfg, const Member& member) {
    return std::visit(
        [&](auto m) -> std::string {
            using T = std::remove_cvref_t<decltype(cfg.*m)>;
            if constexpr (std::is_same_v<T, bool>) {
                return cfg.*m ? "1" : "0";
            } else {
                char buf[64];
                auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, cfg.*m);
                (void)ec;
                return std::string(buf, ptr);
            }
        },
        member);
}

void require(bool ok, const char* field, const std::string& message) {
    if (!ok) throw ConfigError(field, std::string(field) + ": " + message);
}

bool is_fraction(double v) { return std::isfinite(v) && v >= 0.0 && v < 1.0; }
bool is_positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

void validate(const ScenarioConfig& c) {
    require(is_positive(c.f1), "f1", "must be > 0");
    require(is_positive(c.f2), "f2", "must be > 0");
    require(c.f1 != c.f2, "f2", "uplink and downlink carriers must differ");
    require(is_positive(c.d_bs_tx), "d_bs_tx", "must be > 0");
    require(is_positive(c.d_bs_rx), "d_bs_rx", "must be > 0");
    require(is_positive(c.d_ue_tx), "d_ue_tx", "must be > 0");
    require(is_positive(c.d_ue_rx), "d_ue_rx", "must be > 0");
    require(c.m_side >= 1, "m_side", "must be >= 1");
    require(c.n_side >= 1, "n_side", "must be >= 1");
    require(is_fraction(c.beta_com), "beta_com", "must lie in [0, 1)");
    require(is_fraction(c.beta_loc), "beta_loc", "must lie in [0, 1)");
    require(is_fraction(c.gamma_com), "gamma_com", "must lie in [0, 1)");
    require(is_fraction(c.gamma_wok), "gamma_wok", "must lie in [0, 1)");
    require(c.beta_com + c.beta_loc < 1.0, "beta_loc", "beta_com + beta_loc must be < 1");
    require(c.gamma_com + c.gamma_wok < 1.0, "gamma_wok", "gamma_com + gamma_wok must be < 1");
    require(std::isfinite(c.phase_noise_sigma) && c.phase_noise_sigma >= 0.0, "phase_noise_sigma",
            "must be >= 0");
    require(std::isfinite(c.g_max_dbi), "g_max_dbi", "must be finite");
    require(is_positive(c.temperature), "temperature", "must be > 0");
    require(is_positive(c.eta), "eta", "must be > 0");
    require(is_positive(c.path_loss_exp), "path_loss_exp", "must be > 0");
    require(std::isfinite(c.channel_loss_db), "channel_loss_db", "must be finite");
    require(is_positive(c.link_length), "link_length", "must be > 0");
    require(std::isfinite(c.elevation_deg) && c.elevation_deg >= 0.0 && c.elevation_deg < 90.0,
            "elevation_deg", "must lie in [0, 90)");
    require(std::isfinite(c.azimuth_deg) && c.azimuth_deg >= 0.0 && c.azimuth_deg < 360.0,
            "azimuth_deg", "must lie in [0, 360)");
    require(is_positive(c.p_bs_init), "p_bs_init", "must be > 0");
    require(is_positive(c.bandwidth_dl), "bandwidth_dl", "must be > 0");
    require(is_positive(c.bandwidth_ul), "bandwidth_ul", "must be > 0");
    require(std::isfinite(c.amp_small_signal_gain_db), "amp_small_signal_gain_db",
            "must be finite");
    require(is_positive(c.amp_sat_power), "amp_sat_power", "must be > 0");
    require(c.monte_carlo_trials >= 1, "monte_carlo_trials", "must be >= 1");
    require(c.snapshots >= 1, "snapshots", "must be >= 1");
    require(c.max_iterations >= 1, "max_iterations", "must be >= 1");
    require(is_positive(c.convergence_tol), "convergence_tol", "must be > 0");
    require(c.doa_subarray_side >= 0, "doa_subarray_side", "must be >= 0");
    require(is_positive(c.pll_lo_freq), "pll_lo_freq", "must be > 0");
    require(is_positive(c.pll_ref_freq), "pll_ref_freq", "must be > 0");
    require(c.pll_d1 >= 1, "pll_d1", "must be >= 1");
    require(c.pll_d2 >= 1, "pll_d2", "must be >= 1");
}

ScenarioConfig parse_config(std::istream& in, const std::string& source) {
    ScenarioConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("", source + ": expected 'key = value', got '" + std::string(line) + "'",
                              line_no);
        }
        const auto name = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        const Key* key = nullptr;
        for (const auto& k : keys()) {
            if (k.name == name) {
                key = &k;
                break;
            }
        }
        if (key == nullptr) {
            throw ConfigError(std::string(name), source + ": unknown key '" + std::string(name) + "'",
                              line_no);
        }
        if (value.empty()) {
            throw ConfigError(std::string(name),
                              source + ": missing value for key '" + std::string(name) + "'",
                              line_no);
        }
        assign(cfg, *key, value, line_no);
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot open scenario file " + path.string());
    return parse_config(in, path.string());
}

void write_config(std::ostream& out, const ScenarioConfig& cfg) {
    for (const auto& k : keys()) {
        out << k.name << " = " << format_value(cfg, k.member) << '\n';
    }
}

std::string to_config_string(const ScenarioConfig& cfg) {
    std::ostringstream os;
    write_config(os, cfg);
    return os.str();
}

void save_config(const std::filesystem::path& path, const ScenarioConfig& cfg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("", "cannot write scenario file " + path.string());
    write_config(out, cfg);
}

ScenarioConfig small_profile(ScenarioConfig cfg) {
    cfg.m_side = 8;
    cfg.n_side = 8;
    cfg.amp_small_signal_gain_db = 70.0;
    cfg.monte_carlo_trials = std::min(cfg.monte_carlo_trials, 20);
    cfg.snapshots = std::min(cfg.snapshots, 64);
    cfg.doa_subarray_side = 0;
    return cfg;
}

double wavelength(double frequency_hz) { return PhysicalConstants::speed_of_light / frequency_hz; }

double linear_to_db(double linear) {
    if (linear <= 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(linear);
}

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

} // namespace rbisac
