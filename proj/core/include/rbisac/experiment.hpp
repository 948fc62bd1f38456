// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include "rbisac/config.hpp"
#include "rbisac/field_map.hpp"
#include "rbisac/frequency_plan.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rbisac {

enum class ExitCode : int {
    ok = 0,
    failure = 1,
    no_resonance = 2,
    divergence = 3,
    config_error = 4,
};

const char* version();

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

struct OutputRecord {
    std::string path; // relative to the output directory
    std::uint64_t bytes = 0;
    std::string sha256;
};

struct ExperimentManifest {
    std::string command;
    std::vector<std::string> command_line;
    std::string config_text;
    std::uint64_t seed = 0;
    std::string version;
    std::vector<OutputRecord> outputs;
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> decisions;
    PlanCheck frequency_plan;
    double runtime_seconds = 0.0;
    int exit_code = 0;
};

std::string manifest_json(const ExperimentManifest& manifest);

struct RunOptions {
    std::filesystem::path out_dir = "out";
    std::vector<std::string> command_line;
    int workers = 0;
    bool small = false;
    std::ostream* log = nullptr; // diagnostics; nullptr silences them
};

enum class FieldStage { first, steady };
enum class LinkDirection { dl, ul };

struct FieldmapOptions {
    /// Empty selects all four panels (first/steady x dl/ul).
    std::vector<std::pair<FieldStage, LinkDirection>> panels;
    /// Azimuth for the map run; the default 0 keeps the UE in the xoz plane.
    std::optional<double> azimuth_deg = 0.0;
    std::optional<MapSpec> grid;
};

enum class SweepAxis { iteration, elevation, link_length };

struct SweepOptions {
    SweepAxis axis = SweepAxis::iteration;
    std::vector<double> values;       // elevations (deg) or link lengths (m); empty selects defaults
    std::vector<double> link_lengths; // outer loop for iteration and elevation sweeps; empty selects 3, 4, 5
};

enum class RmseAxis { snr, link_length };

struct RmseOptions {
    RmseAxis axis = RmseAxis::link_length;
    std::vector<double> values; // per-element SNR (dB) or link length (m); empty selects defaults
    std::optional<int> trials;
};

struct DoaOptions {
    std::vector<double> link_lengths; // empty selects 3, 4, 5
};

SweepAxis parse_sweep_axis(const std::string& text);
RmseAxis parse_rmse_axis(const std::string& text);
FieldStage parse_field_stage(const std::string& text);
LinkDirection parse_link_direction(const std::string& text);

/// Panel label: fig6a (first, dl), fig6b (first, ul), fig6c (steady, dl), fig6d (steady, ul).
std::string fig6_label(FieldStage stage, LinkDirection direction);

/// Loop history, per-iteration comm metrics and geometry for one scenario.
ExitCode cmd_resonate(const ScenarioConfig& cfg, const RunOptions& opts);

/// Field-intensity maps as CSV plus text matrix per panel.
ExitCode cmd_fieldmap(const ScenarioConfig& cfg, const RunOptions& opts, const FieldmapOptions& fm = {});

/// Comm metrics along one sweep axis.
ExitCode cmd_sweep(const ScenarioConfig& cfg, const RunOptions& opts, const SweepOptions& sweep);

/// MUSIC spectra at each link length.
ExitCode cmd_doa(const ScenarioConfig& cfg, const RunOptions& opts, const DoaOptions& doa = {});

/// Monte Carlo RMSE along per-element SNR or link length.
ExitCode cmd_rmse(const ScenarioConfig& cfg, const RunOptions& opts, const RmseOptions& rmse);

/// Default sweep grids.
std::vector<double> default_elevations();
std::vector<double> default_link_lengths();
std::vector<double> default_snr_points();

/// Short numeric tag for file names: 3 -> "3", 4.5 -> "4.5".
std::string value_tag(double v);

} // namespace rbisac
