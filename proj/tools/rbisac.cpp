// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors
//
// Command-line front end: one subcommand per experiment family.

#include "rbisac/config.hpp"
#include "rbisac/doa.hpp"
#include "rbisac/experiment.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/resonance.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace rbisac;

struct Common {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir = "out";
    bool small = false;
    int workers = 0;
    std::optional<double> link_length;
    std::optional<double> elevation;
    std::optional<double> azimuth;
};

void add_common(CLI::App& sub, Common& c) {
    sub.add_option("--config", c.config_path, "Scenario file (key = value)")->check(CLI::ExistingFile);
    sub.add_option("--seed", c.seed, "Master RNG seed (overrides the config)");
    sub.add_option("--out", c.out_dir, "Output directory")->capture_default_str();
    sub.add_flag("--small", c.small, "8x8 arrays and reduced trials for quick runs");
    sub.add_option("--workers", c.workers, "Worker threads (0: RBISAC_WORKERS or hardware)")->check(CLI::NonNegativeNumber);
    sub.add_option("--link-length", c.link_length, "Link length l, m");
    sub.add_option("--elevation-deg", c.elevation, "UE elevation theta, deg");
    sub.add_option("--azimuth-deg", c.azimuth, "UE azimuth phi, deg");
}

ScenarioConfig resolve(const Common& c) {
    ScenarioConfig cfg = c.config_path.empty() ? ScenarioConfig{} : load_config(c.config_path);
    if (c.small) cfg = small_profile(cfg);
    if (c.seed) cfg.rng_seed = *c.seed;
    if (c.link_length) cfg.link_length = *c.link_length;
    if (c.elevation) cfg.elevation_deg = *c.elevation;
    if (c.azimuth) cfg.azimuth_deg = *c.azimuth;
    validate(cfg);
    return cfg;
}

RunOptions run_options(const Common& c, const std::vector<std::string>& argv) {
    RunOptions o;
    o.out_dir = c.out_dir;
    o.command_line = argv;
    o.workers = c.workers;
    o.small = c.small;
    o.log = &std::cerr;
    return o;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"rbisac: resonant-beam ISAC simulator"};
    app.set_version_flag("--version", std::string(rbisac::version()));
    app.require_subcommand(1);

    std::vector<std::string> args(argv, argv + argc);

    Common resonate_c, field_c, sweep_c, doa_c, rmse_c;

    auto* resonate = app.add_subcommand("resonate", "Run the BS-UE loop to resonance");
    add_common(*resonate, resonate_c);

    auto* fieldmap = app.add_subcommand("fieldmap", "Normalized field-intensity maps (fig6a-d)");
    add_common(*fieldmap, field_c);
    std::string stage, direction, plane = "xoz";
    int grid_n = 0;
    double plane_offset = 0.0;
    fieldmap->add_option("--stage", stage, "first or steady (default: both)")->check(CLI::IsMember({"first", "steady"}));
    fieldmap->add_option("--direction", direction, "dl or ul (default: both)")->check(CLI::IsMember({"dl", "ul"}));
    fieldmap->add_option("--plane", plane, "xoz, yoz or xoy")->check(CLI::IsMember({"xoz", "yoz", "xoy"}));
    fieldmap->add_option("--plane-offset", plane_offset, "Third coordinate of the plane, m");
    fieldmap->add_option("--grid", grid_n, "Points per axis (default 200, 100 with --small)")->check(CLI::PositiveNumber);

    auto* sweep = app.add_subcommand("sweep", "Comm metrics over iterations, elevation or link length");
    add_common(*sweep, sweep_c);
    std::string sweep_axis = "iteration";
    std::vector<double> sweep_values, sweep_lengths;
    sweep->add_option("--axis", sweep_axis, "iteration, elevation or link_length")
        ->check(CLI::IsMember({"iteration", "elevation", "link_length"}))
        ->capture_default_str();
    sweep->add_option("--values", sweep_values, "Sweep points (deg for elevation, m otherwise)")->delimiter(',');
    sweep->add_option("--lengths", sweep_lengths, "Link lengths for iteration/elevation sweeps")->delimiter(',');

    auto* doa = app.add_subcommand("doa", "MUSIC spectra at each link length");
    add_common(*doa, doa_c);
    std::vector<double> doa_lengths;
    doa->add_option("--lengths", doa_lengths, "Link lengths, m (default 3,4,5)")->delimiter(',');

    auto* rmse = app.add_subcommand("rmse", "Monte Carlo DOA RMSE over SNR or link length");
    add_common(*rmse, rmse_c);
    std::string rmse_axis = "link_length";
    std::vector<double> rmse_values;
    std::optional<int> trials;
    rmse->add_option("--axis", rmse_axis, "snr or link_length")
        ->check(CLI::IsMember({"snr", "link_length"}))
        ->capture_default_str();
    rmse->add_option("--values", rmse_values, "Per-element SNR (dB) or link lengths (m)")->delimiter(',');
    rmse->add_option("--trials", trials, "Monte Carlo trials (default from config)")->check(CLI::PositiveNumber);

    CLI11_PARSE(app, argc, argv);

    try {
        rbisac::ExitCode code = rbisac::ExitCode::ok;
        if (*resonate) {
            code = cmd_resonate(resolve(resonate_c), run_options(resonate_c, args));
        } else if (*fieldmap) {
            FieldmapOptions fm;
            if (field_c.azimuth) fm.azimuth_deg = field_c.azimuth;
            std::vector<FieldStage> stages{FieldStage::first, FieldStage::steady};
            std::vector<LinkDirection> dirs{LinkDirection::dl, LinkDirection::ul};
            if (!stage.empty()) stages = {parse_field_stage(stage)};
            if (!direction.empty()) dirs = {parse_link_direction(direction)};
            for (auto s : stages) {
                for (auto d : dirs) fm.panels.emplace_back(s, d);
            }
            const ScenarioConfig cfg = resolve(field_c);
            if (plane != "xoz" || plane_offset != 0.0 || grid_n > 0) {
                ScenarioConfig geo_cfg = cfg;
                if (fm.azimuth_deg) geo_cfg.azimuth_deg = *fm.azimuth_deg;
                MapSpec spec = default_map_spec(build_link_geometry(geo_cfg));
                spec.plane = parse_map_plane(plane);
                spec.offset = plane_offset;
                if (grid_n > 0) spec.nu = spec.nv = grid_n;
                else if (field_c.small) spec.nu = spec.nv = 100;
                if (spec.plane == MapPlane::xoy) {
                    spec.v_min = spec.u_min;
                    spec.v_max = spec.u_max;
                }
                fm.grid = spec;
            }
            code = cmd_fieldmap(cfg, run_options(field_c, args), fm);
        } else if (*sweep) {
            SweepOptions so;
            so.axis = parse_sweep_axis(sweep_axis);
            so.values = sweep_values;
            so.link_lengths = sweep_lengths;
            code = cmd_sweep(resolve(sweep_c), run_options(sweep_c, args), so);
        } else if (*doa) {
            code = cmd_doa(resolve(doa_c), run_options(doa_c, args), DoaOptions{doa_lengths});
        } else if (*rmse) {
            RmseOptions ro;
            ro.axis = parse_rmse_axis(rmse_axis);
            ro.values = rmse_values;
            ro.trials = trials;
            code = cmd_rmse(resolve(rmse_c), run_options(rmse_c, args), ro);
        }
        return static_cast<int>(code);
    } catch (const rbisac::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(rbisac::ExitCode::config_error);
    } catch (const rbisac::GeometryError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return static_cast<int>(rbisac::ExitCode::config_error);
    } catch (const rbisac::DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(rbisac::ExitCode::divergence);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(rbisac::ExitCode::failure);
    }
}
