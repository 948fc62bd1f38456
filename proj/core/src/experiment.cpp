// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/experiment.hpp"

#include "rbisac/comm_metrics.hpp"
#include "rbisac/csv.hpp"
#include "rbisac/doa.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/parallel.hpp"
#include "rbisac/random.hpp"
#include "rbisac/resonance.hpp"

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#ifndef RBISAC_VERSION
#define RBISAC_VERSION "0.0.0"
#endif

namespace rbisac {

namespace {

// Stream tags below the master seed.
constexpr std::uint64_t kLoopStream = 1;
constexpr std::uint64_t kDoaStream = 2;
constexpr std::uint64_t kRmseStream = 3;

} // namespace

const char* version() { return RBISAC_VERSION; }

std::string sha256_hex(std::string_view data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("SHA-256 digest failed");
    }
    std::ostringstream hex;
    hex << std::hex << std::setfill('0');
    for (unsigned int i = 0; i < len; ++i) hex << std::setw(2) << static_cast<int>(digest[i]);
    return hex.str();
}

std::string manifest_json(const ExperimentManifest& m) {
    nlohmann::ordered_json j;
    j["command"] = m.command;
    j["command_line"] = m.command_line;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["config"] = m.config_text;
    j["frequency_plan"] = {{"ok", m.frequency_plan.ok},
                           {"predicted_hz", m.frequency_plan.predicted_hz},
                           {"expected_hz", m.frequency_plan.expected_hz},
                           {"message", m.frequency_plan.message}};
    auto outputs = nlohmann::ordered_json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"bytes", o.bytes}, {"sha256", o.sha256}});
    j["outputs"] = outputs;
    j["warnings"] = m.warnings;
    auto decisions = nlohmann::ordered_json::object();
    for (const auto& [k, v] : m.decisions) decisions[k] = v;
    j["decisions"] = decisions;
    j["runtime_seconds"] = m.runtime_seconds;
    j["exit_code"] = m.exit_code;
    return j.dump(2) + "\n";
}

SweepAxis parse_sweep_axis(const std::string& text) {
    if (text == "iteration") return SweepAxis::iteration;
    if (text == "elevation") return SweepAxis::elevation;
    if (text == "link_length") return SweepAxis::link_length;
    throw std::invalid_argument("unknown sweep axis '" + text + "' (expected iteration, elevation or link_length)");
}

RmseAxis parse_rmse_axis(const std::string& text) {
    if (text == "snr") return RmseAxis::snr;
    if (text == "link_length") return RmseAxis::link_length;
    throw std::invalid_argument("unknown rmse axis '" + text + "' (expected snr or link_length)");
}

FieldStage parse_field_stage(const std::string& text) {
    if (text == "first") return FieldStage::first;
    if (text == "steady") return FieldStage::steady;
    throw std::invalid_argument("unknown stage '" + text + "' (expected first or steady)");
}

LinkDirection parse_link_direction(const std::string& text) {
    if (text == "dl") return LinkDirection::dl;
    if (text == "ul") return LinkDirection::ul;
    throw std::invalid_argument("unknown direction '" + text + "' (expected dl or ul)");
}

std::string fig6_label(FieldStage stage, LinkDirection direction) {
    const char panel = stage == FieldStage::first ? (direction == LinkDirection::dl ? 'a' : 'b')
                                                  : (direction == LinkDirection::dl ? 'c' : 'd');
    return std::string("fig6") + panel;
}

std::vector<double> default_elevations() { return {0, 10, 20, 30, 40, 50, 60}; }

std::vector<double> default_link_lengths() {
    std::vector<double> v;
    for (int i = 0; i <= 8; ++i) v.push_back(3.0 + 0.25 * i);
    return v;
}

std::vector<double> default_snr_points() {
    std::vector<double> v;
    for (int i = 0; i <= 12; ++i) v.push_back(-20.0 + 2.5 * i);
    return v;
}

std::string value_tag(double v) {
    std::ostringstream s;
    s << std::setprecision(6) << v;
    return s.str();
}

namespace {

/// Bookkeeping shared by every command: output directory, manifest, timing.
class Session {
public:
    Session(std::string command, const ScenarioConfig& cfg, const RunOptions& opts)
        : opts_(opts), start_(std::chrono::steady_clock::now()) {
        manifest_.command = std::move(command);
        manifest_.command_line = opts.command_line;
        manifest_.config_text = to_config_string(cfg);
        manifest_.seed = cfg.rng_seed;
        manifest_.version = version();
        manifest_.frequency_plan = check_frequency_plan(cfg);
        if (!manifest_.frequency_plan.ok) warn("frequency plan: " + manifest_.frequency_plan.message);
        if (opts.small) decide("profile", "small (8x8 arrays, reduced trials and snapshots)");
        std::filesystem::create_directories(opts.out_dir);
        write("scenario.cfg", manifest_.config_text);
    }

    void warn(const std::string& message) {
        for (const auto& w : manifest_.warnings) {
            if (w == message) return;
        }
        manifest_.warnings.push_back(message);
        if (opts_.log) *opts_.log << "warning: " << message << '\n';
    }

    void decide(std::string key, std::string value) { manifest_.decisions.emplace_back(std::move(key), std::move(value)); }

    void note(const std::string& message) {
        if (opts_.log) *opts_.log << message << '\n';
    }

    void write(const std::string& name, const std::string& content) {
        const auto path = opts_.out_dir / name;
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
        f << content;
        if (!f) throw std::runtime_error("write failed for " + path.string());
        manifest_.outputs.push_back({name, content.size(), sha256_hex(content)});
    }

    ExitCode finish(ExitCode code) {
        manifest_.exit_code = static_cast<int>(code);
        manifest_.runtime_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        const auto path = opts_.out_dir / "manifest.json";
        std::ofstream f(path, std::ios::binary);
        f << manifest_json(manifest_);
        return code;
    }

    int workers() const { return opts_.workers; }

private:
    const RunOptions& opts_;
    ExperimentManifest manifest_;
    std::chrono::steady_clock::time_point start_;
};

template <typename Fn>
std::string render(Fn&& fn) {
    std::ostringstream s;
    fn(s);
    return s.str();
}

LinkGeometry geometry_for(const ScenarioConfig& cfg, Session& session) {
    LinkGeometry g = build_link_geometry(cfg);
    for (const auto& w : g.warnings) session.warn(w);
    return g;
}

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
    return v.empty() ? fallback : v;
}

struct PointOutcome {
    bool ok = false;
    bool diverged = false;
    ResonanceResult result;
    std::string error;
};

PointOutcome run_point(const ScenarioConfig& cfg, const RandomStream& stream) {
    PointOutcome out;
    try {
        const LinkGeometry g = build_link_geometry(cfg);
        RandomStream rng = stream;
        out.result = run_to_resonance(g, cfg, rng);
        out.ok = true;
    } catch (const DivergenceError& e) {
        out.diverged = true;
        out.error = e.what();
    }
    return out;
}

CommReport nan_report(const ScenarioConfig& cfg) {
    CommReport r;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    r.link_length = cfg.link_length;
    r.elevation = deg_to_rad(cfg.elevation_deg);
    r.iteration = -1;
    r.snr_dl = r.snr_ul = r.snr_dl_db = r.snr_ul_db = nan;
    r.rate_dl = r.rate_ul = r.se_dl = r.se_ul = r.mu_dl = r.mu_ul = nan;
    return r;
}

} // namespace

ExitCode cmd_resonate(const ScenarioConfig& cfg, const RunOptions& opts) {
    Session session("resonate", cfg, opts);
    const LinkGeometry geom = geometry_for(cfg, session);
    session.write("geometry.csv", render([&](std::ostream& o) { write_geometry_csv(o, geom); }));

    RandomStream rng = RandomStream(cfg.rng_seed).derive({kLoopStream});
    ResonanceResult result;
    try {
        result = run_to_resonance(geom, cfg, rng);
    } catch (const DivergenceError& e) {
        session.warn(e.what());
        return session.finish(ExitCode::divergence);
    }

    session.write("history.csv", render([&](std::ostream& o) { write_history_csv(o, result.history); }));

    std::vector<CommReport> rows;
    rows.reserve(result.history.size());
    for (std::size_t i = 0; i < result.history.size(); ++i) {
        const bool last = i + 1 == result.history.size();
        rows.push_back(comm_report(result.history[i], cfg, last && result.converged));
    }
    session.write("comm.csv", render([&](std::ostream& o) { write_comm_csv(o, rows, cfg); }));

    if (!result.converged) {
        session.warn("no resonance after " + std::to_string(result.iterations_run) + " cycles");
        return session.finish(ExitCode::no_resonance);
    }
    session.note("resonance after " + std::to_string(result.iterations_run) + " cycles");
    return session.finish(ExitCode::ok);
}

ExitCode cmd_fieldmap(const ScenarioConfig& base, const RunOptions& opts, const FieldmapOptions& fm) {
    ScenarioConfig cfg = base;
    if (fm.azimuth_deg) cfg.azimuth_deg = *fm.azimuth_deg;
    validate(cfg);

    Session session("fieldmap", cfg, opts);
    session.decide("fieldmap_azimuth_deg", value_tag(cfg.azimuth_deg));
    session.decide("fieldmap_normalization", "per panel");
    const LinkGeometry geom = geometry_for(cfg, session);

    RandomStream rng = RandomStream(cfg.rng_seed).derive({kLoopStream});
    ResonanceResult result;
    try {
        result = run_to_resonance(geom, cfg, rng);
    } catch (const DivergenceError& e) {
        session.warn(e.what());
        return session.finish(ExitCode::divergence);
    }

    MapSpec spec = fm.grid.value_or(default_map_spec(geom));
    if (!fm.grid && opts.small) spec.nu = spec.nv = 100;

    auto panels = fm.panels;
    if (panels.empty()) {
        panels = {{FieldStage::first, LinkDirection::dl},
                  {FieldStage::first, LinkDirection::ul},
                  {FieldStage::steady, LinkDirection::dl},
                  {FieldStage::steady, LinkDirection::ul}};
    }

    const double g_max = db_to_linear(cfg.g_max_dbi);
    for (const auto& [stage, dir] : panels) {
        const LoopState& state = stage == FieldStage::first ? result.first_cycle : result.steady_state;
        const bool dl = dir == LinkDirection::dl;
        FieldMap map = compute_field_map(dl ? geom.bs_tx : geom.ue_tx,
                                         dl ? state.bs_tx_amplitude : state.ue_tx_amplitude, dl ? cfg.f1 : cfg.f2,
                                         spec, g_max, session.workers());
        const std::string label = fig6_label(stage, dir);
        map.label = label;
        session.write(label + ".csv", render([&](std::ostream& o) { write_field_csv(o, map); }));
        session.write(label + ".txt", render([&](std::ostream& o) { write_field_matrix(o, map); }));
    }

    if (!result.converged) {
        session.warn("no resonance; steady panels show the last cycle");
        return session.finish(ExitCode::no_resonance);
    }
    return session.finish(ExitCode::ok);
}

ExitCode cmd_sweep(const ScenarioConfig& cfg, const RunOptions& opts, const SweepOptions& sweep) {
    const char* names[] = {"iteration", "elevation", "link_length"};
    const std::string axis = names[static_cast<int>(sweep.axis)];
    Session session("sweep", cfg, opts);
    session.decide("sweep_axis", axis);
    geometry_for(cfg, session);

    // One scenario per sweep point, ordered by index.
    std::vector<ScenarioConfig> points;
    const auto lengths = or_default(sweep.link_lengths, {3.0, 4.0, 5.0});
    switch (sweep.axis) {
    case SweepAxis::iteration:
        for (double l : or_default(sweep.values, lengths)) {
            ScenarioConfig c = cfg;
            c.link_length = l;
            points.push_back(c);
        }
        break;
    case SweepAxis::elevation:
        for (double l : lengths) {
            for (double th : or_default(sweep.values, default_elevations())) {
                ScenarioConfig c = cfg;
                c.link_length = l;
                c.elevation_deg = th;
                points.push_back(c);
            }
        }
        break;
    case SweepAxis::link_length:
        for (double l : or_default(sweep.values, default_link_lengths())) {
            ScenarioConfig c = cfg;
            c.link_length = l;
            points.push_back(c);
        }
        break;
    }
    for (const auto& p : points) validate(p);

    const RandomStream master(cfg.rng_seed);
    std::vector<PointOutcome> outcomes(points.size());
    parallel_for(
        points.size(),
        [&](std::size_t i) { outcomes[i] = run_point(points[i], master.derive({kLoopStream, i})); },
        session.workers());

    std::vector<CommReport> rows;
    bool all_converged = true;
    bool any_diverged = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& out = outcomes[i];
        if (!out.ok) {
            any_diverged = true;
            session.warn("l=" + value_tag(points[i].link_length) + " m, theta=" + value_tag(points[i].elevation_deg) +
                         " deg: " + out.error);
            rows.push_back(nan_report(points[i]));
            continue;
        }
        if (!out.result.converged) {
            all_converged = false;
            session.warn("l=" + value_tag(points[i].link_length) + " m, theta=" + value_tag(points[i].elevation_deg) +
                         " deg: no resonance");
        }
        if (sweep.axis == SweepAxis::iteration) {
            const auto& h = out.result.history;
            for (std::size_t k = 0; k < h.size(); ++k) {
                rows.push_back(comm_report(h[k], points[i], k + 1 == h.size() && out.result.converged));
            }
        } else {
            rows.push_back(comm_report(out.result.steady_state, points[i], out.result.converged));
        }
    }

    session.write("sweep_" + axis + ".csv", render([&](std::ostream& o) { write_comm_csv(o, rows, cfg); }));
    if (any_diverged) return session.finish(ExitCode::divergence);
    return session.finish(all_converged ? ExitCode::ok : ExitCode::no_resonance);
}

ExitCode cmd_doa(const ScenarioConfig& cfg, const RunOptions& opts, const DoaOptions& doa) {
    Session session("doa", cfg, opts);
    session.decide("doa_aperture", cfg.doa_subarray_side > 0
                                       ? "central " + std::to_string(cfg.doa_subarray_side) + "x" +
                                             std::to_string(cfg.doa_subarray_side) + " block of the BS Rx array"
                                       : std::string("full BS Rx array"));
    session.decide("doa_snr_definition", "per element");
    geometry_for(cfg, session);

    const RandomStream master(cfg.rng_seed);
    std::ostringstream peaks;
    CsvWriter csv(peaks, {"l", "theta_true", "phi_true", "theta_hat", "phi_hat", "snr_db", "azimuth_degenerate"});

    ExitCode code = ExitCode::ok;
    const auto lengths = or_default(doa.link_lengths, {3.0, 4.0, 5.0});
    for (std::size_t i = 0; i < lengths.size(); ++i) {
        ScenarioConfig c = cfg;
        c.link_length = lengths[i];
        validate(c);
        const LinkGeometry geom = build_link_geometry(c);
        RandomStream loop_rng = master.derive({kLoopStream, i});
        ResonanceResult loop;
        try {
            loop = run_to_resonance(geom, c, loop_rng);
        } catch (const DivergenceError& e) {
            session.warn("l=" + value_tag(c.link_length) + " m: " + e.what());
            code = ExitCode::divergence;
            continue;
        }
        if (!loop.converged) {
            session.warn("l=" + value_tag(c.link_length) + " m: no resonance; using the last cycle");
            if (code == ExitCode::ok) code = ExitCode::no_resonance;
        }

        const SnapshotModel model = snapshot_model(geom, loop.steady_state, c);
        RandomStream rng = master.derive({kDoaStream, i});
        const SnapshotBlock block = synthesize_snapshots(model, rng);
        const MusicSpectrum spectrum = music_spectrum(subspace_split(sample_covariance(block), 1), model.array);

        session.write("fig12_l" + value_tag(c.link_length) + ".csv",
                      render([&](std::ostream& o) { write_spectrum_csv(o, spectrum); }));
        csv.row(c.link_length, model.theta_deg, model.phi_deg, spectrum.peak_theta, spectrum.peak_phi,
                linear_to_db(model.snr()), spectrum.azimuth_degenerate);
    }
    session.write("doa_peaks.csv", peaks.str());
    return session.finish(code);
}

ExitCode cmd_rmse(const ScenarioConfig& cfg, const RunOptions& opts, const RmseOptions& rmse) {
    Session session("rmse", cfg, opts);
    const bool snr_axis = rmse.axis == RmseAxis::snr;
    const std::string axis = snr_axis ? "snr_db" : "link_length";
    session.decide("rmse_axis", axis);
    session.decide("doa_snr_definition", "per element");
    session.decide("rmse_metric", "total = sqrt(mse_theta + mse_phi)");
    geometry_for(cfg, session);

    const int trials = rmse.trials.value_or(cfg.monte_carlo_trials);
    const RandomStream master(cfg.rng_seed);
    const auto values = or_default(rmse.values, snr_axis ? default_snr_points() : default_link_lengths());

    std::vector<RmseRow> rows;
    ExitCode code = ExitCode::ok;
    for (std::size_t i = 0; i < values.size(); ++i) {
        ScenarioConfig c = cfg;
        if (!snr_axis) c.link_length = values[i];
        validate(c);
        const LinkGeometry geom = build_link_geometry(c);
        const RandomStream stream = master.derive({kRmseStream, i});
        try {
            RmseReport rep = estimate_rmse(geom, c, trials, stream,
                                           snr_axis ? std::optional<double>(values[i]) : std::nullopt, MusicGrid{},
                                           session.workers());
            if (rep.invalid_trials > 0) {
                session.warn(axis + "=" + value_tag(values[i]) + ": " + std::to_string(rep.invalid_trials) +
                             " invalid trials");
            }
            session.note(axis + "=" + value_tag(values[i]) + " rmse_total=" + CsvWriter::format(rep.rmse_total));
            rows.push_back({values[i], rep});
        } catch (const DivergenceError& e) {
            session.warn(axis + "=" + value_tag(values[i]) + ": " + e.what());
            RmseReport rep;
            rep.rmse_theta = rep.rmse_phi = rep.rmse_total = std::numeric_limits<double>::quiet_NaN();
            rep.trials = rep.invalid_trials = trials;
            rows.push_back({values[i], rep});
            code = ExitCode::divergence;
        }
    }
    session.write("rmse_" + axis + ".csv", render([&](std::ostream& o) { write_rmse_csv(o, axis, rows); }));
    return session.finish(code);
}

} // namespace rbisac
