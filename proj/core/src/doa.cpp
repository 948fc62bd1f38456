// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/doa.hpp"

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/csv.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/parallel.hpp"
#include "rbisac/random.hpp"
#include "rbisac/resonance.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

namespace rbisac {

Eigen::VectorXcd ArrayManifold::steering(double theta_deg, double phi_deg) const {
    return steering_vector(side, spacing, wavelength, deg_to_rad(theta_deg), deg_to_rad(phi_deg));
}

ArrayManifold doa_manifold(const LinkGeometry& geom, const ScenarioConfig& cfg) {
    const int full = geom.bs_rx.side();
    const int side = cfg.doa_subarray_side > 0 ? std::min(cfg.doa_subarray_side, full) : full;
    return {side, geom.bs_rx.spacing(), wavelength(cfg.f2)};
}

double SnapshotModel::snr() const {
    if (noise_sigma2 <= 0.0) return std::numeric_limits<double>::infinity();
    return signal_amplitude * signal_amplitude / noise_sigma2;
}

SnapshotModel snapshot_model(const LinkGeometry& geom, const LoopState& steady, const ScenarioConfig& cfg) {
    SnapshotModel m;
    m.array = doa_manifold(geom, cfg);
    m.theta_deg = cfg.elevation_deg;
    m.phi_deg = cfg.azimuth_deg;
    m.noise_sigma2 = noise_variance(cfg.temperature, cfg.bandwidth_ul, cfg.eta);
    m.phase_noise_sigma = cfg.phase_noise_sigma;
    m.snapshots = cfg.snapshots;

    // Mean receive power over the central block of the BS Rx array.
    const int full = geom.bs_rx.side();
    const int first = (full - m.array.side) / 2;
    double total = 0.0;
    if (steady.bs_rx_amplitude.size() == static_cast<Eigen::Index>(full) * full) {
        for (int ix = first; ix < first + m.array.side; ++ix) {
            for (int iy = first; iy < first + m.array.side; ++iy) {
                total += std::norm(steady.bs_rx_amplitude(ix * full + iy));
            }
        }
    }
    const double p_mean = total / m.array.size();
    m.signal_amplitude = std::sqrt(2.0 * cfg.eta * cfg.beta_loc * p_mean);
    return m;
}

SnapshotModel with_snr_db(SnapshotModel model, double snr_db) {
    model.signal_amplitude = std::sqrt(db_to_linear(snr_db) * model.noise_sigma2);
    return model;
}

SnapshotBlock synthesize_snapshots(const SnapshotModel& model, RandomStream& rng) {
    const Eigen::VectorXcd a = model.array.steering(model.theta_deg, model.phi_deg);
    const auto m = a.size();
    const int k_count = std::max(1, model.snapshots);
    const bool phase_noise = model.phase_noise_sigma > 0.0;
    const bool noisy = model.noise_sigma2 > 0.0;

    SnapshotBlock block;
    block.snr = model.snr();
    block.samples.resize(m, k_count);
    for (int k = 0; k < k_count; ++k) {
        const std::complex<double> s = rng.unit_phasor();
        for (Eigen::Index p = 0; p < m; ++p) {
            std::complex<double> x = model.signal_amplitude * a(p) * s;
            if (phase_noise) x *= std::polar(1.0, model.phase_noise_sigma * rng.normal());
            if (noisy) x += rng.complex_normal(model.noise_sigma2);
            block.samples(p, k) = x;
        }
    }
    return block;
}

Eigen::MatrixXcd sample_covariance(const SnapshotBlock& block) {
    const auto k = block.samples.cols();
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(block.samples.rows(), block.samples.rows());
    r.selfadjointView<Eigen::Lower>().rankUpdate(block.samples, 1.0 / static_cast<double>(k));
    r.triangularView<Eigen::StrictlyUpper>() = r.adjoint();
    r.diagonal() = r.diagonal().real().cast<std::complex<double>>();
    return r;
}

Subspaces subspace_split(const Eigen::MatrixXcd& covariance, int source_count) {
    const auto m = covariance.rows();
    if (covariance.cols() != m) throw EigenSolverError("covariance matrix is not square");
    if (source_count < 1 || source_count >= m) throw EigenSolverError("source count must lie in [1, M)");
    if (!covariance.allFinite()) throw EigenSolverError("covariance matrix has non-finite entries");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(covariance);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "Hermitian eigendecomposition failed (M=" << m << ", trace=" << covariance.trace().real()
            << ", max |r_ij|=" << covariance.cwiseAbs().maxCoeff() << ")";
        throw EigenSolverError(msg.str());
    }

    // Eigen returns ascending order; reverse it.
    Subspaces out;
    out.eigenvalues = solver.eigenvalues().reverse();
    const Eigen::MatrixXcd vectors = solver.eigenvectors().rowwise().reverse();
    out.signal = vectors.leftCols(source_count);
    out.noise = vectors.rightCols(m - source_count);
    return out;
}

double music_value_explicit(const Eigen::MatrixXcd& noise_basis, const Eigen::VectorXcd& a) {
    const double proj = (noise_basis.adjoint() * a).squaredNorm();
    return 1.0 / std::max(proj, std::numeric_limits<double>::min());
}

double music_value(const Eigen::MatrixXcd& signal_basis, const Eigen::VectorXcd& a) {
    const double total = a.squaredNorm();
    const double proj = total - (signal_basis.adjoint() * a).squaredNorm();
    // Rounding can push the residual slightly negative near an exact match.
    const double floor = total * std::numeric_limits<double>::epsilon();
    return 1.0 / std::max(proj, floor);
}

namespace {

double wrap_phi(double phi, const MusicGrid& g) {
    const double span = g.phi_max - g.phi_min;
    double x = std::fmod(phi - g.phi_min, span);
    if (x < 0.0) x += span;
    return g.phi_min + x;
}

double clamp_theta(double theta, const MusicGrid& g) {
    return std::clamp(theta, g.theta_min, std::nextafter(g.theta_max, g.theta_min));
}

template <typename F>
double golden_max(F&& f, double lo, double hi, int iterations) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

} // namespace

MusicSpectrum music_spectrum(const Subspaces& subspaces, const ArrayManifold& array, const MusicGrid& grid) {
    MusicSpectrum out;
    const auto eval = [&](double theta, double phi) {
        return music_value(subspaces.signal, array.steering(theta, phi));
    };

    for (double t = grid.theta_min; t < grid.theta_max - 1e-9; t += grid.coarse_step) out.theta_grid.push_back(t);
    for (double p = grid.phi_min; p < grid.phi_max - 1e-9; p += grid.coarse_step) out.phi_grid.push_back(p);
    const auto nt = static_cast<Eigen::Index>(out.theta_grid.size());
    const auto np = static_cast<Eigen::Index>(out.phi_grid.size());
    out.values.resize(nt, np);

    Eigen::Index bi = 0, bj = 0;
    for (Eigen::Index i = 0; i < nt; ++i) {
        for (Eigen::Index j = 0; j < np; ++j) {
            const double v = eval(out.theta_grid[i], out.phi_grid[j]);
            out.values(i, j) = v;
            if (v > out.values(bi, bj)) {
                bi = i;
                bj = j;
            }
        }
    }

    double best_t = out.theta_grid[bi];
    double best_p = out.phi_grid[bj];
    double best_v = out.values(bi, bj);

    const int half = static_cast<int>(std::lround(grid.refine_halfwidth / grid.fine_step));
    const double t0 = best_t, p0 = best_p;
    for (int a = -half; a <= half; ++a) {
        const double t = t0 + a * grid.fine_step;
        if (t < grid.theta_min || t >= grid.theta_max) continue;
        for (int b = -half; b <= half; ++b) {
            const double p = wrap_phi(p0 + b * grid.fine_step, grid);
            const double v = eval(t, p);
            if (v > best_v) {
                best_v = v;
                best_t = t;
                best_p = p;
            }
        }
    }

    if (grid.polish) {
        for (int round = 0; round < 3; ++round) {
            const double fixed_p = best_p;
            const double t = golden_max([&](double x) { return eval(clamp_theta(x, grid), fixed_p); },
                                        best_t - grid.fine_step, best_t + grid.fine_step, 30);
            const double ct = clamp_theta(t, grid);
            if (const double v = eval(ct, best_p); v > best_v) {
                best_v = v;
                best_t = ct;
            }
            const double fixed_t = best_t;
            const double p = golden_max([&](double x) { return eval(fixed_t, wrap_phi(x, grid)); },
                                        best_p - grid.fine_step, best_p + grid.fine_step, 30);
            const double cp = wrap_phi(p, grid);
            if (const double v = eval(best_t, cp); v > best_v) {
                best_v = v;
                best_p = cp;
            }
        }
    }

    out.peak_theta = best_t;
    out.peak_phi = best_p;
    out.peak_value = best_v;
    out.azimuth_degenerate = best_t < grid.fine_step;
    return out;
}

DoaEstimate estimate_doa(const SnapshotModel& model, RandomStream& rng, const MusicGrid& grid) {
    const SnapshotBlock block = synthesize_snapshots(model, rng);
    const Subspaces sub = subspace_split(sample_covariance(block), 1);
    const MusicSpectrum spec = music_spectrum(sub, model.array, grid);
    if (!std::isfinite(spec.peak_theta) || !std::isfinite(spec.peak_phi) || !std::isfinite(spec.peak_value)) {
        throw EigenSolverError("MUSIC peak search produced a non-finite estimate");
    }
    return {spec.peak_theta, spec.peak_phi, spec.azimuth_degenerate};
}

double wrap_degrees(double delta) {
    double x = std::remainder(delta, 360.0);
    if (x <= -180.0) x += 360.0;
    return x;
}

namespace {

struct TrialError {
    bool valid = false;
    double theta = 0.0;
    double phi = 0.0;
};

RmseReport reduce(const std::vector<TrialError>& errors, double truth_theta, double truth_phi, double snr) {
    RmseReport r;
    r.trials = static_cast<int>(errors.size());
    r.truth_theta = truth_theta;
    r.truth_phi = truth_phi;
    r.snr_db = linear_to_db(snr);
    double st = 0.0, sp = 0.0;
    int valid = 0;
    for (const auto& e : errors) {
        if (!e.valid) {
            ++r.invalid_trials;
            continue;
        }
        ++valid;
        st += e.theta * e.theta;
        sp += e.phi * e.phi;
    }
    if (valid == 0) {
        r.rmse_theta = r.rmse_phi = r.rmse_total = std::numeric_limits<double>::quiet_NaN();
        return r;
    }
    const double mse_t = st / valid;
    const double mse_p = sp / valid;
    r.rmse_theta = std::sqrt(mse_t);
    r.rmse_phi = std::sqrt(mse_p);
    r.rmse_total = std::sqrt(mse_t + mse_p);
    return r;
}

TrialError trial_error(const SnapshotModel& model, RandomStream& rng, const MusicGrid& grid) {
    const DoaEstimate est = estimate_doa(model, rng, grid);
    TrialError e;
    e.valid = true;
    e.theta = est.theta_deg - model.theta_deg;
    e.phi = est.azimuth_degenerate ? 0.0 : wrap_degrees(est.phi_deg - model.phi_deg);
    return e;
}

} // namespace

RmseReport estimate_rmse(const SnapshotModel& model, int trials, const RandomStream& rng, const MusicGrid& grid,
                         int workers) {
    std::vector<TrialError> errors(static_cast<std::size_t>(std::max(trials, 0)));
    parallel_for(
        errors.size(),
        [&](std::size_t i) {
            RandomStream stream = rng.derive({i});
            try {
                errors[i] = trial_error(model, stream, grid);
            } catch (const std::exception&) {
                errors[i] = TrialError{};
            }
        },
        workers);
    return reduce(errors, model.theta_deg, model.phi_deg, model.snr());
}

RmseReport estimate_rmse(const LinkGeometry& geom, const ScenarioConfig& cfg, int trials, const RandomStream& rng,
                         std::optional<double> snr_db, const MusicGrid& grid, int workers) {
    const auto finish = [&](SnapshotModel m) { return snr_db ? with_snr_db(std::move(m), *snr_db) : m; };

    if (!cfg.loop_phase_noise) {
        RandomStream loop_rng = rng.derive({0x6c6f6f70}); // shared loop stream
        const ResonanceResult loop = run_to_resonance(geom, cfg, loop_rng);
        return estimate_rmse(finish(snapshot_model(geom, loop.steady_state, cfg)), trials, rng, grid, workers);
    }

    const LoopChannels channels = build_loop_channels(geom, cfg);
    std::vector<TrialError> errors(static_cast<std::size_t>(std::max(trials, 0)));
    std::vector<double> snrs(errors.size(), 0.0);
    parallel_for(
        errors.size(),
        [&](std::size_t i) {
            RandomStream stream = rng.derive({i});
            RandomStream loop_rng = stream.derive({0x6c6f6f70});
            try {
                const ResonanceResult loop = run_to_resonance(geom, cfg, loop_rng, channels);
                const SnapshotModel m = finish(snapshot_model(geom, loop.steady_state, cfg));
                snrs[i] = m.snr();
                errors[i] = trial_error(m, stream, grid);
            } catch (const std::exception&) {
                errors[i] = TrialError{};
            }
        },
        workers);
    double mean_snr = 0.0;
    for (double s : snrs) mean_snr += s;
    if (!snrs.empty()) mean_snr /= static_cast<double>(snrs.size());
    return reduce(errors, cfg.elevation_deg, cfg.azimuth_deg, mean_snr);
}

void write_spectrum_csv(std::ostream& out, const MusicSpectrum& spectrum) {
    CsvWriter csv(out, {"theta_deg", "phi_deg", "p_music"});
    for (std::size_t i = 0; i < spectrum.theta_grid.size(); ++i) {
        for (std::size_t j = 0; j < spectrum.phi_grid.size(); ++j) {
            csv.row(spectrum.theta_grid[i], spectrum.phi_grid[j],
                    spectrum.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
    }
}

void write_rmse_csv(std::ostream& out, const std::string& axis_name, const std::vector<RmseRow>& rows) {
    CsvWriter csv(out, {axis_name, "rmse_theta", "rmse_phi", "rmse_total", "invalid_trials"});
    for (const auto& r : rows) {
        csv.row(r.axis_value, r.report.rmse_theta, r.report.rmse_phi, r.report.rmse_total, r.report.invalid_trials);
    }
}

} // namespace rbisac
