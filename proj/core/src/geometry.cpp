// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/geometry.hpp"

#include "rbisac/config.hpp"
#include "rbisac/csv.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>

namespace rbisac {

PlanarArray::PlanarArray(int side, double spacing, const Vec3& center, const Vec3& boresight,
                         const Vec3& x_axis)
    : side_(side), spacing_(spacing), center_(center) {
    if (side < 1) throw GeometryError("array side must be >= 1");
    if (!(spacing > 0.0)) throw GeometryError("element spacing must be > 0");
    if (boresight.norm() == 0.0 || x_axis.norm() == 0.0) throw GeometryError("zero orientation vector");

    boresight_ = boresight.normalized();
    // Gram-Schmidt so the in-plane axis is exactly orthogonal to boresight.
    Vec3 x = x_axis - x_axis.dot(boresight_) * boresight_;
    if (x.norm() < 1e-12) throw GeometryError("x axis is parallel to boresight");
    x_axis_ = x.normalized();
    y_axis_ = boresight_.cross(x_axis_);

    positions_.resize(3, static_cast<Eigen::Index>(side) * side);
    const double half = 0.5 * (side - 1);
    for (int ix = 0; ix < side; ++ix) {
        for (int iy = 0; iy < side; ++iy) {
            positions_.col(ix * side + iy) =
                center_ + (ix - half) * spacing * x_axis_ + (iy - half) * spacing * y_axis_;
        }
    }
}

Vec3 direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

namespace {

bool ratio_matches(double d_rx, double d_tx, double expected) {
    return std::abs(d_rx / d_tx - expected) <= 1e-9 * expected;
}

} // namespace

LinkGeometry build_link_geometry(const ScenarioConfig& cfg) {
    validate(cfg);
    std::vector<std::string> warnings;

    double d_bs_tx = cfg.d_bs_tx, d_bs_rx = cfg.d_bs_rx;
    double d_ue_tx = cfg.d_ue_tx, d_ue_rx = cfg.d_ue_rx;
    const bool bs_ok = ratio_matches(d_bs_rx, d_bs_tx, cfg.f1 / cfg.f2);
    const bool ue_ok = ratio_matches(d_ue_rx, d_ue_tx, cfg.f2 / cfg.f1);
    if (!bs_ok || !ue_ok) {
        // The BS transmits at f1 and receives at f2; the UE does the reverse.
        d_bs_tx = 0.5 * wavelength(cfg.f1);
        d_bs_rx = d_bs_tx * cfg.f1 / cfg.f2;
        d_ue_rx = 0.5 * wavelength(cfg.f1);
        d_ue_tx = d_ue_rx * cfg.f1 / cfg.f2;
        warnings.push_back(
            "configured element spacings violate d_rx/d_tx = f_tx/f_rx; using half-wavelength "
            "spacings (bs_tx=ue_rx=" +
            std::to_string(d_bs_tx * 100.0) + " cm, bs_rx=ue_tx=" + std::to_string(d_bs_rx * 100.0) +
            " cm)");
    }

    const double theta = deg_to_rad(cfg.elevation_deg);
    const double phi = deg_to_rad(cfg.azimuth_deg);
    const Vec3 u = direction(theta, phi);

    const Vec3 bs_center = Vec3::Zero();
    const Vec3 bs_boresight = Vec3::UnitZ();
    const Vec3 bs_x = Vec3::UnitX();

    const Vec3 ue_center = cfg.link_length * u;
    const Vec3 ue_boresight = -u;
    // Global x projected into the UE plane; never degenerate for theta < 90 deg.
    const Vec3 ue_x = Vec3::UnitX() - Vec3::UnitX().dot(ue_boresight) * ue_boresight;

    return LinkGeometry{
        PlanarArray(cfg.m_side, d_bs_tx, bs_center, bs_boresight, bs_x),
        PlanarArray(cfg.m_side, d_bs_rx, bs_center, bs_boresight, bs_x),
        PlanarArray(cfg.n_side, d_ue_tx, ue_center, ue_boresight, ue_x),
        PlanarArray(cfg.n_side, d_ue_rx, ue_center, ue_boresight, ue_x),
        cfg.link_length,
        theta,
        phi,
        std::move(warnings),
    };
}

Eigen::MatrixXd pairwise_distances(const PlanarArray& a, const PlanarArray& b) {
    Eigen::MatrixXd d(a.size(), b.size());
    const auto& pa = a.positions();
    const auto& pb = b.positions();
    for (Eigen::Index j = 0; j < pb.cols(); ++j) {
        for (Eigen::Index i = 0; i < pa.cols(); ++i) {
            const double r = (pa.col(i) - pb.col(j)).norm();
            if (!(r > 0.0)) {
                throw GeometryError("coincident elements at index pair (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ")");
            }
            d(i, j) = r;
        }
    }
    return d;
}

Eigen::VectorXcd steering_vector(int side, double spacing, double wavelength, double theta, double phi) {
    const double k = 2.0 * std::numbers::pi / wavelength;
    const double ux = k * spacing * std::sin(theta) * std::cos(phi);
    const double uy = k * spacing * std::sin(theta) * std::sin(phi);
    Eigen::VectorXcd ax(side), ay(side);
    for (int i = 0; i < side; ++i) {
        ax(i) = std::polar(1.0, i * ux);
        ay(i) = std::polar(1.0, i * uy);
    }
    Eigen::VectorXcd a(static_cast<Eigen::Index>(side) * side);
    for (int i = 0; i < side; ++i) {
        a.segment(static_cast<Eigen::Index>(i) * side, side) = ax(i) * ay;
    }
    return a;
}

void write_geometry_csv(std::ostream& out, const LinkGeometry& geom) {
    CsvWriter csv(out, {"array_id", "index_x", "index_y", "x", "y", "z"});
    const std::pair<const char*, const PlanarArray*> arrays[] = {
        {"bs_tx", &geom.bs_tx}, {"bs_rx", &geom.bs_rx}, {"ue_tx", &geom.ue_tx}, {"ue_rx", &geom.ue_rx}};
    for (const auto& [name, arr] : arrays) {
        for (int ix = 0; ix < arr->side(); ++ix) {
            for (int iy = 0; iy < arr->side(); ++iy) {
                const Vec3 p = arr->position(ix * arr->side() + iy);
                csv.row(name, ix, iy, p.x(), p.y(), p.z());
            }
        }
    }
}

} // namespace rbisac
