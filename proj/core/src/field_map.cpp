// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#include "rbisac/field_map.hpp"

#include "rbisac/channel.hpp"
#include "rbisac/config.hpp"
#include "rbisac/csv.hpp"
#include "rbisac/geometry.hpp"
#include "rbisac/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace rbisac {

std::string to_string(MapPlane plane) {
    switch (plane) {
    case MapPlane::xoz: return "xoz";
    case MapPlane::yoz: return "yoz";
    case MapPlane::xoy: return "xoy";
    }
    return "xoz";
}

MapPlane parse_map_plane(const std::string& text) {
    if (text == "xoz") return MapPlane::xoz;
    if (text == "yoz") return MapPlane::yoz;
    if (text == "xoy") return MapPlane::xoy;
    throw std::invalid_argument("unknown map plane '" + text + "' (expected xoz, yoz or xoy)");
}

namespace {

const char* u_name(MapPlane p) { return p == MapPlane::yoz ? "y" : "x"; }
const char* v_name(MapPlane p) { return p == MapPlane::xoy ? "y" : "z"; }

Eigen::Vector3d to_world(const MapSpec& s, double u, double v) {
    switch (s.plane) {
    case MapPlane::xoz: return {u, s.offset, v};
    case MapPlane::yoz: return {s.offset, u, v};
    case MapPlane::xoy: return {u, v, s.offset};
    }
    return {u, s.offset, v};
}

} // namespace

Eigen::Vector3d FieldMap::point(int iu, int iv) const { return to_world(spec, spec.u(iu), spec.v(iv)); }

PlanePoint project(const MapSpec& spec, const Eigen::Vector3d& p) {
    switch (spec.plane) {
    case MapPlane::xoz: return {p.x(), p.z()};
    case MapPlane::yoz: return {p.y(), p.z()};
    case MapPlane::xoy: return {p.x(), p.y()};
    }
    return {p.x(), p.z()};
}

MapSpec default_map_spec(const LinkGeometry& geom) {
    MapSpec spec;
    const Vec3 ue = geom.ue_tx.center();
    spec.u_min = std::min(-1.0, ue.x() - 0.5);
    spec.u_max = std::max(1.0, ue.x() + 0.5);
    spec.v_min = 0.0;
    spec.v_max = geom.link_length + 0.5;
    return spec;
}

FieldMap compute_field_map(const PlanarArray& tx, const Eigen::VectorXcd& amplitudes, double carrier,
                           const MapSpec& spec, double g_max, int workers) {
    if (amplitudes.size() != tx.size()) {
        throw std::invalid_argument("amplitude vector length does not match the array element count");
    }
    if (spec.nu < 1 || spec.nv < 1) throw std::invalid_argument("field map grid must be at least 1 x 1");

    FieldMap map;
    map.spec = spec;
    map.carrier = carrier;
    map.intensity = Eigen::MatrixXd::Zero(spec.nv, spec.nu);
    map.skipped = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(spec.nv, spec.nu, false);

    const double k = 2.0 * std::numbers::pi / wavelength(carrier);
    const auto& pos = tx.positions();
    const Vec3 bore = tx.boresight();
    const double min_distance = 1e-9 * std::max(1.0, tx.spacing());

    parallel_for(
        static_cast<std::size_t>(spec.nv),
        [&](std::size_t row) {
            const int iv = static_cast<int>(row);
            for (int iu = 0; iu < spec.nu; ++iu) {
                const Eigen::Vector3d p = map.point(iu, iv);
                std::complex<double> field{0.0, 0.0};
                bool coincident = false;
                for (Eigen::Index m = 0; m < pos.cols(); ++m) {
                    const Vec3 d = p - pos.col(m);
                    const double r = d.norm();
                    if (r < min_distance) {
                        coincident = true;
                        break;
                    }
                    const double g = element_gain_from_cos(d.dot(bore) / r, g_max);
                    if (g <= 0.0) continue;
                    field += amplitudes(m) * std::sqrt(g) * std::polar(1.0 / r, k * r);
                }
                if (coincident) {
                    map.skipped(iv, iu) = true;
                } else {
                    map.intensity(iv, iu) = std::norm(field);
                }
            }
        },
        workers);

    double peak = 0.0;
    for (Eigen::Index j = 0; j < map.intensity.rows(); ++j) {
        for (Eigen::Index i = 0; i < map.intensity.cols(); ++i) {
            if (!map.skipped(j, i)) peak = std::max(peak, map.intensity(j, i));
        }
    }
    map.peak_raw = peak;
    if (peak > 0.0) map.intensity /= peak;
    for (Eigen::Index j = 0; j < map.intensity.rows(); ++j) {
        for (Eigen::Index i = 0; i < map.intensity.cols(); ++i) {
            if (map.skipped(j, i)) map.intensity(j, i) = 1.0;
        }
    }
    return map;
}

PlanePoint centroid(const FieldMap& map) {
    double w = 0.0, su = 0.0, sv = 0.0;
    for (int iv = 0; iv < map.spec.nv; ++iv) {
        for (int iu = 0; iu < map.spec.nu; ++iu) {
            if (map.skipped(iv, iu)) continue;
            const double x = map.intensity(iv, iu);
            w += x;
            su += x * map.spec.u(iu);
            sv += x * map.spec.v(iv);
        }
    }
    if (w <= 0.0) return {0.5 * (map.spec.u_min + map.spec.u_max), 0.5 * (map.spec.v_min + map.spec.v_max)};
    return {su / w, sv / w};
}

PlanePoint peak_location(const FieldMap& map) {
    double best = -1.0;
    PlanePoint at{map.spec.u(0), map.spec.v(0)};
    for (int iv = 0; iv < map.spec.nv; ++iv) {
        for (int iu = 0; iu < map.spec.nu; ++iu) {
            if (map.skipped(iv, iu)) continue;
            if (map.intensity(iv, iu) > best) {
                best = map.intensity(iv, iu);
                at = {map.spec.u(iu), map.spec.v(iv)};
            }
        }
    }
    return at;
}

double distance_to_segment(const PlanePoint& p, const PlanePoint& a, const PlanePoint& b) {
    const double du = b.u - a.u;
    const double dv = b.v - a.v;
    const double len2 = du * du + dv * dv;
    double t = len2 > 0.0 ? ((p.u - a.u) * du + (p.v - a.v) * dv) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.u - (a.u + t * du), p.v - (a.v + t * dv));
}

void write_field_csv(std::ostream& out, const FieldMap& map) {
    const auto plane = map.spec.plane;
    CsvWriter csv(out, {u_name(plane), v_name(plane), "intensity"});
    for (int iu = 0; iu < map.spec.nu; ++iu) {
        for (int iv = 0; iv < map.spec.nv; ++iv) {
            csv.row(map.spec.u(iu), map.spec.v(iv), map.intensity(iv, iu));
        }
    }
}

void write_field_matrix(std::ostream& out, const FieldMap& map) {
    const auto& s = map.spec;
    out << "# plane=" << to_string(s.plane) << " offset=" << CsvWriter::format(s.offset) << " nu=" << s.nu
        << " nv=" << s.nv << ' ' << u_name(s.plane) << "=[" << CsvWriter::format(s.u_min) << ','
        << CsvWriter::format(s.u_max) << "] " << v_name(s.plane) << "=[" << CsvWriter::format(s.v_min) << ','
        << CsvWriter::format(s.v_max) << "] carrier=" << CsvWriter::format(map.carrier);
    if (!map.label.empty()) out << " label=" << map.label;
    out << '\n';
    for (int iv = 0; iv < s.nv; ++iv) {
        for (int iu = 0; iu < s.nu; ++iu) {
            if (iu > 0) out << ' ';
            out << CsvWriter::format(map.intensity(iv, iu));
        }
        out << '\n';
    }
}

} // namespace rbisac
