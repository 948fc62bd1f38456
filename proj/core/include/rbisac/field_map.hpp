// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

namespace rbisac {

class PlanarArray;
struct LinkGeometry;

enum class MapPlane { xoz, yoz, xoy };

std::string to_string(MapPlane plane);
MapPlane parse_map_plane(const std::string& text);

/// Regular grid on an axis-aligned plane. `u` is the first named axis of the
/// plane and `v` the second (x/z for xoz); `offset` fixes the third coordinate.
struct MapSpec {
    MapPlane plane = MapPlane::xoz;
    double offset = 0.0;
    int nu = 200;
    int nv = 200;
    double u_min = -1.0;
    double u_max = 1.0;
    double v_min = 0.0;
    double v_max = 3.5;

    double du() const { return nu > 1 ? (u_max - u_min) / (nu - 1) : 0.0; }
    double dv() const { return nv > 1 ? (v_max - v_min) / (nv - 1) : 0.0; }
    double u(int i) const { return u_min + i * du(); }
    double v(int j) const { return v_min + j * dv(); }
};

/// xoz plane through the link, z in [0, l + 0.5], x spanning [-1, 1] widened
/// to keep the UE at least 0.5 m inside the edge.
MapSpec default_map_spec(const LinkGeometry& geom);

struct FieldMap {
    MapSpec spec;
    double carrier = 0.0;
    std::string label;

    /// nv x nu, normalized to peak 1 (all zero if nothing radiates).
    Eigen::MatrixXd intensity;
    /// Grid points that coincide with an element. They are excluded from the
    /// normalization and set to 1.
    Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> skipped;
    /// Largest unnormalized |field|^2 over non-skipped points.
    double peak_raw = 0.0;

    Eigen::Vector3d point(int iu, int iv) const;
};

/// field(p) = sum_m a_m sqrt(G(angle_mp)) exp(j k l_mp) / l_mp, intensity |field|^2.
/// Rows are evaluated in parallel; the result does not depend on worker count.
FieldMap compute_field_map(const PlanarArray& tx, const Eigen::VectorXcd& amplitudes, double carrier,
                           const MapSpec& spec, double g_max, int workers = 0);

struct PlanePoint {
    double u = 0.0;
    double v = 0.0;
};

/// Intensity-weighted mean position, skipped points excluded.
PlanePoint centroid(const FieldMap& map);

/// Grid location of the maximum over non-skipped points.
PlanePoint peak_location(const FieldMap& map);

/// Distance from (u, v) to the segment a-b in the map plane.
double distance_to_segment(const PlanePoint& p, const PlanePoint& a, const PlanePoint& b);

/// Projects a 3-D point onto the map plane coordinates.
PlanePoint project(const MapSpec& spec, const Eigen::Vector3d& p);

/// CSV with columns named after the plane axes (x,z,intensity for xoz), u slowest.
void write_field_csv(std::ostream& out, const FieldMap& map);

/// Text matrix: a '#' header line with the grid description, then nv lines of
/// nu space-separated values (v ascending).
void write_field_matrix(std::ostream& out, const FieldMap& map);

} // namespace rbisac
