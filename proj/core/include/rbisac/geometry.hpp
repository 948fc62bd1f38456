// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The rbisac Authors

#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbisac {

struct ScenarioConfig;

using Vec3 = Eigen::Vector3d;

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Square grid of side x side elements in the plane normal to `boresight`.
///
/// Element p = ix * side + iy sits at
///   center + (ix - (side-1)/2) * spacing * x_axis + (iy - (side-1)/2) * spacing * y_axis
/// with y_axis = boresight x x_axis. The x index varies slowest, matching the
/// a_x (x) a_y ordering of steering_vector().
class PlanarArray {
public:
    PlanarArray(int side, double spacing, const Vec3& center, const Vec3& boresight, const Vec3& x_axis);

    int side() const noexcept { return side_; }
    int size() const noexcept { return side_ * side_; }
    double spacing() const noexcept { return spacing_; }
    const Vec3& center() const noexcept { return center_; }
    const Vec3& boresight() const noexcept { return boresight_; }
    const Vec3& x_axis() const noexcept { return x_axis_; }
    const Vec3& y_axis() const noexcept { return y_axis_; }

    /// 3 x size() matrix of element positions.
    const Eigen::Matrix3Xd& positions() const noexcept { return positions_; }
    Vec3 position(int index) const { return positions_.col(index); }

private:
    int side_;
    double spacing_;
    Vec3 center_;
    Vec3 boresight_;
    Vec3 x_axis_;
    Vec3 y_axis_;
    Eigen::Matrix3Xd positions_;
};

/// BS at the origin facing +z; UE at link_length along (theta, phi), facing
/// back toward the BS. Angles in radians.
struct LinkGeometry {
    PlanarArray bs_tx;
    PlanarArray bs_rx;
    PlanarArray ue_tx;
    PlanarArray ue_rx;
    double link_length;
    double elevation;
    double azimuth;
    std::vector<std::string> warnings;
};

/// Unit vector for elevation theta (from +z) and azimuth phi (from +x).
Vec3 direction(double theta, double phi);

/// Builds the four arrays. Spacings come from the config when they satisfy
/// the retrodirective rule d_rx / d_tx = f_tx / f_rx on both ends; otherwise
/// half-wavelength spacings are substituted and a warning is recorded.
LinkGeometry build_link_geometry(const ScenarioConfig& cfg);

/// |a| x |b| matrix of element-to-element distances. Throws GeometryError if
/// any pair coincides.
Eigen::MatrixXd pairwise_distances(const PlanarArray& a, const PlanarArray& b);

/// side^2 plane-wave response, entries exp{j k d (i sin(theta)cos(phi) + q sin(theta)sin(phi))}
/// with i the slow index.
Eigen::VectorXcd steering_vector(int side, double spacing, double wavelength, double theta, double phi);

/// CSV of element positions: array_id,index_x,index_y,x,y,z.
void write_geometry_csv(std::ostream& out, const LinkGeometry& geom);

} // namespace rbisac
