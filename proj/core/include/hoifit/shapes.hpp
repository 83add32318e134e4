#pragma once

#include "hoifit/mesh.hpp"

namespace hoifit {

/// Icosphere: subdivided icosahedron, watertight, outward winding.
/// Subdivision s has 20 * 4^s faces.
TriMesh make_icosphere(double radius, int subdivisions, const Vec3& center = Vec3::Zero());

/// Axis-aligned box from half extents, watertight, outward winding
/// (12 triangles).
TriMesh make_box(const Vec3& half_extents, const Vec3& center = Vec3::Zero());

/// Capped tube along +z from z=0 to z=length: an open cylinder of
/// `sides * rings` quads plus end fans. Watertight.
TriMesh make_capped_tube(double radius, double length, int sides, int rings);

}  // namespace hoifit
