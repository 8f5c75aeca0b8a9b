#pragma once

#include "freqstokes/mesh.hpp"

namespace freqstokes {

/// Tetrahedral mesh of a circular cylinder (axis +z, inlet at z=0) with
/// patches "inlet", "outlet", "wall".
///
/// Disc layout: one centre node plus n_azimuthal*k nodes on ring k of radius
/// k*radius/n_radial, fan/zipper triangulated; the disc is extruded in
/// n_axial layers and every prism is split into 3 tetrahedra along the quad
/// diagonals touching the lowest global node index, so adjacent prisms share
/// conforming faces. Node count: (n_axial+1) * (1 + n_azimuthal*n_radial*(n_radial+1)/2);
/// element count: 3*n_azimuthal*n_radial^2*n_axial.
Mesh generate_pipe(double radius, double length, int n_radial, int n_azimuthal, int n_axial);

/// Picks (n_radial, n_azimuthal, n_axial) to approximate a target element
/// count at a fixed axial/radial spacing ratio, then calls generate_pipe.
Mesh generate_pipe_target(double radius, double length, int target_elements);

struct PipeCounts {
    int n_radial, n_azimuthal, n_axial;
};
PipeCounts pipe_counts_for_target(double radius, double length, int target_elements);

/// Triangle mesh of the rectangle [0,length] x [0,height] with patches
/// "inlet" (x=0), "outlet" (x=length), "wall" (y=0 and y=height). Each grid
/// cell is split into two triangles along the diagonal through its lowest
/// global node index.
Mesh generate_channel(double height, double length, int n_y, int n_x);

} // namespace freqstokes
