#pragma once

#include <cstdint>
#include <string>

#include "hypent/ccentropy.hpp"
#include "hypent/groups.hpp"
#include "hypent/limitset.hpp"

// Shipped test fixtures, built in code so every consumer sees the same data.
namespace hypent::fixtures {

// Four intervals on the real line: the boundary arcs of half-width theta seen
// from i, centred at angles pi/4, -3pi/4, 3pi/4, -pi/4. Pairs: first -> second,
// third -> fourth.
SchottkySpec symmetric_schottky(double theta = 0.5);
// A point of the fundamental domain for symmetric_schottky.
HalfSpacePoint schottky_base();

// Single pair D = (-2, 1), D' = (2, 1); generator [[2, 3], [1, 2]].
SchottkySpec cyclic_schottky();

// Both endpoints of every depth-`depth` interval of the middle-third construction.
PointCloud cantor_cloud(int depth);
// Product C x C in the plane from the endpoint clouds.
PointCloud cantor_product_cloud(int depth);
// Points m * spacing for m = 0..1/spacing.
PointCloud interval_cloud(double spacing);

// Vertical ray (0, 2^k), -ray_depth <= k < 30, plus a horoball lattice based
// at infinity at heights 2^j, j >= 30, clipped to the ball of radius
// `lattice_radius` about (0, 2^30). Lattice points carry tag 1; o = (0, 1).
UDSet cusp_uds(int ray_depth = 20, double lattice_radius = 18);

struct TightFixture {
    PointCloud cloud;
    UDSet uds;
};

// Integers in [-width, width]; dyadic set below height 1 (levels 1..k_max)
// and, tagged as one horoball, lattice points (m 2^k, 2^k) with |x| + t <= width.
TightFixture horoball_tight_fixture(int width = 64, int k_max = 8);

}  // namespace hypent::fixtures
