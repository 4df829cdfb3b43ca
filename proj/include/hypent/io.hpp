#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hypent/ccentropy.hpp"
#include "hypent/groups.hpp"
#include "hypent/limitset.hpp"
#include "hypent/pantsgraph.hpp"

namespace hypent::io {

// Shortest text that reads back to the same double.
std::string format_double(double x);

// Point clouds: one point per line, "x" (n = 1) or "x,y" (n = 2). Blank lines
// and lines starting with '#' are skipped, and so is a non-numeric first line
// (a header). n is taken from the first data line.
PointCloud read_cloud_csv(std::istream& in);
PointCloud read_cloud_csv(const std::string& path);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

// Uniformly distributed sets: "x,t" or "x,y,t" per line, with the base point
// first. density_M and separation_m are recomputed by the caller.
UDSet read_uds_csv(std::istream& in, int n);
UDSet read_uds_csv(const std::string& path, int n);
void write_uds_csv(std::ostream& out, const UDSet& uds);
void write_measure_csv(std::ostream& out, const UDSet& uds, const AtomicMeasure& m);
void write_orbit_csv(std::ostream& out, const std::vector<OrbitRecord>& records);

// {"n": 1, "pairs": [{"center": c, "radius": r, "center2": c2, "radius2": r2}]}
// with centres given as numbers or [re, im].
SchottkySpec read_group_json(std::istream& in);
SchottkySpec read_group_json(const std::string& path);

// Edge list: "u v" per edge, "funnel u" per funnel, '#' comments.
PantsGraph read_graph(std::istream& in, double ell, int max_valency = 3);
PantsGraph read_graph(const std::string& path, double ell, int max_valency = 3);

}  // namespace hypent::io
