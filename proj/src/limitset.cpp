#include "hypent/limitset.hpp"

#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>
#include <cmath>
#include <limits>

namespace hypent {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

namespace {

using BgPoint = bg::model::point<double, 2, bg::cs::cartesian>;
using BgBox = bg::model::box<BgPoint>;

double extent_of(const PointCloud& c) {
    const auto [lo, hi] = c.bounding_box();
    return std::max(hi[0] - lo[0], hi[1] - lo[1]);
}

// Image of the circle |z - z0| = r under m; the pole of m must lie outside it.
std::pair<Complex, double> image_circle(const Isometry& m, Complex z0, double r) {
    const Complex czd = m.c() * z0 + m.d();
    const double den = std::norm(czd) - std::norm(m.c()) * r * r;
    const Complex centre = ((m.a() * z0 + m.b()) * std::conj(czd) - m.a() * std::conj(m.c()) * r * r) / den;
    return {centre, r / std::abs(den)};
}

std::vector<double> sorted_first_coords(const PointCloud& c) {
    std::vector<double> xs;
    xs.reserve(c.points.size());
    for (const auto& p : c.points) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

double median_nn_spacing(const PointCloud& cloud) {
    if (cloud.n == 1) {
        auto xs = sorted_first_coords(cloud);
        if (xs.size() < 2) return 0;
        std::vector<double> nn(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double d = std::numeric_limits<double>::infinity();
            if (i > 0) d = std::min(d, xs[i] - xs[i - 1]);
            if (i + 1 < xs.size()) d = std::min(d, xs[i + 1] - xs[i]);
            nn[i] = d;
        }
        std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
        return nn[nn.size() / 2];
    }
    // Subsampled nearest distance excluding the point itself.
    std::vector<BgPoint> pts;
    pts.reserve(cloud.points.size());
    for (const auto& p : cloud.points) pts.emplace_back(p[0], p[1]);
    bgi::rtree<BgPoint, bgi::rstar<16>> tree(pts.begin(), pts.end());
    const std::size_t stride = std::max<std::size_t>(1, pts.size() / 4000);
    std::vector<double> nn;
    for (std::size_t i = 0; i < pts.size(); i += stride) {
        std::vector<BgPoint> out;
        tree.query(bgi::nearest(pts[i], 2), std::back_inserter(out));
        double d = std::numeric_limits<double>::infinity();
        for (const auto& q : out) {
            const double e = bg::distance(q, pts[i]);
            if (e > 0) d = std::min(d, e);
        }
        if (std::isfinite(d)) nn.push_back(d);
    }
    if (nn.empty()) return 0;
    std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
    return nn[nn.size() / 2];
}

}  // namespace

void PointCloud::validate() const {
    if (n != 1 && n != 2) throw DomainError("cloud dimension must be 1 or 2");
    for (const auto& p : points) {
        if (!std::isfinite(p[0]) || !std::isfinite(p[1])) throw DomainError("cloud point not finite");
        if (n == 1 && p[1] != 0) throw DomainError("n = 1 cloud point has a second coordinate");
    }
}

std::pair<Point2, Point2> PointCloud::bounding_box() const {
    if (points.empty()) throw DomainError("empty cloud has no bounding box");
    Point2 lo = points[0], hi = points[0];
    for (const auto& p : points)
        for (int i = 0; i < 2; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
        }
    return {lo, hi};
}

PointCloud sample_limit_set(const SchottkySpec& spec, int depth, SampleMode mode, const HalfSpacePoint& base,
                            double min_distance) {
    if (depth < 1 || depth > 16) throw DomainError("sampling depth must be in [1, 16]");
    const auto gens = schottky_group(spec);
    const int k = static_cast<int>(gens.size());
    std::vector<int> letters;
    for (int i = 1; i <= k; ++i) {
        letters.push_back(i);
        letters.push_back(-i);
    }
    auto iso = [&](int l) { return l > 0 ? gens[l - 1] : gens[-l - 1].inverse(); };
    const Isometry to_origin = Isometry::recenter(base.base, base.height);

    struct Part {
        std::vector<Point2> pts;
        double resolution = 0;
    };
    std::vector<Part> parts(letters.size());
    parallel_for(letters.size(), [&](std::size_t first) {
        Part& part = parts[first];
        struct Frame {
            Isometry prefix;  // product of all letters but the last
            Isometry full;
            int last;
            int len;
        };
        std::vector<Frame> stack{{Isometry(), iso(letters[first]), letters[first], 1}};
        while (!stack.empty()) {
            Frame f = std::move(stack.back());
            stack.pop_back();
            if (f.len == depth) {
                const auto disk = letter_disk(spec, f.last);
                part.resolution = std::max(part.resolution, 2 * image_circle(f.prefix, disk.first, disk.second).second);
                Complex x;
                if (mode == SampleMode::FixedPoints) {
                    x = f.full.attracting_fixed_point().plane();
                } else {
                    const HalfSpacePoint p = f.full.apply(base);
                    if (dist(p, base) < min_distance) continue;
                    const BallPoint b = ball_from_half(to_origin.apply(p), spec.n);
                    const Complex y = BoundaryPoint::on_sphere(spec.n, radial_direction(b)).plane();
                    x = base.base + base.height * y;
                }
                part.pts.push_back({x.real(), spec.n == 2 ? x.imag() : 0.0});
                continue;
            }
            // Push in reverse so letters come off the stack in order.
            for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
                if (*it == -f.last) continue;
                stack.push_back({f.full, f.full * iso(*it), *it, f.len + 1});
            }
        }
    });
    PointCloud cloud;
    cloud.n = spec.n;
    cloud.depth = depth;
    cloud.generator = std::string("schottky:") + (mode == SampleMode::FixedPoints ? "fixed-points" : "projections");
    cloud.elementary = k == 1;
    for (auto& p : parts) {
        cloud.resolution = std::max(cloud.resolution, p.resolution);
        cloud.points.insert(cloud.points.end(), p.pts.begin(), p.pts.end());
    }
    if (mode == SampleMode::FixedPoints && cloud.elementary) {
        // Every power of the generator shares the same two fixed points.
        std::sort(cloud.points.begin(), cloud.points.end());
        cloud.points.erase(std::unique(cloud.points.begin(), cloud.points.end(),
                                       [](const Point2& a, const Point2& b) {
                                           return std::abs(a[0] - b[0]) + std::abs(a[1] - b[1]) <
                                                  1e-12 * (1 + std::abs(a[0]) + std::abs(a[1]));
                                       }),
                           cloud.points.end());
    }
    return cloud;
}

GridCounts box_counts(const PointCloud& cloud, int k_min, int k_max, int offsets) {
    if (cloud.points.empty()) throw DomainError("box counts of an empty cloud");
    if (k_min > k_max) throw DomainError("empty scale range");
    if (k_max > 50 || k_min < -50) throw DomainError("scale out of range");
    if (offsets < 1 || offsets > 64) throw DomainError("grid offsets must lie in [1, 64]");
    GridCounts g;
    g.n = cloud.n;
    g.points = cloud.points.size();
    g.resolution = cloud.resolution;
    g.extent = extent_of(cloud);
    g.offsets = offsets;
    const std::size_t scales = static_cast<std::size_t>(k_max - k_min + 1);
    std::vector<std::uint64_t> result(scales * static_cast<std::size_t>(offsets));
    parallel_for(result.size(), [&](std::size_t i) {
        const int k = k_min + static_cast<int>(i / static_cast<std::size_t>(offsets));
        const double shift = static_cast<double>(i % static_cast<std::size_t>(offsets)) / offsets;
        const double scale = std::ldexp(1.0, k);
        std::vector<std::pair<std::int64_t, std::int64_t>> keys;
        keys.reserve(cloud.points.size());
        for (const auto& p : cloud.points)
            keys.emplace_back(static_cast<std::int64_t>(std::floor(p[0] * scale + shift)),
                              cloud.n == 2 ? static_cast<std::int64_t>(std::floor(p[1] * scale + shift)) : 0);
        std::sort(keys.begin(), keys.end());
        result[i] = static_cast<std::uint64_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
    });
    for (std::size_t s = 0; s < scales; ++s) {
        g.counts.emplace_back(k_min + static_cast<int>(s), result[s * offsets]);
        double acc = 0;
        for (int o = 0; o < offsets; ++o) acc += std::log(static_cast<double>(result[s * offsets + o]));
        g.mean_log_counts.push_back(acc / offsets);
    }
    return g;
}

DimensionEstimate upper_box_dim(const GridCounts& counts, std::optional<std::pair<int, int>> window) {
    DimensionEstimate e;
    e.method = "upper-box";
    for (const auto& [k, N] : counts.counts) e.table.emplace_back(k, static_cast<double>(N));
    int lo, hi;
    if (window) {
        std::tie(lo, hi) = *window;
    } else {
        const double cap = static_cast<double>(counts.points) / 4.0;
        const double finest =
            counts.resolution > 0 ? std::floor(-std::log2(counts.resolution)) : std::numeric_limits<double>::infinity();
        hi = std::numeric_limits<int>::min();
        for (const auto& [k, N] : counts.counts)
            if (static_cast<double>(N) <= cap && k <= finest) hi = std::max(hi, k);
        if (hi == std::numeric_limits<int>::min())
            throw ResolutionError("every scale is saturated; sample the set more deeply");
        // Start halfway between the scale of the whole cloud and k_hi so the
        // window is unchanged by dyadic rescaling of the cloud.
        const int coarse = counts.extent > 0 ? static_cast<int>(std::floor(-std::log2(counts.extent)))
                                             : counts.counts.front().first;
        lo = coarse + (hi - coarse + 1) / 2;
    }
    std::vector<double> xs, ys;
    double rmin = std::numeric_limits<double>::infinity(), rmax = -rmin;
    const bool averaged = counts.mean_log_counts.size() == counts.counts.size();
    for (std::size_t i = 0; i < counts.counts.size(); ++i) {
        const auto [k, N] = counts.counts[i];
        if (k < lo || k > hi) continue;
        const double logN = averaged ? counts.mean_log_counts[i] : std::log(static_cast<double>(N));
        xs.push_back(k * std::log(2.0));
        ys.push_back(logN);
        if (k > 0) {
            const double r = logN / (k * std::log(2.0));
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
    }
    if (xs.size() < 4)
        throw ResolutionError("fewer than 4 unsaturated scales (window " + std::to_string(lo) + ".." +
                              std::to_string(hi) + "); sample the set more deeply");
    const LineFit f = fit_line(xs, ys);
    e.raw_slope = f.slope;
    e.value = std::clamp(f.slope, 0.0, static_cast<double>(counts.n));
    e.stderr_value = f.stderr_slope;
    e.window_lo = lo;
    e.window_hi = hi;
    e.ratio_min = std::isfinite(rmin) ? rmin : 0;
    e.ratio_max = std::isfinite(rmax) ? rmax : 0;
    return e;
}

struct NearestIndex::Impl {
    int n = 1;
    std::vector<double> xs;
    bgi::rtree<BgPoint, bgi::rstar<16>> tree;
};

NearestIndex::NearestIndex(const PointCloud& cloud) : impl_(std::make_unique<Impl>()) {
    if (cloud.points.empty()) throw DomainError("nearest index over an empty cloud");
    impl_->n = cloud.n;
    if (cloud.n == 1) {
        impl_->xs = sorted_first_coords(cloud);
    } else {
        std::vector<BgPoint> pts;
        pts.reserve(cloud.points.size());
        for (const auto& p : cloud.points) pts.emplace_back(p[0], p[1]);
        impl_->tree = bgi::rtree<BgPoint, bgi::rstar<16>>(pts.begin(), pts.end());
    }
}

NearestIndex::~NearestIndex() = default;

std::size_t NearestIndex::size() const { return impl_->n == 1 ? impl_->xs.size() : impl_->tree.size(); }

double NearestIndex::distance(const Point2& q) const {
    if (impl_->n == 1) return distance_to_box(q, q);
    std::vector<BgPoint> out;
    const BgPoint p(q[0], q[1]);
    impl_->tree.query(bgi::nearest(p, 1), std::back_inserter(out));
    return bg::distance(p, out.front());
}

double NearestIndex::distance_to_box(const Point2& lo, const Point2& hi) const {
    if (impl_->n == 1) {
        const auto& xs = impl_->xs;
        auto it = std::lower_bound(xs.begin(), xs.end(), lo[0]);
        if (it != xs.end() && *it <= hi[0]) return 0;
        double d = std::numeric_limits<double>::infinity();
        if (it != xs.end()) d = *it - hi[0];
        if (it != xs.begin()) d = std::min(d, lo[0] - *(it - 1));
        return d;
    }
    const BgBox box(BgPoint(lo[0], lo[1]), BgPoint(hi[0], hi[1]));
    std::vector<BgPoint> out;
    impl_->tree.query(bgi::nearest(box, 1), std::back_inserter(out));
    return bg::distance(out.front(), box);
}

namespace {

// Max over y in [a, b] of the distance from y to the sorted set xs (n = 1).
class GapOracle {
public:
    explicit GapOracle(std::vector<double> xs) : xs_(std::move(xs)) {
        const std::size_t m = xs_.size() > 1 ? xs_.size() - 1 : 0;
        if (m == 0) return;
        table_.emplace_back(m);
        for (std::size_t i = 0; i < m; ++i) table_[0][i] = xs_[i + 1] - xs_[i];
        for (std::size_t w = 1; (std::size_t{1} << w) <= m; ++w) {
            const std::size_t len = m - (std::size_t{1} << w) + 1;
            table_.emplace_back(len);
            for (std::size_t i = 0; i < len; ++i)
                table_[w][i] = std::max(table_[w - 1][i], table_[w - 1][i + (std::size_t{1} << (w - 1))]);
        }
    }

    double max_hole(double a, double b) const {
        const auto& xs = xs_;
        double best = 0;
        if (a < xs.front()) best = std::max(best, xs.front() - a);
        if (b > xs.back()) best = std::max(best, b - xs.back());
        if (xs.size() < 2) return best;
        // Gap i spans (xs[i], xs[i+1]); it meets [a, b] iff xs[i+1] > a and xs[i] < b.
        const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(xs.size()) - 1;
        const std::ptrdiff_t p = std::upper_bound(xs.begin(), xs.end(), a) - xs.begin();
        const std::ptrdiff_t q = std::lower_bound(xs.begin(), xs.end(), b) - xs.begin();
        const std::ptrdiff_t i_lo = std::max<std::ptrdiff_t>(p - 1, 0);
        const std::ptrdiff_t i_hi = std::min<std::ptrdiff_t>(q - 1, m - 1);
        if (i_lo > i_hi) return best;
        best = std::max(best, clipped(static_cast<std::size_t>(i_lo), a, b));
        best = std::max(best, clipped(static_cast<std::size_t>(i_hi), a, b));
        if (i_hi - i_lo >= 2)
            best = std::max(best, 0.5 * range_max(static_cast<std::size_t>(i_lo + 1), static_cast<std::size_t>(i_hi - 1)));
        return best;
    }

private:
    double clipped(std::size_t gap, double a, double b) const {
        const double l = xs_[gap], r = xs_[gap + 1];
        const double lo = std::max(l, a), hi = std::min(r, b);
        if (lo > hi) return 0;
        const double mid = 0.5 * (l + r);
        const double y = std::clamp(mid, lo, hi);
        return std::min(y - l, r - y);
    }
    double range_max(std::size_t i, std::size_t j) const {
        std::size_t w = 0;
        while ((std::size_t{2} << w) <= j - i + 1) ++w;
        return std::max(table_[w][i], table_[w][j + 1 - (std::size_t{1} << w)]);
    }

    std::vector<double> xs_;
    std::vector<std::vector<double>> table_;
};

}  // namespace

struct HoleFinder::Impl {
    int n = 1;
    int subdivision = 4;
    std::optional<GapOracle> gaps;
    std::optional<NearestIndex> index;
};

HoleFinder::HoleFinder(const PointCloud& cloud, int grid_subdivision) : impl_(std::make_unique<Impl>()) {
    if (cloud.points.empty()) throw DomainError("hole search over an empty cloud");
    if (grid_subdivision < 1 || grid_subdivision > 10) throw DomainError("grid subdivision must lie in [1, 10]");
    impl_->n = cloud.n;
    impl_->subdivision = grid_subdivision;
    if (cloud.n == 1)
        impl_->gaps.emplace(sorted_first_coords(cloud));
    else
        impl_->index.emplace(cloud);
}

HoleFinder::~HoleFinder() = default;

double HoleFinder::max_hole(const Point2& x, double r, double enough) const {
    if (impl_->n == 1) return impl_->gaps->max_hole(x[0] - r, x[0] + r);
    const NearestIndex& index = *impl_->index;
    const int m = 1 << impl_->subdivision;
    const double pitch = r / m;
    double hole = 0;
    Point2 arg = x;
    for (int i = -m; i <= m && hole < enough; ++i)
        for (int j = -m; j <= m; ++j) {
            if (i * i + j * j > m * m) continue;
            const Point2 y{x[0] + i * pitch, x[1] + j * pitch};
            const double d = index.distance(y);
            if (d > hole) {
                hole = d;
                arg = y;
            }
        }
    // Refine the best candidate by a shrinking pattern search inside the disk.
    for (double step = pitch / 2; step > pitch / 64 && hole < enough; step /= 2) {
        bool moved = true;
        while (moved) {
            moved = false;
            for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
                const Point2 y{arg[0] + dx * step, arg[1] + dy * step};
                if (std::hypot(y[0] - x[0], y[1] - x[1]) > r) continue;
                const double d = index.distance(y);
                if (d > hole) {
                    hole = d;
                    arg = y;
                    moved = true;
                }
            }
        }
    }
    return hole;
}

PorosityResult porosity_estimate(const PointCloud& cloud, const PorosityOptions& opts) {
    if (cloud.points.empty()) throw DomainError("porosity of an empty cloud");
    cloud.validate();
    PorosityResult res;
    const double extent = extent_of(cloud);
    const double spacing = median_nn_spacing(cloud);
    if (extent <= 0 || spacing <= 0) {
        // A single point: every disk around it is almost all hole.
        res.c = 1;
        res.low_confidence = true;
        return res;
    }
    const double r_min = opts.min_radius_factor * spacing;
    std::vector<double> radii;
    for (int j = static_cast<int>(std::floor(std::log2(extent))); std::ldexp(1.0, j) >= r_min; --j)
        radii.push_back(std::ldexp(1.0, j));
    res.r_min = radii.empty() ? 0 : radii.back();
    res.r_max = radii.empty() ? 0 : radii.front();
    if (radii.size() < 3) res.low_confidence = true;
    if (radii.empty()) return res;

    const std::size_t max_centers = opts.max_centers ? opts.max_centers : (cloud.n == 1 ? 2000 : 150);
    const std::size_t stride = std::max<std::size_t>(1, cloud.points.size() / max_centers);
    std::vector<Point2> centers;
    for (std::size_t i = 0; i < cloud.points.size(); i += stride) centers.push_back(cloud.points[i]);
    res.centers = centers.size();
    const HoleFinder holes(cloud, opts.grid_subdivision);

    struct Local {
        double c = std::numeric_limits<double>::infinity();
        Point2 x{};
        double r = 0;
    };
    std::vector<Local> local(centers.size());
    parallel_for(centers.size(), [&](std::size_t ci) {
        Local& best = local[ci];
        for (double r : radii) {
            // A hole of ratio >= best.c cannot lower the minimum; stop searching there.
            const double ratio = std::min(1.0, holes.max_hole(centers[ci], r, best.c * r) / r);
            if (ratio < best.c) {
                best.c = ratio;
                best.x = centers[ci];
                best.r = r;
            }
        }
    });
    Local worst;
    for (const auto& l : local)
        if (l.c < worst.c) worst = l;
    res.c = worst.c;
    res.worst_center = worst.x;
    res.worst_radius = worst.r;
    if (!(res.c > 0)) {
        res.c = 0;
        res.low_confidence = true;
    }
    return res;
}

double default_porosity_constant(int n) { return n * std::pow(4.0, -n); }

double porosity_dim_bound(double c, int n, double C_n) {
    if (!(c >= 0) || c > 1) throw DomainError("porosity constant must lie in [0, 1]");
    if (!(C_n > 0)) throw DomainError("porosity dimension constant must be positive");
    return std::max(0.0, n - C_n * std::pow(c, n));
}

namespace {

struct WhitneyFrame {
    Point2 centre{};
    Point2 lo{}, hi{};
    double extent = 1;
};

WhitneyFrame whitney_frame(const PointCloud& cloud) {
    const auto [lo, hi] = cloud.bounding_box();
    WhitneyFrame f;
    f.centre = {0.5 * (lo[0] + hi[0]), 0.5 * (lo[1] + hi[1])};
    f.lo = lo;
    f.hi = hi;
    f.extent = std::max(hi[0] - lo[0], hi[1] - lo[1]);
    if (f.extent <= 0) f.extent = 1;
    return f;
}

// Counts maximal dyadic cubes Q of [0,1]^n with diam Q <= dist(Q, cloud), after
// mapping the cloud by y = 1/2 + (x - centre) * zoom / (2 * extent).
std::vector<std::uint64_t> whitney_counts(const PointCloud& cloud, const WhitneyFrame& frame, double zoom,
                                          int j_max) {
    PointCloud scaled;
    scaled.n = cloud.n;
    scaled.points.reserve(cloud.points.size());
    const double s = zoom / (2 * frame.extent);
    for (const auto& p : cloud.points)
        scaled.points.push_back(
            {0.5 + (p[0] - frame.centre[0]) * s, cloud.n == 2 ? 0.5 + (p[1] - frame.centre[1]) * s : 0.0});
    const NearestIndex index(scaled);
    // Only the complement inside the cloud's bounding box is decomposed; the
    // unbounded outside adds O(1) cubes per level and no information.
    const Point2 box_lo{0.5 + (frame.lo[0] - frame.centre[0]) * s, 0.5 + (frame.lo[1] - frame.centre[1]) * s};
    const Point2 box_hi{0.5 + (frame.hi[0] - frame.centre[0]) * s, 0.5 + (frame.hi[1] - frame.centre[1]) * s};
    std::vector<std::uint64_t> w(static_cast<std::size_t>(j_max + 1), 0);
    struct Cube {
        int j;
        std::int64_t a, b;
    };
    std::vector<Cube> stack{{0, 0, 0}};
    const double root_n = std::sqrt(static_cast<double>(cloud.n));
    while (!stack.empty()) {
        const Cube q = stack.back();
        stack.pop_back();
        const double side = std::ldexp(1.0, -q.j);
        const Point2 lo{q.a * side, cloud.n == 2 ? q.b * side : 0.0};
        const Point2 hi{lo[0] + side, cloud.n == 2 ? lo[1] + side : 0.0};
        const double cx = lo[0] + side / 2, cy = cloud.n == 2 ? lo[1] + side / 2 : 0.5;
        if (hi[0] <= box_lo[0] || lo[0] >= box_hi[0]) continue;
        if (cloud.n == 2 && (hi[1] <= box_lo[1] || lo[1] >= box_hi[1])) continue;
        const double d = index.distance_to_box(lo, hi);
        if (d >= root_n * side) {
            if (cx > box_lo[0] && cx < box_hi[0] && (cloud.n == 1 || (cy > box_lo[1] && cy < box_hi[1]))) ++w[q.j];
            continue;
        }
        if (q.j == j_max) continue;
        for (int i = 0; i < 2; ++i) {
            if (cloud.n == 1) {
                stack.push_back({q.j + 1, 2 * q.a + i, 0});
            } else {
                for (int k = 0; k < 2; ++k) stack.push_back({q.j + 1, 2 * q.a + i, 2 * q.b + k});
            }
        }
    }
    return w;
}

}  // namespace

std::vector<std::uint64_t> whitney_level_counts(const PointCloud& cloud, int j_max) {
    if (cloud.points.empty()) throw DomainError("Whitney decomposition of an empty cloud");
    if (j_max < 0 || j_max > 40) throw DomainError("Whitney level out of range");
    return whitney_counts(cloud, whitney_frame(cloud), 1.0, j_max);
}

DimensionEstimate whitney_exponent(const PointCloud& cloud, int n, int k_max, const WhitneyOptions& opts) {
    require_dimension(n);
    if (cloud.points.empty()) throw DomainError("Whitney decomposition of an empty cloud");
    if (cloud.n != n) throw DomainError("cloud dimension mismatch");
    if (opts.subdivisions < 1) throw DomainError("need at least one grid placement per octave");
    const WhitneyFrame frame = whitney_frame(cloud);
    // Effective level lambda = log2(extent / cube side) = j - 1 + u / subdivisions.
    double hi = k_max;
    if (cloud.resolution > 0) hi = std::min(hi, std::log2(frame.extent / (4 * cloud.resolution)));
    if (hi < 4) throw ResolutionError("complement too thin: no resolved Whitney scales below k_max");
    const int j_max = static_cast<int>(std::ceil(hi)) + 2;
    std::vector<std::vector<std::uint64_t>> per(static_cast<std::size_t>(opts.subdivisions));
    parallel_for(per.size(), [&](std::size_t u) {
        per[u] = whitney_counts(cloud, frame, std::exp2(static_cast<double>(u) / opts.subdivisions), j_max);
    });
    // The first two octaves after cubes appear only see the largest gaps being
    // filled in; in the plane that onset is late enough to bias the fit.
    double onset = hi;
    for (int j = 0; j <= j_max; ++j)
        if (per[0][j] > 0) {
            onset = j - 1;
            break;
        }
    const double lo = std::max(hi / 2, onset + 2);
    DimensionEstimate e;
    e.method = "whitney";
    e.window_lo = lo;
    e.window_hi = hi;
    std::vector<double> xs, ys;
    std::size_t levels_with_cubes = 0;
    for (int j = 0; j <= j_max; ++j) {
        for (std::size_t u = 0; u < per.size(); ++u) {
            const double lambda = j - 1 + static_cast<double>(u) / opts.subdivisions;
            const auto W = per[u][j];
            if (u == 0) e.table.emplace_back(lambda, static_cast<double>(W));
            if (lambda < lo - 1e-9 || lambda > hi + 1e-9 || W == 0) continue;
            xs.push_back(lambda * std::log(2.0));
            ys.push_back(std::log(static_cast<double>(W)));
            if (u == 0) ++levels_with_cubes;
        }
    }
    if (levels_with_cubes < 4 || xs.size() < 4)
        throw ResolutionError("complement too thin: fewer than 4 levels carry Whitney cubes at k_max");
    // The exponent is the s at which log(W_j 2^{-js}) stops trending; find the
    // sign change of the fitted trend by bisection.
    auto trend = [&](double s) {
        std::vector<double> t(ys.size());
        for (std::size_t i = 0; i < ys.size(); ++i) t[i] = ys[i] - s * xs[i];
        return fit_line(xs, t).slope;
    };
    double a = 0, b = n;
    if (trend(a) <= 0) {
        b = 0;
    } else if (trend(b) >= 0) {
        a = n;
    } else {
        for (int it = 0; it < 60; ++it) {
            const double m = 0.5 * (a + b);
            (trend(m) > 0 ? a : b) = m;
        }
    }
    const LineFit f = fit_line(xs, ys);
    e.raw_slope = f.slope;
    e.value = 0.5 * (a + b);
    e.stderr_value = f.stderr_slope;
    return e;
}

}  // namespace hypent
