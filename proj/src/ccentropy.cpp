#include "hypent/ccentropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <map>
#include <unordered_map>

namespace hypent {

namespace {

struct BucketKey {
    int level;
    std::int64_t cx, cy;
    bool operator==(const BucketKey& o) const { return level == o.level && cx == o.cx && cy == o.cy; }
};

struct BucketHash {
    std::size_t operator()(const BucketKey& k) const {
        std::uint64_t h = static_cast<std::uint64_t>(k.level) * 0x9E3779B97F4A7C15ULL;
        h ^= static_cast<std::uint64_t>(k.cx) + 0x7F4A7C159E3779B9ULL + (h << 6) + (h >> 2);
        h ^= static_cast<std::uint64_t>(k.cy) + 0x94D049BB133111EBULL + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

// Buckets points by dyadic height level and horizontal cell of that level's width.
class Buckets {
public:
    explicit Buckets(double radius) : radius_(radius), level_span_(static_cast<int>(std::ceil(radius / std::log(2.0))) + 1) {}

    static BucketKey key_of(const HalfSpacePoint& p) {
        const int level = static_cast<int>(std::floor(std::log2(p.height)));
        const double w = std::ldexp(1.0, level);
        return {level, static_cast<std::int64_t>(std::floor(p.base.real() / w)),
                static_cast<std::int64_t>(std::floor(p.base.imag() / w))};
    }

    void insert(const HalfSpacePoint& p, std::uint32_t idx) { map_[key_of(p)].push_back(idx); }

    // Calls f(index) for every stored point that may lie within `radius` of p.
    template <class F>
    void for_near(const HalfSpacePoint& p, F&& f) const {
        const BucketKey k = key_of(p);
        // |dx| < 2 sqrt(t t') sinh(radius / 2) with t' <= t e^radius.
        const double reach = 2.0 * p.height * std::exp(radius_ / 2) * std::sinh(radius_ / 2);
        for (int dl = -level_span_; dl <= level_span_; ++dl) {
            const int level = k.level + dl;
            const double w = std::ldexp(1.0, level);
            const auto x0 = static_cast<std::int64_t>(std::floor((p.base.real() - reach) / w));
            const auto x1 = static_cast<std::int64_t>(std::floor((p.base.real() + reach) / w));
            const auto y0 = static_cast<std::int64_t>(std::floor((p.base.imag() - reach) / w));
            const auto y1 = static_cast<std::int64_t>(std::floor((p.base.imag() + reach) / w));
            for (auto cx = x0; cx <= x1; ++cx)
                for (auto cy = y0; cy <= y1; ++cy) {
                    auto it = map_.find({level, cx, cy});
                    if (it == map_.end()) continue;
                    for (auto idx : it->second) f(idx);
                }
        }
    }

private:
    double radius_;
    int level_span_;
    std::unordered_map<BucketKey, std::vector<std::uint32_t>, BucketHash> map_;
};

double cuboid_radius(int n) { return 2.0 * std::asinh(std::sqrt((n + 1) / 8.0)); }

double median_of(std::vector<double> v) {
    if (v.empty()) return 0;
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
}

std::vector<std::size_t> sample_indices(const std::vector<std::size_t>& pool, std::size_t count, std::uint64_t seed) {
    std::vector<std::size_t> out;
    if (count >= pool.size()) return pool;
    std::mt19937_64 rng(seed);
    std::sample(pool.begin(), pool.end(), std::back_inserter(out), count, rng);
    return out;
}

}  // namespace

HalfSpacePoint DyadicCuboid::upper_centre(int n) const {
    const double w = std::ldexp(1.0, -k);
    return HalfSpacePoint(Complex((m[0] + 0.5) * w, n == 2 ? (m[1] + 0.5) * w : 0.0), w);
}

double min_pair_distance(const std::vector<HalfSpacePoint>& pts, double bound) {
    Buckets b(bound);
    for (std::size_t i = 0; i < pts.size(); ++i) b.insert(pts[i], static_cast<std::uint32_t>(i));
    double best = bound;
    for (std::size_t i = 0; i < pts.size(); ++i)
        b.for_near(pts[i], [&](std::uint32_t j) {
            if (j > i) best = std::min(best, dist(pts[i], pts[j]));
        });
    return best;
}

std::vector<std::size_t> thin_indices(const std::vector<HalfSpacePoint>& pts, double m) {
    Buckets kept(m);
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool close = false;
        kept.for_near(pts[i], [&](std::uint32_t j) { close = close || dist(pts[i], pts[j]) < m; });
        if (close) continue;
        kept.insert(pts[i], static_cast<std::uint32_t>(i));
        out.push_back(i);
    }
    return out;
}

UDSet build_dyadic_uds(const PointCloud& cloud, int k_min, int k_max, double separation_m) {
    if (cloud.points.empty()) throw DomainError("uniformly distributed set of an empty cloud");
    if (!(separation_m > 0) || separation_m > 0.5) throw DomainError("separation must lie in (0, 0.5]");
    if (k_min > k_max || k_max - k_min > 60) throw DomainError("invalid level range");
    cloud.validate();
    const int n = cloud.n;
    std::vector<std::vector<HalfSpacePoint>> per_level(static_cast<std::size_t>(k_max - k_min + 1));
    parallel_for(per_level.size(), [&](std::size_t li) {
        const int k = k_min + static_cast<int>(li);
        const double scale = std::ldexp(1.0, k);
        std::vector<std::array<std::int64_t, 2>> keys;
        keys.reserve(cloud.points.size());
        for (const auto& p : cloud.points)
            keys.push_back({static_cast<std::int64_t>(std::floor(p[0] * scale)),
                            n == 2 ? static_cast<std::int64_t>(std::floor(p[1] * scale)) : 0});
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        auto& out = per_level[li];
        out.reserve(keys.size());
        for (const auto& m : keys) out.push_back(DyadicCuboid{k, m}.upper_centre(n));
    });
    std::vector<HalfSpacePoint> all;
    for (auto& lv : per_level) all.insert(all.end(), lv.begin(), lv.end());
    UDSet uds;
    uds.n = n;
    uds.separation_m = separation_m;
    uds.density_M = cuboid_radius(n) + separation_m;
    for (auto i : thin_indices(all, separation_m)) uds.points.push_back(all[i]);
    // Base point: the coarsest-level point closest to the centre of the cloud.
    const auto [lo, hi] = cloud.bounding_box();
    const Complex centre(0.5 * (lo[0] + hi[0]), n == 2 ? 0.5 * (lo[1] + hi[1]) : 0.0);
    const double top = std::ldexp(1.0, -k_min);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < uds.points.size(); ++i) {
        if (uds.points[i].height != top) continue;
        const double d = std::abs(uds.points[i].base - centre);
        if (d < best) {
            best = d;
            uds.origin_index = i;
        }
    }
    return uds;
}

std::vector<std::pair<int, std::uint64_t>> uds_level_counts(const UDSet& uds) {
    std::map<int, std::uint64_t> m;
    for (const auto& p : uds.points) ++m[static_cast<int>(std::lround(-std::log2(p.height)))];
    return {m.begin(), m.end()};
}

double density_spot_check(const UDSet& uds, const PointCloud& cloud, std::size_t samples, std::uint64_t seed) {
    if (uds.points.empty() || cloud.points.empty()) throw DomainError("density check needs points");
    double t_min = std::numeric_limits<double>::infinity(), t_max = 0;
    for (const auto& p : uds.points) {
        t_min = std::min(t_min, p.height);
        t_max = std::max(t_max, p.height);
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cloud.points.size() - 1);
    std::uniform_real_distribution<double> logt(std::log(t_min), std::log(t_max));
    std::vector<HalfSpacePoint> probes;
    for (std::size_t s = 0; s < samples; ++s) {
        const auto& xi = cloud.points[pick(rng)];
        probes.emplace_back(Complex(xi[0], cloud.n == 2 ? xi[1] : 0.0), std::exp(logt(rng)));
    }
    std::vector<double> nearest(probes.size(), std::numeric_limits<double>::infinity());
    parallel_for(probes.size(), [&](std::size_t i) {
        for (const auto& p : uds.points) nearest[i] = std::min(nearest[i], dist(p, probes[i]));
    });
    return *std::max_element(nearest.begin(), nearest.end());
}

std::vector<double> distances_from(const UDSet& uds, const HalfSpacePoint& z) {
    std::vector<double> d(uds.points.size());
    const std::size_t chunk = 4096;
    parallel_for((d.size() + chunk - 1) / chunk, [&](std::size_t c) {
        const std::size_t hi = std::min(d.size(), (c + 1) * chunk);
        for (std::size_t i = c * chunk; i < hi; ++i) d[i] = dist(uds.points[i], z);
    });
    return d;
}

std::pair<double, double> default_R_window(const UDSet& uds) {
    if (uds.points.empty()) throw EstimationError("empty uniformly distributed set");
    double t_min = std::numeric_limits<double>::infinity();
    for (const auto& p : uds.points) t_min = std::min(t_min, p.height);
    const double R_hi = std::log(2.0 * uds.origin().height / t_min);
    if (!(R_hi > 0)) throw EstimationError("set has no depth below its base point");
    return {R_hi / 2, R_hi};
}

ExponentEstimate delta_X(const UDSet& uds, double R_min, double R_max, double step) {
    const auto d = distances_from(uds, uds.origin());
    const auto within = std::count_if(d.begin(), d.end(), [&](double x) { return x <= R_max; });
    if (within < 100)
        throw EstimationError("only " + std::to_string(within) + " points within R_max; need at least 100");
    return growth_exponent(d, R_min, R_max, step, uds.n);
}

ExponentEstimate delta_X(const UDSet& uds) {
    const auto [lo, hi] = default_R_window(uds);
    return delta_X(uds, lo, hi);
}

HoroballLattice horoball_lattice(int n, int k_max, const LatticeWindow& window) {
    require_dimension(n);
    if (k_max < 0 || k_max > 24) throw DomainError("lattice depth must lie in [0, 24]");
    if (!(window.ball_radius > 0) || window.half_width < 0) throw DomainError("invalid lattice window");
    HoroballLattice L;
    L.n = n;
    L.k_max = k_max;
    L.window = window;
    const double coshR = std::cosh(window.ball_radius);
    for (int k = 0; k <= k_max; ++k) {
        const double y = std::ldexp(1.0, k);
        const double r2 = 2 * y * coshR - y * y - 1;
        if (r2 < 0) continue;
        const double reach = std::min(std::sqrt(r2), window.half_width) / y;
        const auto M = static_cast<std::int64_t>(std::floor(reach + 1e-12));
        const double lim2 = r2 / (y * y) + 1e-12;
        for (std::int64_t a = -M; a <= M; ++a) {
            if (n == 1) {
                L.points.emplace_back(Complex(static_cast<double>(a) * y, 0.0), y);
                continue;
            }
            const double rest = lim2 - static_cast<double>(a * a);
            if (rest < 0) continue;
            const auto B = std::min<std::int64_t>(M, static_cast<std::int64_t>(std::floor(std::sqrt(rest))));
            for (std::int64_t b = -B; b <= B; ++b)
                L.points.emplace_back(Complex(static_cast<double>(a) * y, static_cast<double>(b) * y), y);
        }
    }
    return L;
}

UDSet lattice_uds(const HoroballLattice& lattice) {
    UDSet u;
    u.n = lattice.n;
    u.points = lattice.points;
    u.separation_m = std::min(0.5, min_pair_distance(u.points, 0.5));
    u.density_M = 1.0;
    for (std::size_t i = 0; i < u.points.size(); ++i)
        if (u.points[i].height == 1.0 && u.points[i].base == Complex(0)) u.origin_index = i;
    return u;
}

ExponentEstimate lattice_entropy(const HoroballLattice& lattice) {
    const double R = lattice.window.ball_radius;
    return delta_X(lattice_uds(lattice), R / 2, R);
}

std::string to_string(BoundedVerdict v) {
    switch (v) {
        case BoundedVerdict::Bounded:
            return "bounded";
        case BoundedVerdict::WeaklyBounded:
            return "weakly_bounded";
        case BoundedVerdict::Unbounded:
        default:
            return "unbounded";
    }
}

namespace {

struct RatioScan {
    double rho_hat = 0;
    std::size_t worst = 0;
    std::vector<std::pair<double, double>> table;
    double growth = 0;
};

// Max over sampled x of #(X cap B_R(x)) / #(X cap B_R(o)), restricted to `members`.
RatioScan scan_ratios(const UDSet& uds, const std::vector<std::size_t>& members, const std::vector<double>& R_grid,
                      std::size_t sample_size, std::uint64_t seed) {
    auto counts_from = [&](const HalfSpacePoint& z) {
        std::vector<std::uint64_t> c(R_grid.size() + 1, 0);
        for (auto j : members) {
            const double d = dist(uds.points[j], z);
            ++c[std::lower_bound(R_grid.begin(), R_grid.end(), d) - R_grid.begin()];
        }
        std::vector<double> cum(R_grid.size());
        std::uint64_t acc = 0;
        for (std::size_t i = 0; i < R_grid.size(); ++i) {
            acc += c[i];
            cum[i] = static_cast<double>(acc);
        }
        return cum;
    };
    const auto base = counts_from(uds.origin());
    const auto samples = sample_indices(members, sample_size, seed);
    std::vector<std::vector<double>> ratios(samples.size());
    parallel_for(samples.size(), [&](std::size_t s) {
        const auto c = counts_from(uds.points[samples[s]]);
        ratios[s].resize(R_grid.size());
        for (std::size_t i = 0; i < R_grid.size(); ++i) ratios[s][i] = c[i] / std::max(1.0, base[i]);
    });
    RatioScan out;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < R_grid.size(); ++i) {
        double m = 0;
        for (std::size_t s = 0; s < samples.size(); ++s) {
            if (ratios[s][i] > m) m = ratios[s][i];
            if (ratios[s][i] > out.rho_hat) {
                out.rho_hat = ratios[s][i];
                out.worst = samples[s];
            }
        }
        out.table.emplace_back(R_grid[i], m);
        if (m > 0) {
            xs.push_back(R_grid[i]);
            ys.push_back(std::log(m));
        }
    }
    out.growth = xs.size() >= 2 ? fit_line(xs, ys).slope : 0.0;
    return out;
}

}  // namespace

BoundedTypeReport bounded_type_report(const UDSet& uds, const std::vector<double>& R_grid, std::size_t sample_size,
                                      const BoundedTypeOptions& opts) {
    if (uds.points.empty() || uds.origin_index >= uds.points.size()) throw DomainError("set needs a base point");
    if (R_grid.empty() || !std::is_sorted(R_grid.begin(), R_grid.end())) throw DomainError("R grid must be sorted");
    std::vector<std::size_t> all(uds.points.size()), outside;
    std::iota(all.begin(), all.end(), 0);
    for (auto i : all)
        if (!uds.in_horoball(i)) outside.push_back(i);
    const auto full = scan_ratios(uds, all, R_grid, sample_size, opts.seed);
    BoundedTypeReport r;
    r.rho_hat = full.rho_hat;
    r.worst_index = full.worst;
    r.table = full.table;
    r.growth_rate = full.growth;
    r.unbounded_trend = full.growth > opts.growth_threshold;
    if (outside.size() == all.size()) {
        r.rho_hat_excised = r.rho_hat;
        r.growth_rate_excised = r.growth_rate;
    } else {
        const auto cut = scan_ratios(uds, outside, R_grid, sample_size, opts.seed);
        r.rho_hat_excised = cut.rho_hat;
        r.growth_rate_excised = cut.growth;
    }
    r.excised_unbounded_trend = r.growth_rate_excised > opts.growth_threshold;
    if (!r.unbounded_trend)
        r.verdict = BoundedVerdict::Bounded;
    else if (!r.excised_unbounded_trend)
        r.verdict = BoundedVerdict::WeaklyBounded;
    else
        r.verdict = BoundedVerdict::Unbounded;
    r.K_hat = r.rho_hat * std::exp(opts.delta * uds.density_M);
    return r;
}

AtomicMeasure atomic_measure(const UDSet& uds, double s, const HalfSpacePoint& z, std::optional<double> delta) {
    if (!(s > 0)) throw DomainError("measure exponent must be positive");
    const double D = delta ? *delta : delta_X(uds).value;
    if (s < D + 0.02)
        throw DivergenceError("exponent " + std::to_string(s) + " is not above the set's exponent " +
                              std::to_string(D) + " by 0.02; the series is not Cauchy-flat");
    const auto d_o = distances_from(uds, uds.origin());
    const auto d_z = distances_from(uds, z);
    AtomicMeasure m;
    m.s = s;
    m.z = z;
    for (double d : d_o) m.normaliser += std::exp(-s * d);
    m.weights.resize(d_z.size());
    for (std::size_t i = 0; i < d_z.size(); ++i) {
        m.weights[i] = std::exp(-s * d_z[i]) / m.normaliser;
        m.total += m.weights[i];
    }
    const double dzo = dist(z, uds.origin());
    const double slack = 1e-12 * std::exp(s * dzo);
    if (m.total < std::exp(-s * dzo) - slack || m.total > std::exp(s * dzo) + slack)
        throw EstimationError("total mass violates e^{-s d(z,o)} <= total <= e^{s d(z,o)}");
    m.tail = poincare_tail(d_o, s, *std::max_element(d_o.begin(), d_o.end()));
    return m;
}

PattersonFunction PattersonFunction::constant() { return {}; }

PattersonFunction PattersonFunction::log_power(double beta) {
    if (!(beta >= 0)) throw DomainError("Patterson exponent must be non-negative");
    PattersonFunction h;
    h.family = Family::LogPower;
    h.beta = beta;
    return h;
}

double PattersonFunction::operator()(double t) const {
    if (family == Family::Constant) return 1.0;
    return std::pow(1.0 + std::max(t, 0.0), beta);
}

double PattersonFunction::slow_growth_threshold(double eps, double r_max) const {
    if (!(eps > 0)) throw DomainError("epsilon must be positive");
    const double step = 0.5;
    double r0 = 0;
    for (double r = 0; r <= r_max; r += step)
        for (double t = 0; t <= r_max; t += step)
            if ((*this)(t + r) > std::exp(eps * t) * (*this)(r) * (1 + 1e-12)) r0 = r + step;
    return r0;
}

double PattersonFunction::submultiplicative_constant(double r_max) const {
    double c = 0;
    for (double r = 0; r <= r_max; r += 0.5)
        for (double t = 0; t <= r_max; t += 0.5) c = std::max(c, (*this)(r + t) / ((*this)(r) * (*this)(t)));
    return c;
}

double modified_poincare(const UDSet& uds, const PattersonFunction& h, double s, const HalfSpacePoint& z) {
    if (!(s > 0)) throw DomainError("Poincare exponent must be positive");
    double sum = 0;
    for (const auto& p : uds.points) {
        const double d = dist(p, z);
        sum += h(d) * std::exp(-s * d);
    }
    return sum;
}

ShadowReport shadow_check(const UDSet& uds, double ell, double delta, const std::vector<double>& s_list,
                          std::size_t sample_size, const ShadowOptions& opts) {
    if (!(ell > 0)) throw DomainError("shadow radius must be positive");
    if (s_list.empty()) throw DomainError("empty exponent ladder");
    for (std::size_t i = 1; i < s_list.size(); ++i)
        if (!(s_list[i] < s_list[i - 1])) throw DomainError("exponent ladder must decrease");
    if (!(s_list.back() > 0)) throw DomainError("exponents must be positive");
    const auto& o = uds.origin();
    const Isometry to_origin = Isometry::recenter(o.base, o.height);
    const std::size_t N = uds.points.size();
    std::vector<Vec3> dir(N);
    std::vector<double> d_o(N);
    std::vector<BallPoint> ball(N);
    parallel_for(N, [&](std::size_t i) {
        d_o[i] = dist(uds.points[i], o);
        ball[i] = ball_from_half(to_origin.apply(uds.points[i]), uds.n);
        if (i != uds.origin_index && ball[i].norm2() > 0) dir[i] = radial_direction(ball[i]);
    });
    // Sample x whose shadows are resolved: at least three levels below o and
    // six above the finest level.
    double t_min = std::numeric_limits<double>::infinity();
    for (const auto& p : uds.points) t_min = std::min(t_min, p.height);
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < N; ++i) {
        const double t = uds.points[i].height;
        if (uds.in_horoball(i) || i == uds.origin_index) continue;
        if (t <= o.height / 8 && t >= t_min * 64) pool.push_back(i);
    }
    if (pool.empty()) throw ResolutionError("no resolved sample points for the shadow test; deepen the set");
    const auto samples = sample_indices(pool, sample_size, opts.seed);
    // Atoms counted in S(x, ell): radial projection inside the cap and no
    // closer to o than x itself.
    std::vector<std::vector<std::uint32_t>> members(samples.size());
    std::vector<double> diam(samples.size());
    parallel_for(samples.size(), [&](std::size_t si) {
        const std::size_t x = samples[si];
        const Shadow S = shadow(ball[x], ell);
        diam[si] = S.diameter();
        const double cos_cap = std::cos(S.angular_radius);
        for (std::size_t j = 0; j < N; ++j) {
            if (j == uds.origin_index || d_o[j] < d_o[x]) continue;
            const double c = dir[j][0] * S.axis[0] + dir[j][1] * S.axis[1] + dir[j][2] * S.axis[2];
            if (c >= cos_cap) members[si].push_back(static_cast<std::uint32_t>(j));
        }
    });
    ShadowReport rep;
    rep.ell = ell;
    rep.delta = delta;
    rep.samples = samples.size();
    for (double s : s_list) {
        double P = 0;
        for (double d : d_o) P += std::exp(-s * d);
        ShadowStep st;
        st.s = s;
        std::vector<double> A;
        for (std::size_t si = 0; si < samples.size(); ++si) {
            double mu = 0;
            for (auto j : members[si]) mu += std::exp(-s * d_o[j]);
            mu /= P;
            if (mu <= 0) {
                ++st.empty_shadows;
                continue;
            }
            A.push_back(mu / std::pow(diam[si], delta));
        }
        if (A.empty()) throw ResolutionError("no atoms in any shadow");
        st.A_fit = *std::max_element(A.begin(), A.end());
        st.A_median = median_of(A);
        st.violations = static_cast<std::size_t>(
            std::count_if(A.begin(), A.end(), [&](double a) { return a > opts.violation_factor * st.A_median; }));
        rep.steps.push_back(st);
    }
    double lo = std::numeric_limits<double>::infinity(), hi = 0;
    bool rising = rep.steps.size() > 1;
    for (std::size_t i = 0; i < rep.steps.size(); ++i) {
        lo = std::min(lo, rep.steps[i].A_fit);
        hi = std::max(hi, rep.steps[i].A_fit);
        if (i > 0 && !(rep.steps[i].A_fit > rep.steps[i - 1].A_fit)) rising = false;
    }
    rep.spread = hi / lo;
    rep.stable = rep.spread <= opts.stable_factor;
    rep.drifting = rising && rep.steps.back().A_fit > opts.drift_factor * rep.steps.front().A_fit;
    return rep;
}

double hull_depth(const HoleFinder& holes, const HalfSpacePoint& p, double c_floor) {
    const double t = p.height;
    const double c = std::clamp(holes.max_hole({p.base.real(), p.base.imag()}, t) / t, c_floor, 1.0);
    return std::max(0.0, 0.5 * std::log(2.0 / c));
}

TightnessReport tightness_audit(const UDSet& uds, const PointCloud& cloud, const std::vector<double>& ell_grid) {
    if (uds.points.empty() || cloud.points.empty()) throw DomainError("tightness audit needs points");
    if (uds.n != cloud.n) throw DomainError("set and cloud dimensions differ");
    const HoleFinder holes(cloud);
    std::vector<double> depth(uds.points.size());
    parallel_for(depth.size(), [&](std::size_t i) { depth[i] = hull_depth(holes, uds.points[i]); });
    TightnessReport r;
    const double grid_max = ell_grid.empty() ? 0.0 : *std::max_element(ell_grid.begin(), ell_grid.end());
    std::vector<std::uint32_t> deep_tags;
    for (std::size_t i = 0; i < depth.size(); ++i) {
        if (uds.in_horoball(i)) {
            r.horoball_depth = std::max(r.horoball_depth, depth[i]);
            if (depth[i] > grid_max) deep_tags.push_back(uds.horoball_tag[i] - 1);
        } else {
            r.ell_hat = std::max(r.ell_hat, depth[i]);
        }
    }
    for (double l : ell_grid)
        if (l >= r.ell_hat) r.ell_tight = std::min(r.ell_tight, l);
    std::sort(deep_tags.begin(), deep_tags.end());
    deep_tags.erase(std::unique(deep_tags.begin(), deep_tags.end()), deep_tags.end());
    r.horoball_list = deep_tags;
    r.weak_flag = !deep_tags.empty() && r.ell_hat <= grid_max;
    return r;
}

}  // namespace hypent
