#include "hypent/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hypent {

namespace {

int letter_rank(int l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

const Isometry& letter_isometry(const std::vector<Isometry>& alphabet, int l) { return alphabet[letter_rank(l)]; }

std::vector<Isometry> make_alphabet(const std::vector<Isometry>& gens) {
    std::vector<Isometry> a;
    a.reserve(2 * gens.size());
    for (const auto& g : gens) {
        a.push_back(g);
        a.push_back(g.inverse());
    }
    return a;
}

std::vector<int> letters_in_order(std::size_t k) {
    std::vector<int> out;
    for (int i = 1; i <= static_cast<int>(k); ++i) {
        out.push_back(i);
        out.push_back(-i);
    }
    return out;
}

}  // namespace

void SchottkySpec::validate() const {
    require_dimension(n);
    if (pairs.empty()) throw InvalidSpecError("Schottky spec needs at least one disk pair");
    std::vector<std::pair<Complex, double>> disks;
    for (const auto& p : pairs) {
        if (!(p.radius > 0) || !(p.radius2 > 0)) throw InvalidSpecError("disk radii must be positive");
        if (n == 1 && (p.center.imag() != 0 || p.center2.imag() != 0))
            throw InvalidSpecError("n = 1 disks must be centred on the real line");
        disks.emplace_back(p.center, p.radius);
        disks.emplace_back(p.center2, p.radius2);
    }
    for (std::size_t i = 0; i < disks.size(); ++i)
        for (std::size_t j = i + 1; j < disks.size(); ++j)
            if (std::abs(disks[i].first - disks[j].first) <= disks[i].second + disks[j].second)
                throw InvalidSpecError("disks " + std::to_string(i) + " and " + std::to_string(j) +
                                       " are not disjoint");
}

bool is_reduced(const Word& w) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) return false;
        if (i > 0 && w[i] == -w[i - 1]) return false;
    }
    return true;
}

std::string word_to_string(const Word& w) {
    if (w.empty()) return "e";
    std::string s;
    for (int l : w) {
        if (std::abs(l) > 26) throw DomainError("word printing supports at most 26 generators");
        s.push_back(static_cast<char>((l > 0 ? 'a' : 'A') + std::abs(l) - 1));
    }
    return s;
}

Word word_from_string(const std::string& s) {
    Word w;
    if (s == "e") return w;
    for (char c : s) {
        if (c >= 'a' && c <= 'z')
            w.push_back(c - 'a' + 1);
        else if (c >= 'A' && c <= 'Z')
            w.push_back(-(c - 'A' + 1));
        else
            throw DomainError(std::string("bad word letter '") + c + "'");
    }
    return w;
}

bool word_less(const Word& a, const Word& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](int x, int y) { return letter_rank(x) < letter_rank(y); });
}

std::pair<Complex, double> letter_disk(const SchottkySpec& spec, int letter) {
    const auto& p = spec.pairs.at(std::abs(letter) - 1);
    return letter > 0 ? std::make_pair(p.center2, p.radius2) : std::make_pair(p.center, p.radius);
}

std::vector<Isometry> schottky_group(const SchottkySpec& spec) {
    spec.validate();
    std::vector<Isometry> gens;
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        const auto& p = spec.pairs[i];
        // g(z) = c' - r r' / (z - c)
        const Complex c = p.center, c2 = p.center2;
        const double rr = p.radius * p.radius2;
        Isometry g = Isometry::normalized(c2, -rr - c * c2, 1.0, -c, std::string(1, static_cast<char>('a' + i)));
        // Ping-pong check on 16 points outside D_i.
        const double radii[4] = {1.01, 2.0, 10.0, 100.0};
        for (int k = 0; k < 16; ++k) {
            Complex z;
            if (spec.n == 1) {
                z = c + (k % 2 == 0 ? 1.0 : -1.0) * radii[k / 4] * p.radius * (1.0 + 0.1 * ((k / 2) % 2));
            } else {
                const double phi = 2 * std::numbers::pi * k / 16.0;
                z = c + radii[k % 4] * p.radius * Complex(std::cos(phi), std::sin(phi));
            }
            const Complex w = g.apply(BoundaryPoint::on_plane(z)).plane();
            if (std::abs(w - c2) >= p.radius2) throw InvalidSpecError("generator fails the ping-pong check");
        }
        gens.push_back(g);
    }
    return gens;
}

Isometry word_isometry(const std::vector<Isometry>& gens, const Word& w) {
    Isometry m;
    for (int l : w) {
        const auto& g = gens.at(std::abs(l) - 1);
        m = m * (l > 0 ? g : g.inverse());
    }
    return m;
}

double pruning_slack(const std::vector<Isometry>& gens, const HalfSpacePoint& base) {
    double s = 0;
    for (const auto& g : gens) {
        s = std::max(s, dist(g.apply(base), base));
        s = std::max(s, dist(g.inverse().apply(base), base));
    }
    return s;
}

std::vector<OrbitRecord> enumerate_orbit(const std::vector<Isometry>& gens, const HalfSpacePoint& base, double R,
                                         const EnumOptions& opts) {
    if (gens.empty()) throw InvalidSpecError("no generators");
    if (!(R > 0)) throw DomainError("orbit radius must be positive");
    if (R > opts.hard_cap_R) throw DomainError("orbit radius exceeds the configured hard cap");
    const std::uint64_t cap =
        opts.max_records ? opts.max_records : env_u64("HYPENT_MAX_RECORDS", 50'000'000ULL);
    const auto alphabet = make_alphabet(gens);
    const auto letters = letters_in_order(gens.size());
    const double limit = R + pruning_slack(gens, base);

    struct Node {
        Isometry m;
        Word w;
    };
    std::vector<OrbitRecord> records;
    records.push_back({Word{}, base, 0.0});
    std::vector<Node> frontier{{Isometry(), Word{}}};
    int depth = 0;
    while (!frontier.empty()) {
        // Expand the whole level; each frontier node writes only its own slot.
        std::vector<std::vector<Node>> next_parts(frontier.size());
        std::vector<std::vector<OrbitRecord>> rec_parts(frontier.size());
        parallel_for(frontier.size(), [&](std::size_t i) {
            const Node& node = frontier[i];
            const int last = node.w.empty() ? 0 : node.w.back();
            for (int l : letters) {
                if (l == -last) continue;
                Isometry m = node.m * letter_isometry(alphabet, l);
                const HalfSpacePoint p = m.apply(base);
                const double d = dist(p, base);
                if (d > limit) continue;
                Word w = node.w;
                w.push_back(l);
                if (d <= R) rec_parts[i].push_back({w, p, d});
                next_parts[i].push_back({std::move(m), std::move(w)});
            }
        });
        std::vector<Node> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            for (auto& r : rec_parts[i]) records.push_back(std::move(r));
            for (auto& nd : next_parts[i]) next.push_back(std::move(nd));
        }
        if (records.size() > cap)
            throw PartialResultError("orbit record cap exceeded at word length " + std::to_string(depth + 1),
                                     depth);
        frontier = std::move(next);
        ++depth;
    }
    std::sort(records.begin(), records.end(),
              [](const OrbitRecord& a, const OrbitRecord& b) { return word_less(a.word, b.word); });
    return records;
}

ExponentEstimate growth_exponent(std::vector<double> distances, double R_min, double R_max, double step, int n) {
    if (!(R_max > R_min) || !(step > 0)) throw EstimationError("invalid R window");
    std::sort(distances.begin(), distances.end());
    ExponentEstimate e;
    e.R_min = R_min;
    e.R_max = R_max;
    std::vector<double> xs, ys;
    const int steps = static_cast<int>(std::floor((R_max - R_min) / step + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        const double R = R_min + i * step;
        const auto N = static_cast<std::uint64_t>(std::upper_bound(distances.begin(), distances.end(), R) -
                                                  distances.begin());
        e.counts.emplace_back(R, N);
        if (N >= 10) {
            xs.push_back(R);
            ys.push_back(std::log(static_cast<double>(N)));
        }
    }
    if (xs.size() < 2) throw EstimationError("fewer than two R values with N(R) >= 10 in the window");
    const LineFit f = fit_line(xs, ys);
    e.raw_slope = f.slope;
    e.value = std::clamp(f.slope, 0.0, static_cast<double>(n));
    e.stderr_value = f.stderr_slope;
    const double last = static_cast<double>(e.counts.back().second);
    e.endpoint = last > 0 ? std::log(last) / e.counts.back().first : 0.0;
    return e;
}

ExponentEstimate delta_estimate(const std::vector<OrbitRecord>& records, double R_min, double R_max, int n,
                                double step) {
    std::vector<double> d;
    d.reserve(records.size());
    for (const auto& r : records) d.push_back(r.distance);
    return growth_exponent(std::move(d), R_min, R_max, step, n);
}

double poincare_partial(const std::vector<OrbitRecord>& records, double s) {
    if (!(s > 0)) throw DomainError("Poincare exponent must be positive");
    double sum = 0;
    for (const auto& r : records) sum += std::exp(-s * r.distance);
    return sum;
}

TailVerdict poincare_tail(std::vector<double> distances, double s, double R_max,
                          const std::function<double(double)>& h, const TailOptions& opts) {
    if (!(s > 0)) throw DomainError("Poincare exponent must be positive");
    std::sort(distances.begin(), distances.end());
    TailVerdict v;
    double sum = 0;
    std::size_t idx = 0;
    const int steps = static_cast<int>(std::floor(R_max / opts.step + 1e-9));
    for (int i = 0; i <= steps; ++i) {
        const double R = i * opts.step;
        while (idx < distances.size() && distances[idx] <= R) {
            const double d = distances[idx++];
            sum += (h ? h(d) : 1.0) * std::exp(-s * d);
        }
        v.partial_sums.emplace_back(R, sum);
    }
    const auto& ps = v.partial_sums;
    // Increment over the final tenth of the range.
    const double tenth = 0.9 * ps.back().first;
    std::size_t j = ps.size() - 1;
    while (j > 0 && ps[j - 1].first >= tenth) --j;
    if (j > 0) --j;
    v.last_increment = ps.back().second - ps[j].second;
    // Growth rate of per-step increments over the upper half of the range.
    std::vector<double> xs, ys;
    for (std::size_t i = ps.size() / 2; i < ps.size(); ++i) {
        if (i == 0) continue;
        const double inc = ps[i].second - ps[i - 1].second;
        if (inc > 0) {
            xs.push_back(ps[i].first);
            ys.push_back(std::log(inc));
        }
    }
    v.decay_rate = xs.size() >= 2 ? fit_line(xs, ys).slope : 0.0;
    v.flat = v.last_increment < opts.increment_tol || v.decay_rate <= opts.decay_tol;
    return v;
}

}  // namespace hypent
