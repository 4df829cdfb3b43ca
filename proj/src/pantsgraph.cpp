#include "hypent/pantsgraph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <deque>
#include <numbers>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace hypent {

std::string to_string(GraphKind k) {
    switch (k) {
        case GraphKind::BinaryTree:
            return "binary_tree";
        case GraphKind::PrunedTree:
            return "pruned_tree";
        case GraphKind::Grid:
            return "grid";
        case GraphKind::FreeCayley:
            return "free_cayley";
        case GraphKind::Explicit:
        default:
            return "explicit";
    }
}

namespace {

void check_ell(double ell) {
    if (!(ell > 0) || !std::isfinite(ell)) throw DomainError("boundary length must be positive");
}

int heap_depth(std::uint64_t v) { return 63 - std::countl_zero(v); }

// In the pruned tree a vertex is removed when some complete pair of path bits
// below an even-depth ancestor reads "11".
bool pruned_alive(std::uint64_t v) {
    const int d = heap_depth(v);
    for (int j = 0; j + 2 <= d; j += 2)
        if (((v >> (d - j - 2)) & 3U) == 3U) return false;
    return true;
}

}  // namespace

PantsGraph PantsGraph::binary_tree(int depth, double ell) {
    if (depth < 0 || depth > 24) throw DomainError("tree depth must lie in [0, 24]");
    check_ell(ell);
    PantsGraph g;
    g.kind_ = GraphKind::BinaryTree;
    g.depth_ = depth;
    g.ell_ = ell;
    return g;
}

PantsGraph PantsGraph::pruned_tree(int depth, double ell) {
    PantsGraph g = binary_tree(depth, ell);
    g.kind_ = GraphKind::PrunedTree;
    return g;
}

PantsGraph PantsGraph::grid(int side, int dim, double ell) {
    if (dim < 1 || dim > 3) throw DomainError("grid dimension must lie in [1, 3]");
    if (side < 1 || std::pow(static_cast<double>(side), dim) > 1e9) throw DomainError("grid side out of range");
    check_ell(ell);
    PantsGraph g;
    g.kind_ = GraphKind::Grid;
    g.side_ = side;
    g.dim_ = dim;
    g.ell_ = ell;
    g.max_valency_ = 2 * dim;
    return g;
}

PantsGraph PantsGraph::free_cayley(int k, int depth, double ell) {
    if (k < 1 || depth < 0 || depth > 24) throw DomainError("invalid free Cayley graph size");
    check_ell(ell);
    PantsGraph g;
    g.kind_ = GraphKind::FreeCayley;
    g.k_ = k;
    g.depth_ = depth;
    g.ell_ = ell;
    g.max_valency_ = 2 * k;
    g.level_start_ = {0, 1};
    double width = 2.0 * k;
    for (int L = 1; L <= depth; ++L) {
        if (static_cast<double>(g.level_start_.back()) + width > 4e18) throw DomainError("free Cayley window too large");
        g.level_start_.push_back(g.level_start_.back() + static_cast<std::uint64_t>(width));
        width *= 2.0 * k - 1;
    }
    return g;
}

PantsGraph PantsGraph::from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges,
                                  const std::vector<Vertex>& funnels, double ell, int max_valency) {
    if (n == 0) throw InvalidSpecError("graph has no vertices");
    check_ell(ell);
    PantsGraph g;
    g.kind_ = GraphKind::Explicit;
    g.ell_ = ell;
    g.max_valency_ = max_valency;
    std::vector<std::vector<Vertex>> adj(n);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) throw InvalidSpecError("edge endpoint out of range");
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    g.offsets_.push_back(0);
    for (auto& a : adj) {
        g.targets_.insert(g.targets_.end(), a.begin(), a.end());
        g.offsets_.push_back(g.targets_.size());
    }
    g.funnel_count_.assign(n, 0);
    for (auto f : funnels) {
        if (f >= n) throw InvalidSpecError("funnel vertex out of range");
        ++g.funnel_count_[f];
    }
    g.validate();
    return g;
}

PantsGraph::Vertex PantsGraph::root() const {
    switch (kind_) {
        case GraphKind::BinaryTree:
        case GraphKind::PrunedTree:
            return 1;
        case GraphKind::Grid: {
            Vertex v = 0, stride = 1;
            for (int i = 0; i < dim_; ++i, stride *= static_cast<Vertex>(side_)) v += stride * static_cast<Vertex>(side_ / 2);
            return v;
        }
        default:
            return 0;
    }
}

bool PantsGraph::contains(Vertex v) const {
    switch (kind_) {
        case GraphKind::BinaryTree:
            return v >= 1 && heap_depth(v) <= depth_;
        case GraphKind::PrunedTree:
            return v >= 1 && heap_depth(v) <= depth_ && pruned_alive(v);
        case GraphKind::Grid:
        case GraphKind::FreeCayley:
        case GraphKind::Explicit:
        default:
            return v < vertex_count();
    }
}

std::uint64_t PantsGraph::count_at_depth(int d) const {
    if (d < 0 || d > depth_) return 0;
    switch (kind_) {
        case GraphKind::BinaryTree:
            return std::uint64_t{1} << d;
        case GraphKind::PrunedTree: {
            std::uint64_t p = 1;
            for (int j = 0; j < d / 2; ++j) p *= 3;
            return d % 2 ? 2 * p : p;
        }
        case GraphKind::FreeCayley:
            return level_start_[static_cast<std::size_t>(d) + 1] - level_start_[static_cast<std::size_t>(d)];
        default:
            throw DomainError("depth counts need a tree graph");
    }
}

std::uint64_t PantsGraph::vertex_count() const {
    switch (kind_) {
        case GraphKind::BinaryTree:
            return (std::uint64_t{2} << depth_) - 1;
        case GraphKind::PrunedTree: {
            std::uint64_t total = 0;
            for (int d = 0; d <= depth_; ++d) total += count_at_depth(d);
            return total;
        }
        case GraphKind::Grid: {
            std::uint64_t n = 1;
            for (int i = 0; i < dim_; ++i) n *= static_cast<std::uint64_t>(side_);
            return n;
        }
        case GraphKind::FreeCayley:
            return level_start_.back();
        case GraphKind::Explicit:
        default:
            return offsets_.size() - 1;
    }
}

int PantsGraph::depth_of(Vertex v) const {
    switch (kind_) {
        case GraphKind::BinaryTree:
        case GraphKind::PrunedTree:
            return heap_depth(v);
        case GraphKind::FreeCayley:
            return static_cast<int>(std::upper_bound(level_start_.begin(), level_start_.end(), v) - level_start_.begin()) - 1;
        default:
            throw DomainError("depth needs a tree graph");
    }
}

void PantsGraph::neighbours(Vertex v, std::vector<Vertex>& out) const {
    out.clear();
    switch (kind_) {
        case GraphKind::BinaryTree:
        case GraphKind::PrunedTree: {
            if (v > 1) out.push_back(v / 2);
            if (heap_depth(v) < depth_)
                for (Vertex c : {2 * v, 2 * v + 1})
                    if (kind_ == GraphKind::BinaryTree || pruned_alive(c)) out.push_back(c);
            return;
        }
        case GraphKind::Grid: {
            Vertex stride = 1;
            Vertex rest = v;
            for (int i = 0; i < dim_; ++i, stride *= static_cast<Vertex>(side_)) {
                const Vertex c = rest % static_cast<Vertex>(side_);
                rest /= static_cast<Vertex>(side_);
                if (c > 0) out.push_back(v - stride);
                if (c + 1 < static_cast<Vertex>(side_)) out.push_back(v + stride);
            }
            return;
        }
        case GraphKind::FreeCayley: {
            const int L = depth_of(v);
            const Vertex w = static_cast<Vertex>(2 * k_ - 1);
            if (L == 0) {
                if (depth_ > 0)
                    for (Vertex c = 1; c <= static_cast<Vertex>(2 * k_); ++c) out.push_back(c);
                return;
            }
            const Vertex i = v - level_start_[static_cast<std::size_t>(L)];
            out.push_back(L == 1 ? 0 : level_start_[static_cast<std::size_t>(L) - 1] + i / w);
            if (L < depth_)
                for (Vertex c = 0; c < w; ++c) out.push_back(level_start_[static_cast<std::size_t>(L) + 1] + i * w + c);
            return;
        }
        case GraphKind::Explicit:
        default:
            out.assign(targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]),
                       targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]));
    }
}

int PantsGraph::funnels(Vertex v) const {
    switch (kind_) {
        case GraphKind::BinaryTree:
            return v == 1 ? 1 : 0;
        case GraphKind::PrunedTree:
            // Root funnel, plus the cut left by removing child 2v + 1 of an
            // odd-depth right child.
            return (v == 1 ? 1 : 0) + ((heap_depth(v) % 2 == 1 && (v & 1U)) ? 1 : 0);
        case GraphKind::Explicit:
            return funnel_count_[v];
        default:
            return 0;
    }
}

int PantsGraph::stubs(Vertex v) const {
    switch (kind_) {
        case GraphKind::BinaryTree:
            return heap_depth(v) == depth_ ? 2 : 0;
        case GraphKind::PrunedTree:
            if (heap_depth(v) != depth_) return 0;
            return 1 + ((heap_depth(v) % 2 == 1 && (v & 1U)) ? 0 : 1);
        case GraphKind::Grid: {
            int inside = 0;
            Vertex rest = v;
            for (int i = 0; i < dim_; ++i) {
                const Vertex c = rest % static_cast<Vertex>(side_);
                rest /= static_cast<Vertex>(side_);
                inside += (c > 0) + (c + 1 < static_cast<Vertex>(side_));
            }
            return 2 * dim_ - inside;
        }
        case GraphKind::FreeCayley:
            return depth_of(v) == depth_ ? (depth_ == 0 ? 2 * k_ : 2 * k_ - 1) : 0;
        default:
            return 0;
    }
}

void PantsGraph::validate() const {
    if (kind_ != GraphKind::Explicit) return;
    const std::size_t n = vertex_count();
    std::vector<Vertex> nb;
    for (std::size_t v = 0; v < n; ++v) {
        neighbours(v, nb);
        const auto val = static_cast<int>(nb.size()) + funnels(v);
        if (val > max_valency_)
            throw InvalidSpecError("vertex " + std::to_string(v) + " has valency " + std::to_string(val) +
                                   " above " + std::to_string(max_valency_));
    }
    std::vector<char> seen(n, 0);
    std::vector<Vertex> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        stack.pop_back();
        neighbours(v, nb);
        for (auto u : nb)
            if (!seen[u]) {
                seen[u] = 1;
                ++reached;
                stack.push_back(u);
            }
    }
    if (reached != n) throw InvalidSpecError("graph is not connected");
}

std::vector<PantsGraph::Vertex> boundary_by_adjacency(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K) {
    const std::unordered_set<PantsGraph::Vertex> in(K.begin(), K.end());
    std::vector<PantsGraph::Vertex> out, nb;
    for (auto v : K) {
        bool edge = g.stubs(v) > 0;
        g.neighbours(v, nb);
        for (auto u : nb) edge = edge || !in.count(u);
        if (edge) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<PantsGraph::Vertex> boundary_by_complement(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K) {
    const std::unordered_set<PantsGraph::Vertex> in(K.begin(), K.end());
    std::set<PantsGraph::Vertex> outside, marked;
    std::vector<PantsGraph::Vertex> nb, nb2;
    for (auto v : K) {
        if (g.stubs(v) > 0) marked.insert(v);
        g.neighbours(v, nb);
        for (auto u : nb)
            if (!in.count(u)) outside.insert(u);
    }
    for (auto u : outside) {
        g.neighbours(u, nb2);
        for (auto w : nb2)
            if (in.count(w)) marked.insert(w);
    }
    return {marked.begin(), marked.end()};
}

std::uint64_t boundary_edge_count(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K) {
    const std::unordered_set<PantsGraph::Vertex> in(K.begin(), K.end());
    std::uint64_t e = 0;
    std::vector<PantsGraph::Vertex> nb;
    for (auto v : K) {
        e += static_cast<std::uint64_t>(g.stubs(v) + g.funnels(v));
        g.neighbours(v, nb);
        for (auto u : nb) e += !in.count(u);
    }
    return e;
}

bool is_connected_subset(const PantsGraph& g, const std::vector<PantsGraph::Vertex>& K) {
    if (K.empty()) return false;
    const std::unordered_set<PantsGraph::Vertex> in(K.begin(), K.end());
    std::unordered_set<PantsGraph::Vertex> seen{K.front()};
    std::vector<PantsGraph::Vertex> stack{K.front()}, nb;
    while (!stack.empty()) {
        const auto v = stack.back();
        stack.pop_back();
        g.neighbours(v, nb);
        for (auto u : nb)
            if (in.count(u) && seen.insert(u).second) stack.push_back(u);
    }
    return seen.size() == in.size();
}

std::string to_string(AmenabilityTrend t) {
    switch (t) {
        case AmenabilityTrend::Amenable:
            return "amenable";
        case AmenabilityTrend::Nonamenable:
            return "nonamenable";
        case AmenabilityTrend::Inconclusive:
        default:
            return "inconclusive";
    }
}

namespace {

// Lazily materialised local copy of the graph with incremental boundary
// bookkeeping for a growing vertex set S.
class Growth {
public:
    explicit Growth(const PantsGraph& g) : g_(g) {}

    std::uint32_t local(PantsGraph::Vertex v) {
        auto [it, fresh] = id_.try_emplace(v, static_cast<std::uint32_t>(global_.size()));
        if (fresh) {
            global_.push_back(v);
            adj_.emplace_back();
            expanded_.push_back(0);
            extra_.push_back(g_.stubs(v));
            funnels_.push_back(g_.funnels(v));
            n_in_.push_back(0);
            in_s_.push_back(0);
            mark_.push_back(0);
        }
        return it->second;
    }

    const std::vector<std::uint32_t>& adj(std::uint32_t v) {
        if (!expanded_[v]) {
            g_.neighbours(global_[v], scratch_);
            std::vector<std::uint32_t> a;
            a.reserve(scratch_.size());
            for (auto u : scratch_) a.push_back(local(u));
            adj_[v] = std::move(a);
            expanded_[v] = 1;
        }
        return adj_[v];
    }

    std::int64_t out(std::uint32_t v) const {
        return static_cast<std::int64_t>(adj_[v].size()) + extra_[v] - n_in_[v];
    }

    void add(std::uint32_t w) {
        const auto& a = adj(w);
        in_s_[w] = 1;
        ++size_;
        edges_ += out(w) + funnels_[w];
        for (auto u : a) {
            ++n_in_[u];
            if (in_s_[u]) {
                --edges_;
                if (u != w && out(u) == 0) --dB_;
            }
        }
        if (out(w) > 0) ++dB_;
    }

    void remove(std::uint32_t w) {
        const auto& a = adj_[w];
        if (out(w) > 0) --dB_;
        for (auto it = a.rbegin(); it != a.rend(); ++it) {
            const auto u = *it;
            if (in_s_[u]) {
                if (u != w && out(u) == 0) ++dB_;
                ++edges_;
            }
            --n_in_[u];
        }
        edges_ -= out(w) + funnels_[w];
        in_s_[w] = 0;
        --size_;
    }

    std::uint64_t size() const { return size_; }
    std::int64_t dB() const { return dB_; }
    std::int64_t edges() const { return edges_; }
    bool in_s(std::uint32_t v) const { return in_s_[v]; }
    PantsGraph::Vertex global(std::uint32_t v) const { return global_[v]; }
    std::uint8_t& mark(std::uint32_t v) { return mark_[v]; }

private:
    const PantsGraph& g_;
    std::unordered_map<PantsGraph::Vertex, std::uint32_t> id_;
    std::vector<PantsGraph::Vertex> global_;
    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<std::uint8_t> expanded_;
    std::vector<int> extra_, funnels_;
    std::vector<std::int64_t> n_in_;
    std::vector<std::uint8_t> in_s_, mark_;
    std::vector<PantsGraph::Vertex> scratch_;
    std::uint64_t size_ = 0;
    std::int64_t dB_ = 0, edges_ = 0;
};

struct Tally {
    std::uint64_t count = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    double best_area = 0;
    bool no_boundary = false;
    bool aborted = false;
};

enum : std::uint8_t { kFree = 0, kExt = 1, kBanned = 2 };

// Enumerates connected sets containing the root, each exactly once: a branch
// includes ext[i] and bans ext[0..i-1]. Sets of size `target` are tallied.
class Enumerator {
public:
    Enumerator(Growth& gr, std::uint64_t target, std::atomic<std::uint64_t>& nodes, std::uint64_t budget)
        : gr_(gr), target_(target), nodes_(nodes), budget_(budget) {}

    void run(std::vector<std::uint32_t> ext) { rec(ext, 0); }

    // The body of one branch at the top level.
    void branch(const std::vector<std::uint32_t>& ext, std::size_t i) {
        for (std::size_t j = 0; j < i; ++j) gr_.mark(ext[j]) = kBanned;
        step(ext, i);
    }

    Tally tally;

private:
    void record() {
        if (gr_.size() != target_) return;
        ++tally.count;
        const double s = static_cast<double>(gr_.size());
        tally.min_ratio = std::min(tally.min_ratio, static_cast<double>(gr_.dB()) / s);
        if (gr_.edges() == 0)
            tally.no_boundary = true;
        else
            tally.best_area = std::max(tally.best_area, s / static_cast<double>(gr_.edges()));
    }

    void step(const std::vector<std::uint32_t>& ext, std::size_t i) {
        const auto w = ext[i];
        gr_.add(w);
        std::vector<std::uint32_t> next(ext.begin() + static_cast<std::ptrdiff_t>(i) + 1, ext.end());
        const std::size_t base = next.size();
        for (auto u : gr_.adj(w))
            if (!gr_.in_s(u) && gr_.mark(u) == kFree) {
                gr_.mark(u) = kExt;
                next.push_back(u);
            }
        rec(next, 0);
        for (std::size_t j = base; j < next.size(); ++j) gr_.mark(next[j]) = kFree;
        gr_.remove(w);
    }

    void rec(const std::vector<std::uint32_t>& ext, int) {
        if (tally.aborted) return;
        if (nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_) {
            tally.aborted = true;
            return;
        }
        record();
        if (gr_.size() >= target_) return;
        for (std::size_t i = 0; i < ext.size() && !tally.aborted; ++i) {
            step(ext, i);
            gr_.mark(ext[i]) = kBanned;
        }
        for (auto u : ext) gr_.mark(u) = kExt;
    }

    Growth& gr_;
    std::uint64_t target_;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t budget_;
};

// All connected sets of exactly `target` vertices containing the root,
// parallel over the root's first extensions.
Tally enumerate_size(const PantsGraph& g, PantsGraph::Vertex root, std::uint64_t target,
                     std::atomic<std::uint64_t>& nodes, std::uint64_t budget) {
    std::vector<PantsGraph::Vertex> first;
    g.neighbours(root, first);
    std::sort(first.begin(), first.end());
    first.erase(std::unique(first.begin(), first.end()), first.end());
    first.erase(std::remove(first.begin(), first.end(), root), first.end());
    auto setup = [&](Growth& gr) {
        gr.add(gr.local(root));
        std::vector<std::uint32_t> ext;
        for (auto v : first) {
            ext.push_back(gr.local(v));
            gr.mark(ext.back()) = kExt;
        }
        return ext;
    };
    Tally total;
    if (target == 1) {
        Growth gr(g);
        setup(gr);
        Enumerator e(gr, 1, nodes, budget);
        e.run({});
        return e.tally;
    }
    std::vector<Tally> parts(first.size());
    parallel_for(first.size(), [&](std::size_t i) {
        Growth gr(g);
        const auto ext = setup(gr);
        Enumerator e(gr, target, nodes, budget);
        e.branch(ext, i);
        parts[i] = e.tally;
    });
    for (const auto& p : parts) {
        total.count += p.count;
        total.min_ratio = std::min(total.min_ratio, p.min_ratio);
        total.best_area = std::max(total.best_area, p.best_area);
        total.no_boundary = total.no_boundary || p.no_boundary;
        total.aborted = total.aborted || p.aborted;
    }
    return total;
}

struct HeuristicPoint {
    std::uint64_t m;
    double ratio;
    double area;
};

// Ratios of BFS balls about the root, up to m_heur vertices.
std::vector<HeuristicPoint> ball_sequence(const PantsGraph& g, PantsGraph::Vertex root, std::uint64_t m_heur,
                                          bool& no_boundary) {
    Growth gr(g);
    std::vector<HeuristicPoint> out;
    std::vector<std::uint32_t> layer{gr.local(root)};
    gr.mark(layer[0]) = 1;
    while (!layer.empty() && gr.size() + layer.size() <= m_heur) {
        std::vector<std::uint32_t> next;
        for (auto v : layer) gr.add(v);
        for (auto v : layer)
            for (auto u : gr.adj(v))
                if (!gr.mark(u)) {
                    gr.mark(u) = 1;
                    next.push_back(u);
                }
        const double s = static_cast<double>(gr.size());
        if (gr.edges() == 0) no_boundary = true;
        out.push_back({gr.size(), static_cast<double>(gr.dB()) / s,
                       gr.edges() > 0 ? s / static_cast<double>(gr.edges()) : 0.0});
        layer = std::move(next);
    }
    return out;
}

// Greedy accretion: repeatedly add the frontier vertex giving the smallest
// vertex boundary, then the smallest edge boundary, then the smallest id.
std::vector<HeuristicPoint> greedy_sequence(const PantsGraph& g, PantsGraph::Vertex root, std::uint64_t m_heur,
                                            bool& no_boundary) {
    Growth gr(g);
    using Key = std::tuple<std::int64_t, std::int64_t, PantsGraph::Vertex>;
    std::set<Key> queue;
    std::unordered_map<std::uint32_t, Key> key_of;
    auto score = [&](std::uint32_t w) {
        gr.add(w);
        const Key k{gr.dB(), gr.edges(), gr.global(w)};
        gr.remove(w);
        return k;
    };
    auto refresh = [&](std::uint32_t w) {
        if (gr.in_s(w)) return;
        auto it = key_of.find(w);
        if (it != key_of.end()) queue.erase(it->second);
        const Key k = score(w);
        key_of[w] = k;
        queue.insert(k);
    };
    std::unordered_map<PantsGraph::Vertex, std::uint32_t> by_global;
    auto add = [&](std::uint32_t w) {
        auto it = key_of.find(w);
        if (it != key_of.end()) {
            queue.erase(it->second);
            key_of.erase(it);
        }
        gr.add(w);
        std::vector<std::uint32_t> touched;
        for (auto u : gr.adj(w)) {
            touched.push_back(u);
            for (auto x : gr.adj(u)) touched.push_back(x);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        for (auto u : touched) {
            if (gr.in_s(u)) continue;
            bool frontier = false;
            for (auto x : gr.adj(u)) frontier = frontier || gr.in_s(x);
            if (frontier) {
                by_global[gr.global(u)] = u;
                refresh(u);
            }
        }
    };
    std::vector<HeuristicPoint> out;
    add(gr.local(root));
    std::uint64_t next_record = 1;
    while (true) {
        const double s = static_cast<double>(gr.size());
        if (gr.size() >= next_record || gr.size() == m_heur || queue.empty()) {
            if (gr.edges() == 0) no_boundary = true;
            out.push_back({gr.size(), static_cast<double>(gr.dB()) / s,
                           gr.edges() > 0 ? s / static_cast<double>(gr.edges()) : 0.0});
            next_record = std::max(next_record + 1, static_cast<std::uint64_t>(std::ceil(next_record * 1.25)));
        }
        if (gr.size() >= m_heur || queue.empty()) break;
        const auto best = *queue.begin();
        add(by_global.at(std::get<2>(best)));
    }
    return out;
}

}  // namespace

IsoProfile iso_profile(const PantsGraph& g, PantsGraph::Vertex root, const IsoOptions& opts) {
    if (!g.contains(root)) throw DomainError("root is not a vertex of the graph");
    if (opts.m_exact < 1 || opts.m_exact > 18) throw DomainError("exact search size must lie in [1, 18]");
    if (opts.m_heur < 1) throw DomainError("heuristic size must be positive");
    const std::uint64_t budget = opts.budget ? opts.budget : env_u64("HYPENT_ISO_BUDGET", 200'000'000ULL);
    IsoProfile p;
    p.root = root;
    std::atomic<std::uint64_t> nodes{0};
    double running = std::numeric_limits<double>::infinity();
    bool no_boundary = false;
    for (int m = 1; m <= opts.m_exact; ++m) {
        const auto t = enumerate_size(g, root, static_cast<std::uint64_t>(m), nodes, budget);
        if (t.aborted) {
            p.partial = true;
            break;
        }
        if (t.count == 0) break;  // finite graph exhausted
        running = std::min(running, t.min_ratio);
        p.exact.push_back(running);
        p.enumerated.push_back(t.count);
        p.exact_up_to = m;
        no_boundary = no_boundary || t.no_boundary;
        if (t.best_area > p.best_area_ratio) {
            p.best_area_ratio = t.best_area;
            p.best_area_size = static_cast<std::uint64_t>(m);
        }
    }
    std::vector<HeuristicPoint> pts = ball_sequence(g, root, opts.m_heur, no_boundary);
    const auto greedy = greedy_sequence(g, root, opts.m_heur, no_boundary);
    pts.insert(pts.end(), greedy.begin(), greedy.end());
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.m < b.m; });
    for (const auto& h : pts) {
        if (h.area > p.best_area_ratio) {
            p.best_area_ratio = h.area;
            p.best_area_size = h.m;
        }
        if (h.m <= static_cast<std::uint64_t>(p.exact_up_to)) continue;
        running = std::min(running, h.ratio);
        if (!p.heuristic.empty() && p.heuristic.back().first == h.m)
            p.heuristic.back().second = running;
        else
            p.heuristic.emplace_back(h.m, running);
    }
    if (no_boundary) p.best_area_ratio = std::numeric_limits<double>::infinity();
    p.min_ratio = running;
    p.final_ratio = p.heuristic.empty() ? running : p.heuristic.back().second;
    // Trend of log phi against log m over the upper half of the searched sizes.
    std::vector<double> xs, ys;
    const double m_top = p.heuristic.empty() ? 1.0 : static_cast<double>(p.heuristic.back().first);
    for (const auto& [m, r] : p.heuristic)
        if (m >= std::sqrt(m_top) && r > 0) {
            xs.push_back(std::log(static_cast<double>(m)));
            ys.push_back(std::log(r));
        }
    const double slope = xs.size() >= 2 ? fit_line(xs, ys).slope : 0.0;
    if (p.min_ratio < opts.threshold)
        p.verdict = AmenabilityTrend::Amenable;
    else if (slope > -0.1)
        p.verdict = AmenabilityTrend::Nonamenable;
    else
        p.verdict = AmenabilityTrend::Inconclusive;
    return p;
}

HPEstimate hP_estimate(const PantsGraph& g, const IsoOptions& opts) {
    const auto p = iso_profile(g, g.root(), opts);
    HPEstimate h;
    h.exact_up_to = p.exact_up_to;
    h.best_size = p.best_area_size;
    h.unbounded = !std::isfinite(p.best_area_ratio);
    h.value = 2 * std::numbers::pi * p.best_area_ratio / g.ell();
    return h;
}

SpectralChain spectral_chain(double hP, double b, double B) {
    if (!(hP >= 0) || !std::isfinite(hP)) throw DomainError("hP must be finite and non-negative");
    if (!(b > 0) || !(B > 0)) throw DomainError("chain constants must be positive");
    SpectralChain c;
    c.hP = hP;
    c.b = b;
    c.B = B;
    c.h_high = b * hP + 1;
    c.h_low = std::max(1.0, hP);
    c.lambda0_low = 1 / (4 * c.h_high * c.h_high);
    c.lambda0_high = B / c.h_low;
    c.delta_high = 0.5 + std::sqrt(std::max(0.0, 0.25 - c.lambda0_low));
    c.delta_low = c.lambda0_high >= 0.25 ? 0.5 : 0.5 + std::sqrt(0.25 - c.lambda0_high);
    return c;
}

double hexagon_r(double ell) {
    check_ell(ell);
    const double s = std::pow(std::sinh(ell / 4), 2);
    return std::acosh(std::sqrt((4 * s + 1) / (3 * s)));
}

double hexagon_d(double ell) {
    check_ell(ell);
    const double s = std::pow(std::sinh(ell / 4), 2);
    return 2 * std::acosh(std::sqrt((5 * s + 1) / (4 * s)));
}

std::string to_string(GapExample e) { return e == GapExample::Panty ? "panty" : "pruned"; }

namespace {

PantsGraph example_graph(GapExample e, int depth, double ell) {
    return e == GapExample::Panty ? PantsGraph::binary_tree(depth, ell) : PantsGraph::pruned_tree(depth, ell);
}

GapRow gap_row(GapExample e, double ell, double area_ratio, const GapOptions& opts) {
    GapRow r;
    r.ell = ell;
    r.Delta_low = e == GapExample::Panty ? std::log(2.0) / (2 * hexagon_r(ell)) : std::log(3.0) / (2 * hexagon_d(ell));
    r.hP = 2 * std::numbers::pi * area_ratio / ell;
    r.delta_high = spectral_chain(r.hP, opts.b, opts.B).delta_high;
    r.gap = r.Delta_low - r.delta_high;
    return r;
}

}  // namespace

GapRow gap_bounds(GapExample example, double ell, const GapOptions& opts) {
    const auto g = example_graph(example, opts.tree_depth, ell);
    const auto p = iso_profile(g, g.root(), opts.iso);
    return gap_row(example, ell, p.best_area_ratio, opts);
}

GapScan gap_scan(GapExample example, const std::vector<double>& ell_grid, const GapOptions& opts) {
    GapScan s;
    if (ell_grid.empty()) return s;
    // hP scales as 1 / ell on a fixed graph, so one search serves the grid.
    const auto g = example_graph(example, opts.tree_depth, 1.0);
    const double ratio = iso_profile(g, g.root(), opts.iso).best_area_ratio;
    for (double ell : ell_grid) {
        check_ell(ell);
        s.rows.push_back(gap_row(example, ell, ratio, opts));
        if (s.rows.back().gap > 0 && !s.first_positive) s.first_positive = ell;
    }
    return s;
}

}  // namespace hypent
