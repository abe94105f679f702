#include "garland/shape.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <tuple>

namespace garland {

void validate(const GarlandShape& shape) {
    for (const auto& mark : shape.marks) {
        if (mark.grading < 1) throw ValidationError("grading must be >= 1");
        for (const auto& p : mark.points) {
            if (p.copy >= shape.copies) {
                throw ValidationError("copy index " + std::to_string(p.copy) + " out of range (copies=" +
                                      std::to_string(shape.copies) + ")");
            }
        }
    }
}

namespace {

// Vertex layout: copies [0, k), points [k, k + P), marks [k + P, N).
struct ShapeGraph {
    int copies = 0;
    int points = 0;
    int marks = 0;
    std::vector<int> point_copy;                 // by point index
    std::vector<std::vector<int>> mark_points;   // point indices, with repetition
    std::vector<std::uint32_t> grading;
    std::vector<std::uint8_t> color;
    std::vector<std::vector<std::pair<int, int>>> adj;  // (neighbour, multiplicity)
    std::vector<int> initial;

    int size() const { return copies + points + marks; }
};

ShapeGraph build_graph(const GarlandShape& shape, std::span<const std::uint8_t> colors) {
    ShapeGraph g;
    g.copies = static_cast<int>(shape.copies);
    std::map<PointRef, int> index;
    for (const auto& m : shape.marks)
        for (const auto& p : m.points) index.emplace(p, 0);
    int next = 0;
    for (auto& [p, i] : index) {
        i = next++;
        g.point_copy.push_back(static_cast<int>(p.copy));
    }
    g.points = next;
    g.marks = static_cast<int>(shape.marks.size());
    for (std::size_t i = 0; i < shape.marks.size(); ++i) {
        std::vector<int> pts;
        for (const auto& p : shape.marks[i].points) pts.push_back(index.at(p));
        std::sort(pts.begin(), pts.end());
        g.mark_points.push_back(std::move(pts));
        g.grading.push_back(shape.marks[i].grading);
        g.color.push_back(colors.empty() ? 0 : colors[i]);
    }

    const int n = g.size();
    g.adj.assign(static_cast<std::size_t>(n), {});
    auto add_edge = [&](int a, int b, int mult) {
        g.adj[a].emplace_back(b, mult);
        g.adj[b].emplace_back(a, mult);
    };
    for (int p = 0; p < g.points; ++p) add_edge(g.point_copy[p], g.copies + p, 1);
    for (int m = 0; m < g.marks; ++m) {
        const auto& pts = g.mark_points[m];
        for (std::size_t i = 0; i < pts.size();) {
            std::size_t j = i;
            while (j < pts.size() && pts[j] == pts[i]) ++j;
            add_edge(g.copies + g.points + m, g.copies + pts[i], static_cast<int>(j - i));
            i = j;
        }
    }

    std::vector<std::tuple<int, std::uint32_t, int>> keys(static_cast<std::size_t>(n));
    for (int v = 0; v < g.copies; ++v) keys[v] = {0, 0, 0};
    for (int p = 0; p < g.points; ++p) keys[g.copies + p] = {1, 0, 0};
    for (int m = 0; m < g.marks; ++m) keys[g.copies + g.points + m] = {2, g.grading[m], g.color[m]};
    auto sorted = keys;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    g.initial.resize(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v)
        g.initial[v] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), keys[v]) - sorted.begin());
    return g;
}

int color_count(const std::vector<int>& col) {
    return col.empty() ? 0 : *std::max_element(col.begin(), col.end()) + 1;
}

// Colour refinement to the coarsest equitable partition finer than `col`.
// New colours are ranks of sorted signatures, so the result is equivariant.
std::vector<int> refine(const ShapeGraph& g, std::vector<int> col) {
    const int n = g.size();
    int classes = color_count(col);
    std::vector<std::vector<int>> sig(static_cast<std::size_t>(n));
    std::vector<int> order(static_cast<std::size_t>(n));
    for (;;) {
        for (int v = 0; v < n; ++v) {
            auto& s = sig[v];
            s.clear();
            std::vector<std::pair<int, int>> nb;
            nb.reserve(g.adj[v].size());
            for (auto [w, mult] : g.adj[v]) nb.emplace_back(col[w], mult);
            std::sort(nb.begin(), nb.end());
            s.push_back(col[v]);
            for (auto [c, mult] : nb) {
                s.push_back(c);
                s.push_back(mult);
            }
        }
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
        std::vector<int> next(static_cast<std::size_t>(n));
        int rank = -1;
        for (int i = 0; i < n; ++i) {
            if (i == 0 || sig[order[i]] != sig[order[i - 1]]) ++rank;
            next[order[i]] = rank;
        }
        col = std::move(next);
        if (rank + 1 == classes) return col;
        classes = rank + 1;
    }
}

std::vector<int> individualize(const std::vector<int>& col, int v) {
    std::vector<int> out(col.size());
    for (std::size_t u = 0; u < col.size(); ++u) out[u] = 2 * col[u] + (static_cast<int>(u) == v ? 0 : 1);
    return out;
}

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

// Individualisation-refinement search for the minimum leaf certificate, with
// pruning by automorphisms discovered at equal leaves.
class CanonicalSearch {
public:
    explicit CanonicalSearch(const ShapeGraph& g) : g_(g) {}

    std::vector<int> run() {
        std::vector<int> prefix;
        descend(g_.initial, prefix);
        return best_rank_;
    }

private:
    std::vector<int> certificate(const std::vector<int>& rank) const {
        const int n = g_.size();
        std::vector<int> by_rank(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) by_rank[rank[v]] = v;
        std::vector<int> cert{g_.copies, g_.points, g_.marks};
        for (int r = g_.copies; r < g_.copies + g_.points; ++r) {
            const int p = by_rank[r] - g_.copies;
            cert.push_back(rank[g_.point_copy[p]]);
        }
        for (int r = g_.copies + g_.points; r < n; ++r) {
            const int m = by_rank[r] - g_.copies - g_.points;
            cert.push_back(static_cast<int>(g_.grading[m]));
            cert.push_back(g_.color[m]);
            cert.push_back(static_cast<int>(g_.mark_points[m].size()));
            std::vector<int> pts;
            for (int p : g_.mark_points[m]) pts.push_back(rank[g_.copies + p]);
            std::sort(pts.begin(), pts.end());
            cert.insert(cert.end(), pts.begin(), pts.end());
        }
        return cert;
    }

    void record_automorphism(const std::vector<int>& rank, const std::vector<int>& reference) {
        const int n = g_.size();
        std::vector<int> inv(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v) inv[reference[v]] = v;
        std::vector<int> gamma(static_cast<std::size_t>(n));
        bool identity = true;
        for (int v = 0; v < n; ++v) {
            gamma[v] = inv[rank[v]];
            identity = identity && gamma[v] == v;
        }
        if (!identity) automorphisms_.push_back(std::move(gamma));
    }

    void leaf(const std::vector<int>& rank) {
        auto cert = certificate(rank);
        if (!have_leaf_) {
            have_leaf_ = true;
            first_cert_ = best_cert_ = cert;
            first_rank_ = best_rank_ = rank;
            return;
        }
        if (cert == first_cert_) {
            record_automorphism(rank, first_rank_);
        } else if (cert == best_cert_) {
            record_automorphism(rank, best_rank_);
        } else if (cert < best_cert_) {
            best_cert_ = std::move(cert);
            best_rank_ = rank;
        }
    }

    void descend(const std::vector<int>& start, std::vector<int>& prefix) {
        const auto col = refine(g_, start);
        const int n = g_.size();
        const int classes = color_count(col);
        if (classes == n) {
            leaf(col);
            return;
        }
        std::vector<int> count(static_cast<std::size_t>(classes), 0);
        for (int c : col) ++count[c];
        int target = -1;
        for (int c = 0; c < classes; ++c) {
            if (count[c] > 1 && (target < 0 || count[c] < count[target])) target = c;
        }
        std::vector<int> explored;
        for (int v = 0; v < n; ++v) {
            if (col[v] != target) continue;
            if (!explored.empty() && in_explored_orbit(v, explored, prefix)) continue;
            explored.push_back(v);
            prefix.push_back(v);
            descend(individualize(col, v), prefix);
            prefix.pop_back();
        }
    }

    bool in_explored_orbit(int v, const std::vector<int>& explored, const std::vector<int>& prefix) {
        UnionFind uf(g_.size());
        bool any = false;
        for (const auto& gamma : automorphisms_) {
            bool fixes = std::all_of(prefix.begin(), prefix.end(), [&](int p) { return gamma[p] == p; });
            if (!fixes) continue;
            any = true;
            for (int u = 0; u < g_.size(); ++u) uf.unite(u, gamma[u]);
        }
        if (!any) return false;
        const int root = uf.find(v);
        return std::any_of(explored.begin(), explored.end(), [&](int u) { return uf.find(u) == root; });
    }

    const ShapeGraph& g_;
    bool have_leaf_ = false;
    std::vector<int> first_cert_, best_cert_;
    std::vector<int> first_rank_, best_rank_;
    std::vector<std::vector<int>> automorphisms_;
};

}  // namespace

ColoredShape canonicalize(const GarlandShape& shape, std::span<const std::uint8_t> mark_colors) {
    validate(shape);
    if (!mark_colors.empty() && mark_colors.size() != shape.marks.size())
        throw ValidationError("mark colour count does not match mark count");

    const auto g = build_graph(shape, mark_colors);
    ColoredShape out;
    out.shape.copies = shape.copies;
    if (g.size() == 0) return out;

    const auto rank = CanonicalSearch(g).run();

    // Copies occupy ranks [0, k); points are numbered per copy in rank order.
    std::vector<int> point_order(static_cast<std::size_t>(g.points));
    std::iota(point_order.begin(), point_order.end(), 0);
    std::sort(point_order.begin(), point_order.end(),
              [&](int a, int b) { return rank[g.copies + a] < rank[g.copies + b]; });
    std::vector<PointRef> relabel(static_cast<std::size_t>(g.points));
    std::vector<std::uint32_t> next_label(static_cast<std::size_t>(g.copies), 0);
    for (int p : point_order) {
        const auto copy = static_cast<std::uint32_t>(rank[g.point_copy[p]]);
        relabel[p] = PointRef{copy, next_label[copy]++};
    }

    std::vector<std::pair<Mark, std::uint8_t>> marks;
    for (int m = 0; m < g.marks; ++m) {
        Mark mk{g.grading[m], {}};
        for (int p : g.mark_points[m]) mk.points.push_back(relabel[p]);
        std::sort(mk.points.begin(), mk.points.end());
        marks.emplace_back(std::move(mk), g.color[m]);
    }
    std::sort(marks.begin(), marks.end());
    for (auto& [mk, c] : marks) {
        out.shape.marks.push_back(std::move(mk));
        out.mark_colors.push_back(c);
    }
    if (mark_colors.empty()) out.mark_colors.clear();
    return out;
}

GarlandShape canonicalize(const GarlandShape& shape) { return canonicalize(shape, {}).shape; }

bool shapes_equal(const GarlandShape& a, const GarlandShape& b) {
    if (a.copies != b.copies || a.marks.size() != b.marks.size()) return false;
    return canonicalize(a) == canonicalize(b);
}

ComponentSignature signature(const GarlandShape& shape) {
    ComponentSignature sig{shape.copies, {}};
    for (const auto& m : shape.marks) sig.gradings.push_back(m.grading);
    std::sort(sig.gradings.begin(), sig.gradings.end());
    return sig;
}

DisjointUnion disjoint_union(const GarlandShape& first, const GarlandShape& second) {
    DisjointUnion u;
    u.shape.copies = first.copies + second.copies;
    for (std::uint32_t c = 0; c < first.copies; ++c) u.copy_map_first.push_back(c);
    for (std::uint32_t c = 0; c < second.copies; ++c) u.copy_map_second.push_back(first.copies + c);
    u.shape.marks = first.marks;
    for (auto m : second.marks) {
        for (auto& p : m.points) p.copy += first.copies;
        u.shape.marks.push_back(std::move(m));
    }
    return u;
}

std::size_t grading_one_count(const GarlandShape& shape) {
    return static_cast<std::size_t>(
        std::count_if(shape.marks.begin(), shape.marks.end(), [](const Mark& m) { return m.grading == 1; }));
}

std::uint32_t fresh_label(const GarlandShape& shape, std::uint32_t copy) {
    std::uint32_t next = 0;
    for (const auto& m : shape.marks)
        for (const auto& p : m.points)
            if (p.copy == copy) next = std::max(next, p.label + 1);
    return next;
}

std::string describe(const GarlandShape& shape) {
    std::ostringstream os;
    os << "copies=" << shape.copies << " marks=[";
    for (const auto& m : shape.marks) {
        os << "{g=" << m.grading << ";";
        for (std::size_t i = 0; i < m.points.size(); ++i)
            os << (i ? "," : "") << "(" << m.points[i].copy << "," << m.points[i].label << ")";
        os << "}";
    }
    os << "]";
    return os.str();
}

}  // namespace garland
