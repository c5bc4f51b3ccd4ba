#include "kmodal/oracle.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "kmodal/planarity.hpp"

namespace kmodal::oracle {

namespace {

// all cyclic orders of `items` with items[0] fixed first
std::vector<std::vector<EdgeId>> cyclic_orders(std::vector<EdgeId> items) {
    std::vector<std::vector<EdgeId>> out;
    if (items.size() <= 2) {
        out.push_back(items);
        return out;
    }
    std::vector<EdgeId> rest(items.begin() + 1, items.end());
    std::sort(rest.begin(), rest.end());
    do {
        std::vector<EdgeId> r = {items[0]};
        r.insert(r.end(), rest.begin(), rest.end());
        out.push_back(std::move(r));
    } while (std::next_permutation(rest.begin(), rest.end()));
    return out;
}

std::vector<EdgeId> reversed_fixed_first(const std::vector<EdgeId>& r) {
    std::vector<EdgeId> v = {r[0]};
    for (size_t i = r.size() - 1; i >= 1; --i) v.push_back(r[i]);
    return v;
}

}  // namespace

long long enumerate_planar_embeddings(const Digraph& g,
                                      const std::function<void(const RotationSystem&)>& fn,
                                      const EnumOptions& opt) {
    int n = g.vertex_count();
    // pivot: first maximum-degree vertex; its rotations are canonicalized under
    // reflection, which halves the space when its degree is at least 3
    int pivot = 0;
    for (int i = 0; i < n; ++i)
        if (g.degree(g.vertex_at(i)) > g.degree(g.vertex_at(pivot))) pivot = i;

    std::vector<std::vector<std::vector<EdgeId>>> choices((size_t)n);
    long long total = 1;
    for (int i = 0; i < n; ++i) {
        VertexId v = g.vertex_at(i);
        auto inc = g.incident(v);
        std::vector<EdgeId> items(inc.begin(), inc.end());
        std::sort(items.begin(), items.end());
        auto orders = cyclic_orders(items);
        if (i == pivot && items.size() >= 3) {
            std::vector<std::vector<EdgeId>> canon;
            for (auto& r : orders)
                if (r <= reversed_fixed_first(r)) canon.push_back(r);
            orders = std::move(canon);
        }
        if (!orders.empty() && total > opt.budget / (long long)orders.size())
            throw budget_error("embedding enumeration budget exceeded");
        total *= (long long)orders.size();
        choices[(size_t)i] = std::move(orders);
    }

    long long count = 0;
    std::vector<size_t> idx((size_t)n, 0);
    std::vector<std::vector<EdgeId>> rot((size_t)n);
    while (true) {
        for (int i = 0; i < n; ++i) rot[(size_t)i] = choices[(size_t)i][idx[(size_t)i]];
        RotationSystem rs = RotationSystem::from_dense(g, rot);
        if (is_planar_rotation(g, rs)) {
            ++count;
            fn(rs);
        }
        int i = n - 1;
        while (i >= 0 && idx[(size_t)i] + 1 == choices[(size_t)i].size()) {
            idx[(size_t)i] = 0;
            --i;
        }
        if (i < 0) break;
        ++idx[(size_t)i];
    }
    return count;
}

std::optional<int> min_modality(const Digraph& g, const EnumOptions& opt) {
    int best = 0;
    bool any_vertex = g.vertex_count() > 0;
    if (!any_vertex) return 0;
    for (const auto& comp : g.components()) {
        Digraph sub = g.induced(comp);
        int comp_best = -1;
        enumerate_planar_embeddings(
            sub,
            [&](const RotationSystem& rs) {
                int worst = 0;
                for (VertexId v : sub.vertices()) worst = std::max(worst, modality_at(sub, rs, v));
                if (comp_best == -1 || worst < comp_best) comp_best = worst;
            },
            opt);
        if (comp_best == -1) return std::nullopt;  // no planar embedding
        best = std::max(best, comp_best);
    }
    return best;
}

Digraph gen_series_parallel(int n, std::uint64_t seed) {
    if (n < 2) n = 2;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    struct UE {
        VertexId a, b;
    };
    std::vector<UE> edges = {{0, 1}, {0, 1}};
    VertexId next = 2;
    int series_left = n - 2;
    int parallel_left = n / 2 + 1;
    while (series_left > 0 || parallel_left > 0) {
        size_t i = (size_t)(rng() % edges.size());
        bool do_series;
        if (series_left == 0)
            do_series = false;
        else if (parallel_left == 0)
            do_series = true;
        else
            do_series = (rng() % 100) < 55;
        if (do_series) {
            VertexId c = next++;
            VertexId b = edges[i].b;
            edges[i].b = c;
            edges.push_back({c, b});
            --series_left;
        } else {
            edges.push_back(edges[i]);
            --parallel_left;
        }
    }
    std::vector<VertexId> vs;
    for (VertexId v = 0; v < next; ++v) vs.push_back(v);
    std::vector<Edge> es;
    for (const UE& e : edges) {
        if (rng() & 1)
            es.push_back({e.a, e.b});
        else
            es.push_back({e.b, e.a});
    }
    return Digraph::build(std::move(vs), std::move(es));
}

Digraph gen_outerplanar(int n, std::uint64_t seed) {
    if (n < 3) n = 3;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 2);
    int pendants = (n > 6 && (rng() % 3) == 0) ? (int)(rng() % (std::uint64_t)(n / 5 + 1)) : 0;
    int cyc = n - pendants;
    if (cyc < 3) {
        cyc = 3;
        pendants = n - 3;
    }
    std::set<std::pair<VertexId, VertexId>> used;
    std::vector<std::pair<VertexId, VertexId>> und;
    auto add = [&](VertexId a, VertexId b) {
        std::pair<VertexId, VertexId> key = std::minmax(a, b);
        if (used.insert(key).second) und.push_back({a, b});
    };
    for (int i = 0; i < cyc; ++i) add(i, (i + 1) % cyc);
    // non-crossing chords: recursive splitting of polygon intervals
    std::vector<std::pair<int, int>> stack = {{0, cyc - 1}};
    while (!stack.empty()) {
        auto [lo, hi] = stack.back();
        stack.pop_back();
        if (hi - lo < 2) continue;
        if ((rng() % 100) < 55) add(lo, hi);
        int mid = lo + 1 + (int)(rng() % (std::uint64_t)(hi - lo - 1));
        stack.push_back({lo, mid});
        stack.push_back({mid, hi});
    }
    for (int p = 0; p < pendants; ++p) {
        VertexId v = cyc + p;
        und.push_back({(VertexId)(rng() % (std::uint64_t)(cyc + p)), v});
    }
    std::vector<VertexId> vs;
    for (VertexId v = 0; v < cyc + pendants; ++v) vs.push_back(v);
    std::vector<Edge> es;
    for (auto [a, b] : und) {
        Edge e = (rng() & 1) ? Edge{a, b} : Edge{b, a};
        es.push_back(e);
        if ((rng() % 10) == 0) es.push_back((rng() & 1) ? Edge{e.head, e.tail} : e);  // occasional multi-edge
    }
    return Digraph::build(std::move(vs), std::move(es));
}

Digraph gen_planar_bounded_degree(int n, int max_degree, std::uint64_t seed) {
    if (n < 1) n = 1;
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + 3);
    std::vector<VertexId> vs;
    for (VertexId v = 0; v < n; ++v) vs.push_back(v);
    std::vector<Edge> es;
    std::vector<int> deg((size_t)n, 0);
    auto dir = [&](VertexId a, VertexId b) { return (rng() & 1) ? Edge{a, b} : Edge{b, a}; };
    for (VertexId v = 1; v < n; ++v) {
        for (int attempt = 0; attempt < 4 * n; ++attempt) {
            VertexId u = (VertexId)(rng() % (std::uint64_t)v);
            if (deg[(size_t)u] < max_degree || max_degree <= 1) {
                es.push_back(dir(u, v));
                deg[(size_t)u]++;
                deg[(size_t)v]++;
                break;
            }
        }
    }
    int want = n / 2 + (int)(rng() % (std::uint64_t)(n + 1));
    for (int t = 0; t < 6 * want && want > 0; ++t) {
        VertexId a = (VertexId)(rng() % (std::uint64_t)n);
        VertexId b = (VertexId)(rng() % (std::uint64_t)n);
        if (a == b || deg[(size_t)a] >= max_degree || deg[(size_t)b] >= max_degree) continue;
        es.push_back(dir(a, b));
        auto g = Digraph::build(vs, es);
        if (!is_planar_digraph(g)) {
            es.pop_back();
            continue;
        }
        deg[(size_t)a]++;
        deg[(size_t)b]++;
        --want;
    }
    return Digraph::build(std::move(vs), std::move(es));
}

}  // namespace kmodal::oracle
