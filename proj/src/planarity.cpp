#include "kmodal/planarity.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>

namespace kmodal {

namespace {

struct UGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> inc;  // vertex -> edge indices

    static UGraph make(int n, const std::vector<std::pair<int, int>>& es) {
        UGraph g;
        g.n = n;
        g.edges = es;
        g.inc.resize((size_t)n);
        for (int e = 0; e < (int)es.size(); ++e) {
            g.inc[(size_t)es[(size_t)e].first].push_back(e);
            g.inc[(size_t)es[(size_t)e].second].push_back(e);
        }
        return g;
    }
    int other(int e, int v) const {
        return edges[(size_t)e].first == v ? edges[(size_t)e].second : edges[(size_t)e].first;
    }
};

// biconnected components as edge lists (lowpoint algorithm, iterative)
std::vector<std::vector<int>> block_edges(const UGraph& g) {
    std::vector<int> num((size_t)g.n, -1), low((size_t)g.n, 0);
    std::vector<std::vector<int>> blocks;
    std::vector<int> edge_stack;
    int counter = 0;
    std::vector<char> edge_used((size_t)g.edges.size(), 0);

    struct Frame {
        int v;
        int parent_edge;
        size_t i;
    };
    for (int s = 0; s < g.n; ++s) {
        if (num[(size_t)s] != -1) continue;
        std::vector<Frame> stack;
        num[(size_t)s] = low[(size_t)s] = counter++;
        stack.push_back({s, -1, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            if (f.i < g.inc[(size_t)f.v].size()) {
                int e = g.inc[(size_t)f.v][f.i++];
                if (e == f.parent_edge) continue;
                int w = g.other(e, f.v);
                if (w == f.v) continue;  // self-loop
                if (num[(size_t)w] == -1) {
                    edge_stack.push_back(e);
                    edge_used[(size_t)e] = 1;
                    num[(size_t)w] = low[(size_t)w] = counter++;
                    stack.push_back({w, e, 0});
                } else {
                    if (!edge_used[(size_t)e] && num[(size_t)w] < num[(size_t)f.v]) {
                        edge_stack.push_back(e);
                        edge_used[(size_t)e] = 1;
                    }
                    low[(size_t)f.v] = std::min(low[(size_t)f.v], num[(size_t)w]);
                }
            } else {
                int v = f.v;
                int pe = f.parent_edge;
                stack.pop_back();
                if (stack.empty()) continue;
                int u = stack.back().v;
                low[(size_t)u] = std::min(low[(size_t)u], low[(size_t)v]);
                if (low[(size_t)v] >= num[(size_t)u]) {
                    // u is a cut vertex (or root): pop the block of edge pe
                    std::vector<int> blk;
                    while (!edge_stack.empty()) {
                        int e = edge_stack.back();
                        if (num[(size_t)g.edges[(size_t)e].first] >= num[(size_t)v] ||
                            num[(size_t)g.edges[(size_t)e].second] >= num[(size_t)v] || e == pe) {
                            edge_stack.pop_back();
                            blk.push_back(e);
                            if (e == pe) break;
                        } else {
                            break;
                        }
                    }
                    if (!blk.empty()) blocks.push_back(std::move(blk));
                }
            }
        }
    }
    return blocks;
}

// Demoucron-Malgrange-Pertuiset planar embedding of a biconnected simple graph.
// Faces are maintained as directed vertex cycles; every dart lies on exactly
// one face boundary.
std::optional<std::vector<std::vector<int>>> demoucron(const UGraph& g) {
    int n = g.n;
    int m = (int)g.edges.size();
    if (n >= 3 && m > 3 * n - 6) return std::nullopt;

    std::vector<char> emb_edge((size_t)m, 0), emb_vertex((size_t)n, 0);

    auto finish = [&](const std::vector<std::vector<int>>& faces)
        -> std::optional<std::vector<std::vector<int>>> {
        // rotation from face corners: dart (u -> v) continues with (v -> w)
        std::map<std::pair<int, int>, int> succ;  // (v, from u) -> w
        for (const auto& f : faces) {
            size_t r = f.size();
            for (size_t i = 0; i < r; ++i) {
                int u = f[i], v = f[(i + 1) % r], w = f[(i + 2) % r];
                succ[{v, u}] = w;
            }
        }
        std::vector<std::vector<int>> rot((size_t)n);
        std::map<std::pair<int, int>, int> edge_of;
        for (int e = 0; e < m; ++e) {
            edge_of[{g.edges[(size_t)e].first, g.edges[(size_t)e].second}] = e;
            edge_of[{g.edges[(size_t)e].second, g.edges[(size_t)e].first}] = e;
        }
        for (int v = 0; v < n; ++v) {
            if (g.inc[(size_t)v].empty()) continue;
            int first = g.other(g.inc[(size_t)v][0], v);
            int u = first;
            do {
                rot[(size_t)v].push_back(edge_of.at({v, u}));
                u = succ.at({v, u});
            } while (u != first && rot[(size_t)v].size() <= g.inc[(size_t)v].size());
            if (rot[(size_t)v].size() != g.inc[(size_t)v].size()) return std::nullopt;
        }
        return rot;
    };

    // single edge / tiny cases
    if (m == 1) {
        std::vector<std::vector<int>> rot((size_t)n);
        rot[(size_t)g.edges[0].first] = {0};
        rot[(size_t)g.edges[0].second] = {0};
        return rot;
    }

    // initial cycle: spanning tree plus any non-tree edge
    std::vector<int> parent((size_t)n, -1), parent_edge((size_t)n, -1);
    std::vector<char> seen((size_t)n, 0);
    std::vector<int> cyc;
    {
        std::vector<int> stack = {0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : g.inc[(size_t)v]) {
                int w = g.other(e, v);
                if (!seen[(size_t)w]) {
                    seen[(size_t)w] = 1;
                    parent[(size_t)w] = v;
                    parent_edge[(size_t)w] = e;
                    stack.push_back(w);
                }
            }
        }
        int cu = -1, cv = -1;
        for (int e = 0; e < m && cu == -1; ++e) {
            int a = g.edges[(size_t)e].first, b = g.edges[(size_t)e].second;
            if (!seen[(size_t)a] || !seen[(size_t)b]) return std::nullopt;  // disconnected
            if (parent_edge[(size_t)a] != e && parent_edge[(size_t)b] != e) {
                cu = a;
                cv = b;
            }
        }
        if (cu == -1) return std::nullopt;  // a tree: not biconnected
        // path cu -> root meets path cv -> root
        std::vector<int> pa, pb;
        for (int x = cu; x != -1; x = parent[(size_t)x]) pa.push_back(x);
        for (int x = cv; x != -1; x = parent[(size_t)x]) pb.push_back(x);
        std::set<int> inb(pb.begin(), pb.end());
        int meet = -1;
        for (int x : pa)
            if (inb.count(x)) {
                meet = x;
                break;
            }
        for (int x : pa) {
            cyc.push_back(x);
            if (x == meet) break;
        }
        std::vector<int> tail;
        for (int x : pb) {
            if (x == meet) break;
            tail.push_back(x);
        }
        std::reverse(tail.begin(), tail.end());
        for (int x : tail) cyc.push_back(x);
    }

    std::map<std::pair<int, int>, int> edge_of;
    for (int e = 0; e < m; ++e) {
        edge_of[{g.edges[(size_t)e].first, g.edges[(size_t)e].second}] = e;
        edge_of[{g.edges[(size_t)e].second, g.edges[(size_t)e].first}] = e;
    }

    std::vector<std::vector<int>> faces;
    faces.push_back(cyc);
    {
        auto rev = cyc;
        std::reverse(rev.begin(), rev.end());
        faces.push_back(rev);
    }
    for (size_t i = 0; i < cyc.size(); ++i) {
        emb_vertex[(size_t)cyc[i]] = 1;
        emb_edge[(size_t)edge_of.at({cyc[i], cyc[(i + 1) % cyc.size()]})] = 1;
    }

    int embedded = 0;
    for (int e = 0; e < m; ++e) embedded += emb_edge[(size_t)e];

    while (embedded < m) {
        // fragments: components of unembedded edges glued at unembedded vertices
        std::vector<int> frag_of((size_t)m, -1);
        int nfrag = 0;
        for (int e0 = 0; e0 < m; ++e0) {
            if (emb_edge[(size_t)e0] || frag_of[(size_t)e0] != -1) continue;
            int f = nfrag++;
            std::vector<int> stack = {e0};
            frag_of[(size_t)e0] = f;
            while (!stack.empty()) {
                int e = stack.back();
                stack.pop_back();
                for (int v : {g.edges[(size_t)e].first, g.edges[(size_t)e].second}) {
                    if (emb_vertex[(size_t)v]) continue;
                    for (int e2 : g.inc[(size_t)v]) {
                        if (!emb_edge[(size_t)e2] && frag_of[(size_t)e2] == -1) {
                            frag_of[(size_t)e2] = f;
                            stack.push_back(e2);
                        }
                    }
                }
            }
        }
        std::vector<std::vector<int>> frag_edges((size_t)nfrag);
        std::vector<std::set<int>> attachments((size_t)nfrag);
        for (int e = 0; e < m; ++e) {
            if (emb_edge[(size_t)e]) continue;
            int f = frag_of[(size_t)e];
            frag_edges[(size_t)f].push_back(e);
            for (int v : {g.edges[(size_t)e].first, g.edges[(size_t)e].second})
                if (emb_vertex[(size_t)v]) attachments[(size_t)f].insert(v);
        }

        // admissible faces per fragment
        int best = -1, best_count = -1, best_face = -1;
        for (int f = 0; f < nfrag; ++f) {
            int count = 0, first_face = -1;
            for (int fi = 0; fi < (int)faces.size(); ++fi) {
                std::set<int> fv(faces[(size_t)fi].begin(), faces[(size_t)fi].end());
                bool ok = true;
                for (int a : attachments[(size_t)f])
                    if (!fv.count(a)) {
                        ok = false;
                        break;
                    }
                if (ok) {
                    ++count;
                    if (first_face == -1) first_face = fi;
                }
            }
            if (count == 0) return std::nullopt;
            if (best == -1 || count < best_count) {
                best = f;
                best_count = count;
                best_face = first_face;
            }
        }

        // alpha path between two attachments through the chosen fragment
        const auto& fes = frag_edges[(size_t)best];
        const auto& atts = attachments[(size_t)best];
        if (atts.size() < 2) return std::nullopt;  // input was not biconnected
        int a = *atts.begin();
        std::map<int, std::pair<int, int>> pred;  // vertex -> (prev vertex, edge)
        std::deque<int> q = {a};
        std::set<int> frag_edge_set(fes.begin(), fes.end());
        std::set<int> visited = {a};
        int b = -1;
        while (!q.empty() && b == -1) {
            int v = q.front();
            q.pop_front();
            if (emb_vertex[(size_t)v] && v != a) continue;  // do not pass through embedded vertices
            for (int e : g.inc[(size_t)v]) {
                if (!frag_edge_set.count(e)) continue;
                int w = g.other(e, v);
                if (visited.count(w)) continue;
                visited.insert(w);
                pred[w] = {v, e};
                if (emb_vertex[(size_t)w] && w != a) {
                    b = w;
                    break;
                }
                q.push_back(w);
            }
        }
        if (b == -1) return std::nullopt;  // input was not biconnected
        std::vector<int> path = {b};
        for (int x = b; x != a;) {
            x = pred[x].first;
            path.push_back(x);
        }
        std::reverse(path.begin(), path.end());  // a ... b

        // embed path into face best_face, splitting it
        std::vector<int> F = faces[(size_t)best_face];
        faces.erase(faces.begin() + best_face);
        size_t ia = 0, ib = 0;
        for (size_t i = 0; i < F.size(); ++i) {
            if (F[i] == a) ia = i;
            if (F[i] == b) ib = i;
        }
        std::vector<int> f1, f2;
        for (size_t i = ia; i != ib; i = (i + 1) % F.size()) f1.push_back(F[i]);
        f1.push_back(F[ib]);
        for (size_t i = ib; i != ia; i = (i + 1) % F.size()) f2.push_back(F[i]);
        f2.push_back(F[ia]);
        // f1: a..b along F, then path reversed back to a (exclusive endpoints)
        for (size_t i = path.size() - 2; i >= 1; --i) f1.push_back(path[i]);
        for (size_t i = 1; i + 1 < path.size(); ++i) f2.push_back(path[i]);
        faces.push_back(std::move(f1));
        faces.push_back(std::move(f2));

        for (size_t i = 0; i + 1 < path.size(); ++i) {
            emb_edge[(size_t)edge_of.at({path[i], path[i + 1]})] = 1;
            ++embedded;
        }
        for (int v : path) emb_vertex[(size_t)v] = 1;
    }

    return finish(faces);
}

// drop self-loops and parallel duplicates
UGraph simplify(int n, const std::vector<std::pair<int, int>>& edges) {
    std::set<std::pair<int, int>> seen;
    std::vector<std::pair<int, int>> out;
    for (auto [a, b] : edges) {
        if (a == b) continue;
        std::pair<int, int> key = std::minmax(a, b);
        if (seen.insert(key).second) out.push_back(key);
    }
    return UGraph::make(n, out);
}

}  // namespace

bool is_planar_undirected(int n, const std::vector<std::pair<int, int>>& edges) {
    UGraph g = simplify(n, edges);
    for (const auto& blk : block_edges(g)) {
        if (blk.size() <= 2) continue;
        // re-index block
        std::map<int, int> vid;
        std::vector<std::pair<int, int>> es;
        for (int e : blk) {
            auto [a, b] = g.edges[(size_t)e];
            if (!vid.count(a)) vid[a] = (int)vid.size();
            if (!vid.count(b)) vid[b] = (int)vid.size();
            es.push_back({vid[a], vid[b]});
        }
        if (!demoucron(UGraph::make((int)vid.size(), es)).has_value()) return false;
    }
    return true;
}

std::optional<std::vector<std::vector<int>>> planar_embedding_biconnected(
    int n, const std::vector<std::pair<int, int>>& edges) {
    return demoucron(UGraph::make(n, edges));
}

bool is_planar_digraph(const Digraph& g) {
    std::vector<std::pair<int, int>> es;
    es.reserve((size_t)g.edge_count());
    for (const Edge& e : g.edges()) es.push_back({g.index_of(e.tail), g.index_of(e.head)});
    return is_planar_undirected(g.vertex_count(), es);
}

bool is_outerplanar_digraph(const Digraph& g) {
    int n = g.vertex_count();
    std::vector<std::pair<int, int>> es;
    for (const Edge& e : g.edges()) es.push_back({g.index_of(e.tail), g.index_of(e.head)});
    for (int i = 0; i < n; ++i) es.push_back({n, i});  // apex
    return is_planar_undirected(n + 1, es);
}

bool bimodal_test(const Digraph& g) {
    // split every vertex with both orientations into v_in / v_out joined by an
    // edge, then test the underlying undirected graph for planarity
    int n = g.vertex_count();
    std::vector<int> out_node((size_t)n), in_node((size_t)n);
    int next = 0;
    std::vector<std::pair<int, int>> es;
    for (int i = 0; i < n; ++i) {
        VertexId v = g.vertex_at(i);
        bool has_in = false, has_out = false;
        for (EdgeId e : g.incident(v))
            (g.orientation(e, v) == Orientation::out ? has_out : has_in) = true;
        if (has_in && has_out) {
            in_node[(size_t)i] = next++;
            out_node[(size_t)i] = next++;
            es.push_back({in_node[(size_t)i], out_node[(size_t)i]});
        } else {
            in_node[(size_t)i] = out_node[(size_t)i] = next++;
        }
    }
    for (const Edge& e : g.edges())
        es.push_back({out_node[(size_t)g.index_of(e.tail)], in_node[(size_t)g.index_of(e.head)]});
    return is_planar_undirected(next, es);
}

}  // namespace kmodal
