#include "kmodal/decompose.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>

#include "kmodal/planarity.hpp"

namespace kmodal {

// ---------------- BC tree ----------------

BCTree bc_tree(const Digraph& g) {
    if (!g.connected()) throw std::invalid_argument("bc_tree requires a connected digraph");
    BCTree out;
    int n = g.vertex_count();
    if (n == 0 || g.edge_count() == 0) return out;

    std::vector<int> num((size_t)n, -1), low((size_t)n, 0);
    std::vector<EdgeId> edge_stack;
    std::vector<char> on_stack((size_t)g.edge_count(), 0);
    int counter = 0;
    struct Frame {
        int v;
        EdgeId pe;
        size_t i;
    };
    std::vector<Frame> stack;
    num[0] = low[0] = counter++;
    stack.push_back({0, -1, 0});

    while (!stack.empty()) {
        Frame& f = stack.back();
        VertexId v = g.vertex_at(f.v);
        auto inc = g.incident(v);
        if (f.i < inc.size()) {
            EdgeId e = inc[f.i++];
            if (e == f.pe) continue;
            int w = g.index_of(g.other_end(e, v));
            if (num[(size_t)w] == -1) {
                edge_stack.push_back(e);
                on_stack[(size_t)e] = 1;
                num[(size_t)w] = low[(size_t)w] = counter++;
                stack.push_back({w, e, 0});
            } else {
                if (!on_stack[(size_t)e] && num[(size_t)w] < num[(size_t)f.v]) {
                    edge_stack.push_back(e);
                    on_stack[(size_t)e] = 1;
                }
                low[(size_t)f.v] = std::min(low[(size_t)f.v], num[(size_t)w]);
            }
        } else {
            int child = f.v;
            EdgeId pe = f.pe;
            stack.pop_back();
            if (stack.empty()) break;
            int parent = stack.back().v;
            low[(size_t)parent] = std::min(low[(size_t)parent], low[(size_t)child]);
            if (low[(size_t)child] >= num[(size_t)parent]) {
                BCTree::Block blk;
                while (!edge_stack.empty()) {
                    EdgeId e = edge_stack.back();
                    edge_stack.pop_back();
                    blk.edges.push_back(e);
                    if (e == pe) break;
                }
                std::sort(blk.edges.begin(), blk.edges.end());
                std::set<VertexId> vs;
                for (EdgeId e : blk.edges) {
                    vs.insert(g.edge(e).tail);
                    vs.insert(g.edge(e).head);
                }
                blk.vertices.assign(vs.begin(), vs.end());
                blk.is_bridge = blk.edges.size() == 1;
                out.blocks.push_back(std::move(blk));
            }
        }
    }
    std::sort(out.blocks.begin(), out.blocks.end(),
              [](const BCTree::Block& a, const BCTree::Block& b) { return a.edges[0] < b.edges[0]; });
    std::map<VertexId, std::vector<int>> at;
    for (int b = 0; b < (int)out.blocks.size(); ++b)
        for (VertexId v : out.blocks[(size_t)b].vertices) at[v].push_back(b);
    for (auto& [v, bs] : at) {
        if (bs.size() >= 2) {
            out.cut_vertices.push_back(v);
            out.blocks_at[v] = bs;
        }
    }
    return out;
}

bool is_biconnected(const Digraph& g) {
    if (g.vertex_count() < 2 || !g.connected()) return false;
    return bc_tree(g).blocks.size() == 1;
}

// ---------------- SPQR tree ----------------

namespace {

struct Builder {
    const Digraph& g;
    std::vector<SPQRTree::Node> nodes;
    std::vector<char> dead;

    struct Super {
        int node;
        VertexId a, b;
        bool live = true;
    };
    std::vector<Super> supers;
    std::map<VertexId, std::set<int>> at;
    std::map<std::pair<VertexId, VertexId>, std::set<int>> between;

    VertexId ref_u, ref_v;

    explicit Builder(const Digraph& g_) : g(g_) {}

    int new_node(NodeType t, VertexId u, VertexId v) {
        nodes.push_back({});
        dead.push_back(0);
        nodes.back().type = t;
        nodes.back().pole_u = u;
        nodes.back().pole_v = v;
        return (int)nodes.size() - 1;
    }

    static std::pair<VertexId, VertexId> key(VertexId a, VertexId b) { return std::minmax(a, b); }

    int add_super(int node, VertexId a, VertexId b) {
        int id = (int)supers.size();
        supers.push_back({node, a, b, true});
        at[a].insert(id);
        at[b].insert(id);
        between[key(a, b)].insert(id);
        return id;
    }
    void remove_super(int id) {
        Super& s = supers[(size_t)id];
        s.live = false;
        at[s.a].erase(id);
        at[s.b].erase(id);
        between[key(s.a, s.b)].erase(id);
    }

    // append child super to an S path running from `from` to `to`,
    // absorbing S-type children to keep the tree canonical
    void splice_block(int s_node, int child, VertexId from, VertexId to) {
        if (nodes[(size_t)child].type == NodeType::S) {
            std::vector<SPQRTree::SkelEdge> seq = nodes[(size_t)child].skel;
            if (nodes[(size_t)child].pole_u != from) {
                std::reverse(seq.begin(), seq.end());
                for (auto& e : seq) std::swap(e.a, e.b);
            }
            for (auto& e : seq) nodes[(size_t)s_node].skel.push_back(e);
            dead[(size_t)child] = 1;
        } else {
            nodes[(size_t)s_node].skel.push_back({from, to, child});
        }
    }

    void merge_parallel(VertexId x, VertexId y, std::deque<std::pair<VertexId, VertexId>>& pq,
                        std::deque<VertexId>& vq) {
        auto k = key(x, y);
        std::vector<int> ids(between[k].begin(), between[k].end());
        if (ids.size() < 2) return;
        int p = new_node(NodeType::P, k.first, k.second);
        for (int id : ids) {
            int cn = supers[(size_t)id].node;
            if (nodes[(size_t)cn].type == NodeType::P) {
                for (auto& e : nodes[(size_t)cn].skel)
                    nodes[(size_t)p].skel.push_back({k.first, k.second, e.child});
                dead[(size_t)cn] = 1;
            } else {
                nodes[(size_t)p].skel.push_back({k.first, k.second, cn});
            }
            remove_super(id);
        }
        add_super(p, k.first, k.second);
        vq.push_back(k.first);
        vq.push_back(k.second);
        pq.push_back(k);
    }

    void merge_series(VertexId w, std::deque<std::pair<VertexId, VertexId>>& pq,
                      std::deque<VertexId>& vq) {
        std::vector<int> ids(at[w].begin(), at[w].end());
        if (ids.size() != 2) return;
        VertexId x = supers[(size_t)ids[0]].a == w ? supers[(size_t)ids[0]].b : supers[(size_t)ids[0]].a;
        VertexId y = supers[(size_t)ids[1]].a == w ? supers[(size_t)ids[1]].b : supers[(size_t)ids[1]].a;
        if (x == y) {
            pq.push_back(key(x, w));  // parallel pair, let that rule run
            return;
        }
        int sn = new_node(NodeType::S, x, y);
        splice_block(sn, supers[(size_t)ids[0]].node, x, w);
        splice_block(sn, supers[(size_t)ids[1]].node, w, y);
        remove_super(ids[0]);
        remove_super(ids[1]);
        add_super(sn, x, y);
        pq.push_back(key(x, y));
        vq.push_back(x);
        vq.push_back(y);
    }

    void reduce() {
        std::deque<std::pair<VertexId, VertexId>> pq;
        std::deque<VertexId> vq;
        for (auto& [k, ids] : between)
            if (ids.size() >= 2) pq.push_back(k);
        for (auto& [v, ids] : at) vq.push_back(v);
        while (!pq.empty() || !vq.empty()) {
            if (!pq.empty()) {
                auto k = pq.front();
                pq.pop_front();
                if (between[k].size() >= 2) merge_parallel(k.first, k.second, pq, vq);
                continue;
            }
            VertexId v = vq.front();
            vq.pop_front();
            if (v == ref_u || v == ref_v) continue;
            if (at[v].size() == 2) merge_series(v, pq, vq);
        }
    }

    // ---- split recursion on the irreducible core ----

    std::vector<VertexId> vertices_of(const std::vector<int>& es) const {
        std::set<VertexId> vs;
        for (int id : es) {
            vs.insert(supers[(size_t)id].a);
            vs.insert(supers[(size_t)id].b);
        }
        return {vs.begin(), vs.end()};
    }

    std::vector<std::vector<int>> components_minus(const std::vector<int>& es,
                                                   const std::set<VertexId>& cut) const {
        std::map<VertexId, std::vector<int>> inc_local;
        for (int id : es) {
            const Super& s = supers[(size_t)id];
            if (!cut.count(s.a)) inc_local[s.a].push_back(id);
            if (!cut.count(s.b)) inc_local[s.b].push_back(id);
        }
        std::set<int> seen;
        std::vector<std::vector<int>> comps;
        for (int id0 : es) {
            if (seen.count(id0)) continue;
            const Super& s0 = supers[(size_t)id0];
            if (cut.count(s0.a) && cut.count(s0.b)) continue;
            std::vector<int> comp, stack = {id0};
            seen.insert(id0);
            while (!stack.empty()) {
                int id = stack.back();
                stack.pop_back();
                comp.push_back(id);
                const Super& s = supers[(size_t)id];
                for (VertexId v : {s.a, s.b}) {
                    if (cut.count(v)) continue;
                    auto it = inc_local.find(v);
                    if (it == inc_local.end()) continue;
                    for (int id2 : it->second)
                        if (!seen.count(id2)) {
                            seen.insert(id2);
                            stack.push_back(id2);
                        }
                }
            }
            std::sort(comp.begin(), comp.end());
            comps.push_back(std::move(comp));
        }
        return comps;
    }

    struct LocalBlocks {
        std::vector<std::vector<int>> blocks;  // super ids
        std::set<VertexId> cuts;
    };

    // lowpoint block decomposition of the super-edge multigraph
    LocalBlocks blocks_of(const std::vector<int>& es) const {
        LocalBlocks out;
        auto vs = vertices_of(es);
        std::map<VertexId, int> vid;
        for (int i = 0; i < (int)vs.size(); ++i) vid[vs[(size_t)i]] = i;
        std::map<VertexId, std::vector<int>> inc_local;
        for (int id : es) {
            inc_local[supers[(size_t)id].a].push_back(id);
            inc_local[supers[(size_t)id].b].push_back(id);
        }
        int n = (int)vs.size();
        std::vector<int> num((size_t)n, -1), low((size_t)n, 0);
        std::vector<int> edge_stack;
        std::set<int> on_stack;
        int counter = 0;
        struct Frame {
            int v;
            int pe;
            size_t i;
        };
        std::vector<Frame> stack;
        num[0] = low[0] = counter++;
        stack.push_back({0, -1, 0});
        while (!stack.empty()) {
            Frame& f = stack.back();
            VertexId v = vs[(size_t)f.v];
            auto& inc = inc_local[v];
            if (f.i < inc.size()) {
                int e = inc[f.i++];
                if (e == f.pe) continue;
                int w = vid.at(supers[(size_t)e].a == v ? supers[(size_t)e].b : supers[(size_t)e].a);
                if (num[(size_t)w] == -1) {
                    edge_stack.push_back(e);
                    on_stack.insert(e);
                    num[(size_t)w] = low[(size_t)w] = counter++;
                    stack.push_back({w, e, 0});
                } else {
                    if (!on_stack.count(e) && num[(size_t)w] < num[(size_t)f.v]) {
                        edge_stack.push_back(e);
                        on_stack.insert(e);
                    }
                    low[(size_t)f.v] = std::min(low[(size_t)f.v], num[(size_t)w]);
                }
            } else {
                int child = f.v;
                int pe = f.pe;
                stack.pop_back();
                if (stack.empty()) break;
                int parent = stack.back().v;
                low[(size_t)parent] = std::min(low[(size_t)parent], low[(size_t)child]);
                if (low[(size_t)child] >= num[(size_t)parent]) {
                    std::vector<int> blk;
                    while (!edge_stack.empty()) {
                        int e = edge_stack.back();
                        edge_stack.pop_back();
                        blk.push_back(e);
                        if (e == pe) break;
                    }
                    std::sort(blk.begin(), blk.end());
                    out.blocks.push_back(std::move(blk));
                }
            }
        }
        std::map<VertexId, int> seen_in;
        for (auto& b : out.blocks)
            for (int id : b)
                for (VertexId x : {supers[(size_t)id].a, supers[(size_t)id].b}) {
                    auto [it, fresh] = seen_in.try_emplace(x, (int)(&b - out.blocks.data()));
                    if (!fresh && it->second != (int)(&b - out.blocks.data())) out.cuts.insert(x);
                }
        std::sort(out.blocks.begin(), out.blocks.end());
        return out;
    }

    int build(std::vector<int> es, VertexId u, VertexId v);
    void finish_rigid(int node_id);
    void st_orient_rigid(SPQRTree::Node& n);
};

int Builder::build(std::vector<int> es, VertexId u, VertexId v) {
    assert(!es.empty());
    if (es.size() == 1) return supers[(size_t)es[0]].node;

    // parallel case: direct u-v super-edges plus components of H - {u,v}
    std::vector<int> direct;
    for (int id : es) {
        const Super& s = supers[(size_t)id];
        if ((s.a == u && s.b == v) || (s.a == v && s.b == u)) direct.push_back(id);
    }
    auto comps = components_minus(es, {u, v});
    if (direct.size() + comps.size() >= 2) {
        int p = new_node(NodeType::P, u, v);
        for (int id : direct) {
            int cn = supers[(size_t)id].node;
            if (nodes[(size_t)cn].type == NodeType::P) {
                for (auto& e : nodes[(size_t)cn].skel) nodes[(size_t)p].skel.push_back({u, v, e.child});
                dead[(size_t)cn] = 1;
            } else {
                nodes[(size_t)p].skel.push_back({u, v, cn});
            }
        }
        for (auto& comp : comps) {
            int c = build(comp, u, v);
            if (nodes[(size_t)c].type == NodeType::P) {
                for (auto& e : nodes[(size_t)c].skel) nodes[(size_t)p].skel.push_back({u, v, e.child});
                dead[(size_t)c] = 1;
            } else {
                nodes[(size_t)p].skel.push_back({u, v, c});
            }
        }
        return p;
    }

    // series case: the block-cut tree of H is a path from u's block to v's
    auto lb = blocks_of(es);
    if (lb.blocks.size() >= 2) {
        int sn = new_node(NodeType::S, u, v);
        std::set<size_t> used;
        VertexId from = u;
        while (used.size() < lb.blocks.size()) {
            size_t cur = lb.blocks.size();
            for (size_t i = 0; i < lb.blocks.size(); ++i) {
                if (used.count(i)) continue;
                bool has_from = false;
                for (int id : lb.blocks[i]) {
                    const Super& s = supers[(size_t)id];
                    if (s.a == from || s.b == from) has_from = true;
                }
                if (has_from) {
                    cur = i;
                    break;
                }
            }
            assert(cur < lb.blocks.size());
            used.insert(cur);
            // far end: the cut vertex of this block other than `from`, or v
            VertexId far = v;
            bool found_far = false;
            for (int id : lb.blocks[cur]) {
                const Super& s = supers[(size_t)id];
                for (VertexId z : {s.a, s.b}) {
                    if (z != from && lb.cuts.count(z)) {
                        far = z;
                        found_far = true;
                    }
                }
            }
            if (!found_far) far = v;
            int c = build(lb.blocks[cur], from, far);
            splice_block(sn, c, from, far);
            from = far;
        }
        assert(from == v);
        return sn;
    }

    // rigid case: collapse proper split pairs until triconnected
    std::vector<int> K = es;
    bool progress = true;
    while (progress) {
        progress = false;
        auto vs = vertices_of(K);
        for (size_t i = 0; i < vs.size() && !progress; ++i) {
            for (size_t j = i + 1; j < vs.size() && !progress; ++j) {
                VertexId x = vs[i], y = vs[j];
                if (key(x, y) == key(u, v)) continue;
                auto parts = components_minus(K, {x, y});
                std::vector<int> detached;
                for (auto& part : parts) {
                    bool main_part = false;
                    for (int id : part) {
                        const Super& s = supers[(size_t)id];
                        for (VertexId z : {s.a, s.b})
                            if ((z == u && u != x && u != y) || (z == v && v != x && v != y))
                                main_part = true;
                    }
                    if (!main_part)
                        for (int id : part) detached.push_back(id);
                }
                for (int id : K) {
                    const Super& s = supers[(size_t)id];
                    if (key(s.a, s.b) == key(x, y)) detached.push_back(id);
                }
                if (detached.size() < 2 || detached.size() == K.size()) continue;
                std::sort(detached.begin(), detached.end());
                int c = build(detached, x, y);
                int ns = add_super(c, x, y);
                std::set<int> det(detached.begin(), detached.end());
                std::vector<int> K2;
                for (int id : K)
                    if (!det.count(id)) K2.push_back(id);
                K2.push_back(ns);
                K = std::move(K2);
                progress = true;
            }
        }
    }
    int r = new_node(NodeType::R, u, v);
    for (int id : K) {
        const Super& s = supers[(size_t)id];
        nodes[(size_t)r].skel.push_back({s.a, s.b, s.node});
    }
    finish_rigid(r);
    return r;
}

void Builder::finish_rigid(int node_id) {
    SPQRTree::Node& n = nodes[(size_t)node_id];
    std::vector<VertexId> vs;
    {
        std::set<VertexId> s;
        for (auto& e : n.skel) {
            s.insert(e.a);
            s.insert(e.b);
        }
        s.insert(n.pole_u);
        s.insert(n.pole_v);
        vs.assign(s.begin(), s.end());
    }
    std::map<VertexId, int> id;
    for (int i = 0; i < (int)vs.size(); ++i) id[vs[(size_t)i]] = i;
    std::vector<std::pair<int, int>> edges;
    for (auto& e : n.skel) edges.push_back({id[e.a], id[e.b]});
    edges.push_back({id[n.pole_u], id[n.pole_v]});  // parent edge, index |skel|
    auto emb = planar_embedding_biconnected((int)vs.size(), edges);
    if (!emb) throw unsupported_error("input digraph is not planar (rigid skeleton)");
    for (int i = 0; i < (int)vs.size(); ++i) {
        std::vector<int> rot;
        for (int e : (*emb)[(size_t)i]) rot.push_back(e == (int)n.skel.size() ? -1 : e);
        n.skel_rot[vs[(size_t)i]] = std::move(rot);
    }
    st_orient_rigid(n);
}

// st-orientation via an open ear decomposition of the extended skeleton
void Builder::st_orient_rigid(SPQRTree::Node& n) {
    std::set<VertexId> all;
    for (auto& e : n.skel) {
        all.insert(e.a);
        all.insert(e.b);
    }
    std::map<VertexId, std::vector<size_t>> inc_local;
    for (size_t i = 0; i < n.skel.size(); ++i) {
        inc_local[n.skel[i].a].push_back(i);
        inc_local[n.skel[i].b].push_back(i);
    }
    VertexId s = n.pole_u, t = n.pole_v;
    std::vector<VertexId> order = {s, t};
    std::set<VertexId> placed = {s, t};
    auto place_path = [&](const std::vector<VertexId>& path) {
        VertexId x = path.front(), y = path.back();
        size_t px = 0, py = 0;
        for (size_t i = 0; i < order.size(); ++i) {
            if (order[i] == x) px = i;
            if (order[i] == y) py = i;
        }
        std::vector<VertexId> interior(path.begin() + 1, path.end() - 1);
        size_t pos;
        if (px < py) {
            pos = px + 1;
        } else {
            std::reverse(interior.begin(), interior.end());
            pos = py + 1;
        }
        order.insert(order.begin() + (long)pos, interior.begin(), interior.end());
        for (VertexId w : interior) placed.insert(w);
    };
    {
        // initial ear: any s-t path in the skeleton (the parent edge closes it)
        std::map<VertexId, VertexId> pred;
        std::deque<VertexId> q = {s};
        std::set<VertexId> seen = {s};
        while (!q.empty()) {
            VertexId a = q.front();
            q.pop_front();
            if (a == t) break;
            for (size_t ei : inc_local[a]) {
                VertexId b2 = n.skel[ei].a == a ? n.skel[ei].b : n.skel[ei].a;
                if (!seen.count(b2)) {
                    seen.insert(b2);
                    pred[b2] = a;
                    q.push_back(b2);
                }
            }
        }
        std::vector<VertexId> path = {t};
        while (path.back() != s) path.push_back(pred.at(path.back()));
        std::reverse(path.begin(), path.end());
        place_path(path);
    }
    while (placed.size() < all.size()) {
        bool done = false;
        std::vector<VertexId> snapshot = order;
        for (VertexId a : snapshot) {
            for (size_t ei : inc_local[a]) {
                VertexId b2 = n.skel[ei].a == a ? n.skel[ei].b : n.skel[ei].a;
                if (placed.count(b2)) continue;
                std::map<VertexId, VertexId> pred;
                std::deque<VertexId> q = {b2};
                std::set<VertexId> seen = {b2, a};
                VertexId endv = 0;
                bool found = false;
                while (!q.empty() && !found) {
                    VertexId c = q.front();
                    q.pop_front();
                    for (size_t ej : inc_local[c]) {
                        VertexId d = n.skel[ej].a == c ? n.skel[ej].b : n.skel[ej].a;
                        if (seen.count(d)) continue;
                        seen.insert(d);
                        pred[d] = c;
                        if (placed.count(d)) {
                            endv = d;
                            found = true;
                            break;
                        }
                        q.push_back(d);
                    }
                }
                assert(found);
                std::vector<VertexId> path = {endv};
                while (path.back() != b2) path.push_back(pred.at(path.back()));
                path.push_back(a);
                std::reverse(path.begin(), path.end());
                place_path(path);
                done = true;
                break;
            }
            if (done) break;
        }
        assert(done);
    }
    std::map<VertexId, size_t> pos;
    for (size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (auto& e : n.skel)
        if (pos[e.a] > pos[e.b]) std::swap(e.a, e.b);
}

}  // namespace

SPQRTree spqr_tree(const Digraph& g, EdgeId ref) {
    if (g.edge_count() < 2) throw std::invalid_argument("spqr_tree requires at least 2 edges");
    if (!is_biconnected(g)) throw std::invalid_argument("spqr_tree requires a biconnected digraph");
    if (!is_planar_digraph(g)) throw unsupported_error("input digraph is not planar");

    Builder b(g);
    b.ref_u = g.edge(ref).tail;
    b.ref_v = g.edge(ref).head;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        if (e == ref) continue;
        int q = b.new_node(NodeType::Q, g.edge(e).tail, g.edge(e).head);
        b.nodes[(size_t)q].real_edge = e;
        b.add_super(q, g.edge(e).tail, g.edge(e).head);
    }
    b.reduce();

    std::vector<int> live;
    for (int id = 0; id < (int)b.supers.size(); ++id)
        if (b.supers[(size_t)id].live) live.push_back(id);
    int rho = b.build(live, b.ref_u, b.ref_v);

    int root = b.new_node(NodeType::Q, b.ref_u, b.ref_v);
    b.nodes[(size_t)root].real_edge = ref;

    SPQRTree t;
    t.ref_edge = ref;
    std::vector<int> remap(b.nodes.size(), -1);
    std::vector<int> stack = {rho};
    std::vector<int> reach;
    std::vector<char> seen(b.nodes.size(), 0);
    seen[(size_t)rho] = 1;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        reach.push_back(x);
        for (auto& e : b.nodes[(size_t)x].skel)
            if (!seen[(size_t)e.child]) {
                seen[(size_t)e.child] = 1;
                stack.push_back(e.child);
            }
    }
    std::sort(reach.begin(), reach.end());
    t.nodes.reserve(reach.size() + 1);
    for (int x : reach) {
        assert(!b.dead[(size_t)x]);
        remap[(size_t)x] = (int)t.nodes.size();
        t.nodes.push_back(b.nodes[(size_t)x]);
    }
    remap[(size_t)root] = (int)t.nodes.size();
    t.nodes.push_back(b.nodes[(size_t)root]);
    for (auto& n : t.nodes)
        for (auto& e : n.skel) e.child = remap[(size_t)e.child];
    t.root = remap[(size_t)root];
    t.root_child = remap[(size_t)rho];
    t.nodes[(size_t)t.root_child].parent = t.root;

    auto flip_node = [&](int x) {
        SPQRTree::Node& n = t.nodes[(size_t)x];
        std::swap(n.pole_u, n.pole_v);
        if (n.type == NodeType::S) std::reverse(n.skel.begin(), n.skel.end());
        for (auto& e : n.skel) std::swap(e.a, e.b);
    };
    if (t.nodes[(size_t)t.root_child].pole_u != g.edge(ref).tail) flip_node(t.root_child);
    std::vector<int> todo = {t.root_child};
    while (!todo.empty()) {
        int x = todo.back();
        todo.pop_back();
        for (auto& e : t.nodes[(size_t)x].skel) {
            SPQRTree::Node& c = t.nodes[(size_t)e.child];
            c.parent = x;
            if (c.pole_u != e.a) flip_node(e.child);
            assert(t.nodes[(size_t)e.child].pole_u == e.a && t.nodes[(size_t)e.child].pole_v == e.b);
            todo.push_back(e.child);
        }
    }
    return t;
}

std::vector<int> SPQRTree::postorder() const {
    std::vector<int> out;
    std::vector<std::pair<int, bool>> stack = {{root_child, false}};
    while (!stack.empty()) {
        auto [x, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
            out.push_back(x);
            continue;
        }
        stack.push_back({x, true});
        for (auto& e : nodes[(size_t)x].skel) stack.push_back({e.child, false});
    }
    out.push_back(root);
    return out;
}

std::vector<EdgeId> SPQRTree::pertinent_edges(int node) const {
    std::vector<EdgeId> out;
    std::vector<int> stack = {node};
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        const Node& n = nodes[(size_t)x];
        if (n.type == NodeType::Q) out.push_back(n.real_edge);
        if (x == root) stack.push_back(root_child);
        for (auto& e : n.skel) stack.push_back(e.child);
    }
    std::sort(out.begin(), out.end());
    return out;
}

Digraph SPQRTree::pertinent(const Digraph& g, int node) const {
    auto es = pertinent_edges(node);
    std::set<VertexId> vs;
    std::vector<Edge> edges;
    for (EdgeId e : es) {
        vs.insert(g.edge(e).tail);
        vs.insert(g.edge(e).head);
        edges.push_back(g.edge(e));
    }
    return Digraph::build({vs.begin(), vs.end()}, std::move(edges));
}

std::string spqr_dump(const Digraph& g, const SPQRTree& t) {
    std::ostringstream out;
    auto type_char = [](NodeType ty) {
        switch (ty) {
            case NodeType::S: return 'S';
            case NodeType::P: return 'P';
            case NodeType::Q: return 'Q';
            case NodeType::R: return 'R';
        }
        return '?';
    };
    std::vector<std::pair<int, int>> stack = {{t.root, 0}};
    while (!stack.empty()) {
        auto [x, depth] = stack.back();
        stack.pop_back();
        const auto& n = t.nodes[(size_t)x];
        for (int i = 0; i < depth; ++i) out << "  ";
        out << type_char(n.type) << " poles(" << n.pole_u << "," << n.pole_v << ")";
        if (n.type == NodeType::Q)
            out << " edge " << n.real_edge << " (" << g.edge(n.real_edge).tail << "->"
                << g.edge(n.real_edge).head << ")";
        out << "\n";
        if (x == t.root) {
            stack.push_back({t.root_child, depth + 1});
        } else {
            for (auto it = n.skel.rbegin(); it != n.skel.rend(); ++it)
                stack.push_back({it->child, depth + 1});
        }
    }
    return out.str();
}

}  // namespace kmodal
