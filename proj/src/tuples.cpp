#include "kmodal/tuples.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <map>
#include <memory>
#include <set>

#include "kmodal/planarity.hpp"
#include "kmodal/rnode.hpp"

namespace kmodal {

bool dominates(const EmbTuple& t, const EmbTuple& t2) {
    return t.s1 == t2.s1 && t.s2 == t2.s2 && t.a <= t2.a && t.b <= t2.b;
}

FanBlock tuple_block(const EmbTuple& t, bool at_first_pole) {
    if (at_first_pole) return {flip_n(t.s1, t.a), t.s1, t.a};
    return {t.s2, flip_n(t.s2, t.b), t.b};
}

int ring_modality(Orientation s, int count, Orientation sigma_e) {
    return count + (s != sigma_e) + (sigma_e != flip_n(s, count));
}

DecisionStats& global_stats() {
    static DecisionStats stats;
    return stats;
}

namespace {

bool class_less(const EmbTuple& x, const EmbTuple& y) {
    return std::tie(x.s1, x.s2, x.a, x.b) < std::tie(y.s1, y.s2, y.a, y.b);
}

// antichain reduction keeping a parallel payload; deterministic
template <typename BP>
void reduce_gist(std::vector<EmbTuple>& ts, std::vector<BP>& bps, int k) {
    std::vector<size_t> order(ts.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t x, size_t y) { return class_less(ts[x], ts[y]); });
    std::vector<EmbTuple> out;
    std::vector<BP> obp;
    size_t i = 0;
    while (i < order.size()) {
        size_t j = i;
        int best_b = INT_MAX;
        while (j < order.size() && ts[order[j]].s1 == ts[order[i]].s1 &&
               ts[order[j]].s2 == ts[order[i]].s2) {
            const EmbTuple& t = ts[order[j]];
            if (t.b < best_b) {  // Pareto sweep: a ascending, keep strictly smaller b
                out.push_back(t);
                obp.push_back(bps[order[j]]);
                best_b = t.b;
            }
            ++j;
        }
        i = j;
    }
    ts = std::move(out);
    bps = std::move(obp);
    if (k > 0) {
        auto& st = global_stats();
        st.gist_checks++;
        st.max_gist = std::max(st.max_gist, (int)ts.size());
        if ((int)ts.size() > 4 * k) throw std::logic_error("gist exceeds the 4k bound");
    }
}

}  // namespace

std::vector<EmbTuple> gist_of(std::vector<EmbTuple> ts) {
    std::vector<int> bp(ts.size(), 0);
    reduce_gist(ts, bp, 0);
    return ts;
}

std::vector<EmbTuple> q_tuples(Orientation at_u, Orientation at_v) {
    return {EmbTuple{at_u, 0, at_v, 0}};
}

// modality at the junction vertex of a series composition
static int series_junction(const EmbTuple& left, const EmbTuple& right) {
    FanBlock bp = tuple_block(left, false);
    FanBlock bc = tuple_block(right, true);
    return bp.alts + bc.alts + (bp.last != bc.first) + (bc.last != bp.first);
}

std::vector<EmbTuple> s_compose(const std::vector<std::vector<EmbTuple>>& children,
                                const std::vector<int>& internal_m, int m_u, int m_v, int k) {
    assert(children.size() >= 1 && internal_m.size() + 1 == children.size());
    std::vector<EmbTuple> cur;
    for (const EmbTuple& t : children[0])
        if (t.a <= m_u) cur.push_back(t);
    cur = gist_of(cur);
    for (size_t j = 1; j < children.size(); ++j) {
        std::vector<EmbTuple> next;
        for (const EmbTuple& tp : cur)
            for (const EmbTuple& tc : children[j]) {
                if (series_junction(tp, tc) > internal_m[j - 1]) continue;
                next.push_back({tp.s1, tp.a, tc.s2, tc.b});
            }
        std::vector<int> bp(next.size(), 0);
        reduce_gist(next, bp, k);
        cur = std::move(next);
    }
    std::vector<EmbTuple> out;
    for (const EmbTuple& t : cur)
        if (t.a <= m_u && t.b <= m_v) out.push_back(t);
    return gist_of(out);
}

namespace {

// parallel composition with ordered-selection backpointers
struct POrder {
    std::vector<std::pair<int, int>> order;  // (child slot, tuple index)
};

void p_compose_full(const std::vector<const std::vector<EmbTuple>*>& children, int m_u, int m_v,
                    int k, std::vector<EmbTuple>& gist, std::vector<POrder>& orders,
                    std::map<int, std::vector<int>>& absorbed_after) {
    gist.clear();
    orders.clear();
    absorbed_after.clear();
    int h = (int)children.size();
    // z children: a tuple with no alternation at either pole (then, by purity
    // of realizable sets, the whole gist is that single tuple)
    std::vector<int> zclass(h, -1);  // 0..3 = (s1,s2) class, -1 = forced alternations
    auto cls_of = [](const EmbTuple& t) {
        return (t.s1 == Orientation::out ? 2 : 0) + (t.s2 == Orientation::out ? 1 : 0);
    };
    std::vector<int> core;
    std::map<int, int> rep_of_class;
    std::vector<int> forced;
    for (int i = 0; i < h; ++i) {
        for (const EmbTuple& t : *children[i])
            if (t.a == 0 && t.b == 0) zclass[i] = cls_of(t);
        if (zclass[i] == -1) forced.push_back(i);
    }
    if ((int)forced.size() > 2 * k) return;  // every selection exceeds m(u)+m(v)
    for (int i = 0; i < h; ++i) {
        if (zclass[i] == -1) {
            core.push_back(i);
        } else if (!rep_of_class.count(zclass[i])) {
            rep_of_class[zclass[i]] = i;
            core.push_back(i);
        }
    }
    std::sort(core.begin(), core.end());
    for (int i = 0; i < h; ++i)
        if (zclass[i] != -1 && rep_of_class[zclass[i]] != i)
            absorbed_after[rep_of_class[zclass[i]]].push_back(i);

    int n = (int)core.size();
    // state: (mask, s1, s2, r_u, r_v) -> pareto set over (a, b)
    struct Key {
        int mask;
        unsigned char s1, s2, ru, rv;
        auto operator<=>(const Key&) const = default;
    };
    struct Entry {
        int a, b;
        int back;  // arena index
    };
    struct Back {
        int prev;  // arena index, -1 at start
        int slot;  // core slot
        int tup;
    };
    std::vector<Back> arena;
    std::map<Key, std::vector<Entry>> states;
    auto push_state = [&](const Key& key, int a, int b, int back) {
        auto& v = states[key];
        for (const Entry& e : v)
            if (e.a <= a && e.b <= b) return;
        std::vector<Entry> keep;
        for (const Entry& e : v)
            if (!(a <= e.a && b <= e.b)) keep.push_back(e);
        keep.push_back({a, b, back});
        std::sort(keep.begin(), keep.end(), [](const Entry& x, const Entry& y) {
            return std::tie(x.a, x.b) < std::tie(y.a, y.b);
        });
        v = std::move(keep);
    };
    for (int i = 0; i < n; ++i) {
        const auto& g = *children[core[(size_t)i]];
        for (int t = 0; t < (int)g.size(); ++t) {
            const EmbTuple& tt = g[(size_t)t];
            if (tt.a > m_u || tt.b > m_v) continue;
            arena.push_back({-1, i, t});
            Key key{1 << i, (unsigned char)tt.s1, (unsigned char)tt.s2,
                    (unsigned char)flip_n(tt.s1, tt.a), (unsigned char)flip_n(tt.s2, tt.b)};
            push_state(key, tt.a, tt.b, (int)arena.size() - 1);
        }
    }
    // expand masks in increasing popcount order via plain mask order
    std::vector<std::pair<Key, Entry>> worklist;
    for (int mask = 1; mask < (1 << n); ++mask) {
        // collect current states with this mask
        std::vector<std::pair<Key, std::vector<Entry>>> cur;
        for (auto& [key, v] : states)
            if (key.mask == mask) cur.push_back({key, v});
        for (auto& [key, v] : cur) {
            for (const Entry& e : v) {
                for (int i = 0; i < n; ++i) {
                    if (mask & (1 << i)) continue;
                    const auto& g = *children[core[(size_t)i]];
                    for (int t = 0; t < (int)g.size(); ++t) {
                        const EmbTuple& tt = g[(size_t)t];
                        int a2 = e.a + tt.a + ((Orientation)key.ru != tt.s1);
                        int b2 = e.b + tt.b + ((Orientation)key.rv != tt.s2);
                        if (a2 > m_u || b2 > m_v) continue;
                        arena.push_back({e.back, i, t});
                        Key k2{mask | (1 << i), key.s1, key.s2,
                               (unsigned char)flip_n(tt.s1, tt.a), (unsigned char)flip_n(tt.s2, tt.b)};
                        push_state(k2, a2, b2, (int)arena.size() - 1);
                    }
                }
            }
        }
    }
    int full = (1 << n) - 1;
    std::vector<EmbTuple> raw;
    std::vector<int> backs;
    for (auto& [key, v] : states) {
        if (key.mask != full) continue;
        for (const Entry& e : v) {
            raw.push_back({(Orientation)key.s1, e.a, (Orientation)key.s2, e.b});
            backs.push_back(e.back);
        }
    }
    reduce_gist(raw, backs, k);
    gist = std::move(raw);
    for (int back : backs) {
        POrder po;
        for (int x = back; x != -1; x = arena[(size_t)x].prev)
            po.order.push_back({core[(size_t)arena[(size_t)x].slot], arena[(size_t)x].tup});
        std::reverse(po.order.begin(), po.order.end());
        orders.push_back(std::move(po));
    }
}

}  // namespace

std::vector<EmbTuple> p_compose(const std::vector<std::vector<EmbTuple>>& children, int m_u,
                                int m_v, int k) {
    std::vector<const std::vector<EmbTuple>*> ptrs;
    for (auto& c : children) ptrs.push_back(&c);
    std::vector<EmbTuple> gist;
    std::vector<POrder> orders;
    std::map<int, std::vector<int>> absorbed;
    p_compose_full(ptrs, m_u, m_v, k, gist, orders, absorbed);
    return gist;
}

bool root_test(const std::vector<EmbTuple>& s_rho, Orientation sigma_e_u, Orientation sigma_e_v,
               int m_u, int m_v) {
    for (const EmbTuple& t : s_rho)
        if (ring_modality(t.s1, t.a, sigma_e_u) <= m_u && ring_modality(t.s2, t.b, sigma_e_v) <= m_v)
            return true;
    return false;
}

// ---------------- SPQR engine ----------------

namespace {

struct Fans {
    std::vector<EdgeId> ufan, vfan;  // storage order: CCW at the poles
    std::map<VertexId, std::vector<EdgeId>> rot;
};

struct NodeRes {
    std::vector<EmbTuple> gist;
    // S: per-step tables; entry (prev index, child tuple index)
    std::vector<std::vector<std::pair<int, int>>> s_steps;  // s_steps[j][gi]
    std::vector<std::vector<EmbTuple>> s_prefix;            // prefix gists
    // P
    std::vector<POrder> p_orders;
    std::map<int, std::vector<int>> p_absorbed;
    // R
    std::vector<rnode::RCandidate> r_cands;        // parallel to gist
    std::vector<VertexId> r_verts;                 // dense -> vertex id
};

class Engine {
  public:
    Engine(const Digraph& g, const SPQRTree& t, const MaxModalityFn& m, int k)
        : g_(g), t_(t), m_(m), k_(k), res_(t.nodes.size()) {}

    // computes all gists bottom-up; returns false when the root child's gist
    // is empty (no admissible embedding at all)
    bool run() {
        for (int x : t_.postorder()) {
            if (x == t_.root) continue;
            compute(x);
            if (x == t_.root_child && res_[(size_t)x].gist.empty()) return false;
        }
        return true;
    }

    const std::vector<EmbTuple>& gist(int node) const { return res_[(size_t)node].gist; }

    Fans embed_node(int node, int idx, const std::map<int, int>* overrides = nullptr) const;

  private:
    void compute(int x);

    const Digraph& g_;
    const SPQRTree& t_;
    const MaxModalityFn& m_;
    int k_;
    std::vector<NodeRes> res_;
};

void Engine::compute(int x) {
    const SPQRTree::Node& n = t_.nodes[(size_t)x];
    NodeRes& r = res_[(size_t)x];
    switch (n.type) {
        case NodeType::Q: {
            EdgeId e = n.real_edge;
            r.gist = q_tuples(g_.orientation(e, n.pole_u), g_.orientation(e, n.pole_v));
            return;
        }
        case NodeType::S: {
            size_t h = n.skel.size();
            r.s_prefix.resize(h);
            r.s_steps.resize(h);
            const auto& g0 = res_[(size_t)n.skel[0].child].gist;
            for (int t = 0; t < (int)g0.size(); ++t) {
                r.s_prefix[0].push_back(g0[(size_t)t]);
                r.s_steps[0].push_back({-1, t});
            }
            {
                std::vector<EmbTuple> ts = r.s_prefix[0];
                std::vector<std::pair<int, int>> bp = r.s_steps[0];
                reduce_gist(ts, bp, k_);
                r.s_prefix[0] = std::move(ts);
                r.s_steps[0] = std::move(bp);
            }
            for (size_t j = 1; j < h; ++j) {
                VertexId w = n.skel[j].a;
                int mw = m_.at(w);
                const auto& gj = res_[(size_t)n.skel[j].child].gist;
                std::vector<EmbTuple> ts;
                std::vector<std::pair<int, int>> bp;
                for (int pi = 0; pi < (int)r.s_prefix[j - 1].size(); ++pi)
                    for (int ci = 0; ci < (int)gj.size(); ++ci) {
                        if (series_junction(r.s_prefix[j - 1][(size_t)pi], gj[(size_t)ci]) > mw)
                            continue;
                        ts.push_back({r.s_prefix[j - 1][(size_t)pi].s1, r.s_prefix[j - 1][(size_t)pi].a,
                                      gj[(size_t)ci].s2, gj[(size_t)ci].b});
                        bp.push_back({pi, ci});
                    }
                reduce_gist(ts, bp, k_);
                r.s_prefix[j] = std::move(ts);
                r.s_steps[j] = std::move(bp);
            }
            r.gist = r.s_prefix[h - 1];
            return;
        }
        case NodeType::P: {
            std::vector<const std::vector<EmbTuple>*> ptrs;
            for (auto& e : n.skel) ptrs.push_back(&res_[(size_t)e.child].gist);
            for (auto* p : ptrs)
                if (p->empty()) return;  // empty child, empty composition
            p_compose_full(ptrs, m_.at(n.pole_u), m_.at(n.pole_v), k_, r.gist, r.p_orders,
                           r.p_absorbed);
            return;
        }
        case NodeType::R: {
            if (k_ != 4 || g_.max_degree() > 6)
                throw unsupported_error(
                    "rigid component outside the supported regime (needs k = 4 and degree <= 6)");
            rnode::RSkelInput in;
            std::map<VertexId, int> id;
            for (auto& [v, rot] : n.skel_rot) {
                id[v] = (int)r.r_verts.size();
                r.r_verts.push_back(v);
            }
            in.nv = (int)r.r_verts.size();
            in.pole_u = id.at(n.pole_u);
            in.pole_v = id.at(n.pole_v);
            for (auto& e : n.skel) {
                rnode::RSkelInput::REdge re;
                re.a = id.at(e.a);
                re.b = id.at(e.b);
                re.gist = res_[(size_t)e.child].gist;
                if (re.gist.empty()) return;
                in.edges.push_back(std::move(re));
            }
            in.rot.resize((size_t)in.nv);
            for (auto& [v, rot] : n.skel_rot) in.rot[(size_t)id.at(v)] = rot;
            for (int i = 0; i < in.nv; ++i) in.m.push_back(m_.at(r.r_verts[(size_t)i]));
            auto cands = rnode::r_tuples(in);
            std::vector<EmbTuple> ts;
            std::vector<int> bp;
            for (int i = 0; i < (int)cands.size(); ++i) {
                ts.push_back(cands[(size_t)i].t);
                bp.push_back(i);
            }
            reduce_gist(ts, bp, k_);
            r.gist = std::move(ts);
            for (int i : bp) r.r_cands.push_back(cands[(size_t)i]);
            return;
        }
    }
}

Fans Engine::embed_node(int node, int idx, const std::map<int, int>* overrides) const {
    if (overrides) {
        auto it = overrides->find(node);
        if (it != overrides->end()) idx = it->second;
    }
    const SPQRTree::Node& n = t_.nodes[(size_t)node];
    const NodeRes& r = res_[(size_t)node];
    Fans out;
    switch (n.type) {
        case NodeType::Q: {
            out.ufan = {n.real_edge};
            out.vfan = {n.real_edge};
            return out;
        }
        case NodeType::S: {
            size_t h = n.skel.size();
            std::vector<int> choice(h, -1);
            int cur = idx;
            for (size_t j = h; j-- > 0;) {
                choice[j] = r.s_steps[j][(size_t)cur].second;
                cur = r.s_steps[j][(size_t)cur].first;
            }
            std::vector<Fans> kids;
            for (size_t j = 0; j < h; ++j)
                kids.push_back(embed_node(n.skel[j].child, choice[j], overrides));
            out.ufan = kids[0].ufan;
            out.vfan = kids[h - 1].vfan;
            for (size_t j = 0; j + 1 < h; ++j) {
                std::vector<EdgeId> rot = kids[j].vfan;
                rot.insert(rot.end(), kids[j + 1].ufan.begin(), kids[j + 1].ufan.end());
                out.rot[n.skel[j].b] = std::move(rot);
            }
            for (auto& k : kids)
                for (auto& [v, rot] : k.rot) out.rot[v] = rot;
            return out;
        }
        case NodeType::P: {
            std::vector<std::pair<int, int>> order = r.p_orders[(size_t)idx].order;
            // splice absorbed children right after their class representative
            std::vector<std::pair<int, int>> full;
            for (auto& [slot, tup] : order) {
                full.push_back({slot, tup});
                auto it = r.p_absorbed.find(slot);
                if (it != r.p_absorbed.end())
                    for (int extra : it->second) full.push_back({extra, 0});
            }
            std::vector<Fans> kids;
            for (auto& [slot, tup] : full) kids.push_back(embed_node(n.skel[(size_t)slot].child, tup, overrides));
            for (size_t j = kids.size(); j-- > 0;)
                out.ufan.insert(out.ufan.end(), kids[j].ufan.begin(), kids[j].ufan.end());
            for (size_t j = 0; j < kids.size(); ++j)
                out.vfan.insert(out.vfan.end(), kids[j].vfan.begin(), kids[j].vfan.end());
            for (auto& k : kids)
                for (auto& [v, rot] : k.rot) out.rot[v] = rot;
            return out;
        }
        case NodeType::R: {
            const rnode::RCandidate& cand = r.r_cands[(size_t)idx];
            std::map<VertexId, std::vector<int>> rot = n.skel_rot;
            if (cand.reflected)
                for (auto& [v, rr] : rot) std::reverse(rr.begin(), rr.end());
            std::vector<Fans> kids;
            for (size_t s = 0; s < n.skel.size(); ++s)
                kids.push_back(embed_node(n.skel[s].child, cand.selection[s], overrides));
            auto expand_at = [&](VertexId v, int skel_edge) {
                const auto& k = kids[(size_t)skel_edge];
                return n.skel[(size_t)skel_edge].a == v ? k.ufan : k.vfan;
            };
            for (auto& [v, rr] : rot) {
                if (v == n.pole_u || v == n.pole_v) continue;
                std::vector<EdgeId> full;
                for (int s : rr) {
                    auto fan = expand_at(v, s);
                    full.insert(full.end(), fan.begin(), fan.end());
                }
                out.rot[v] = std::move(full);
            }
            auto pole_fan = [&](VertexId pole) {
                const auto& rr = rot.at(pole);
                size_t p = 0;
                while (p < rr.size() && rr[p] != -1) ++p;
                std::vector<EdgeId> fan;
                for (size_t i = 1; i < rr.size(); ++i) {
                    int s = rr[(p + i) % rr.size()];
                    auto f = expand_at(pole, s);
                    fan.insert(fan.end(), f.begin(), f.end());
                }
                return fan;
            };
            out.ufan = pole_fan(n.pole_u);
            out.vfan = pole_fan(n.pole_v);
            for (auto& k : kids)
                for (auto& [v, rr] : k.rot) out.rot[v] = rr;
            return out;
        }
    }
    return out;
}

// reads the realized tuple off a fan pair; used to re-verify witnesses
EmbTuple measure_fans(const Digraph& g, const Fans& f, VertexId u, VertexId v) {
    auto alts = [&](const std::vector<EdgeId>& fan, VertexId at) {
        int c = 0;
        for (size_t i = 0; i + 1 < fan.size(); ++i)
            c += g.orientation(fan[i], at) != g.orientation(fan[i + 1], at);
        return c;
    };
    return {g.orientation(f.ufan.back(), u), alts(f.ufan, u), g.orientation(f.vfan.front(), v),
            alts(f.vfan, v)};
}

}  // namespace

// ---------------- biconnected driver ----------------

namespace {

struct BiconOutcome {
    bool yes = false;
    std::optional<RotationSystem> witness;
};

// decision + optional witness for a biconnected block rooted at ref
BiconOutcome bicon_decide(const Digraph& g, const MaxModalityFn& m, int k, EdgeId ref,
                          bool want_witness) {
    BiconOutcome out;
    if (g.edge_count() == 1) {
        out.yes = true;
        if (want_witness) {
            std::map<VertexId, std::vector<EdgeId>> rot;
            for (VertexId v : g.vertices()) rot[v] = {0};
            out.witness = RotationSystem::build(g, std::move(rot));
        }
        return out;
    }
    SPQRTree t = spqr_tree(g, ref);
    Engine eng(g, t, m, k);
    if (!eng.run()) return out;
    const auto& rho = eng.gist(t.root_child);
    VertexId u = t.nodes[(size_t)t.root_child].pole_u;
    VertexId v = t.nodes[(size_t)t.root_child].pole_v;
    Orientation seu = g.orientation(ref, u), sev = g.orientation(ref, v);
    int pick = -1;
    for (int i = 0; i < (int)rho.size(); ++i) {
        const EmbTuple& tt = rho[(size_t)i];
        if (ring_modality(tt.s1, tt.a, seu) <= m.at(u) && ring_modality(tt.s2, tt.b, sev) <= m.at(v)) {
            pick = i;
            break;
        }
    }
    if (pick == -1) return out;
    out.yes = true;
    if (want_witness) {
        Fans f = eng.embed_node(t.root_child, pick);
        EmbTuple measured = measure_fans(g, f, u, v);
        if (!(measured == rho[(size_t)pick]))
            throw std::logic_error("witness fans disagree with the DP tuple");
        std::map<VertexId, std::vector<EdgeId>> rot;
        for (auto& [w, r] : f.rot) rot[w] = r;
        f.ufan.push_back(ref);
        f.vfan.push_back(ref);
        rot[u] = f.ufan;
        rot[v] = f.vfan;
        RotationSystem rs = RotationSystem::build(g, std::move(rot));
        if (!is_planar_rotation(g, rs)) throw std::logic_error("witness is not planar");
        if (!satisfies_m(g, rs, m)) throw std::logic_error("witness violates the modality bounds");
        out.witness = std::move(rs);
    }
    return out;
}

}  // namespace

bool max_modality_biconnected(const Digraph& g, const MaxModalityFn& m, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    if (g.edge_count() == 0) return true;
    return bicon_decide(g, m, k, 0, false).yes;
}

std::optional<RotationSystem> embed_biconnected(const Digraph& g, const MaxModalityFn& m, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    auto out = bicon_decide(g, m, k, 0, true);
    return out.yes ? std::move(out.witness) : std::nullopt;
}

// ---------------- BC-tree driver ----------------

namespace {

// wedge menu of a block at its parent cut vertex: minimum interior
// alternations for each wedge boundary type
struct WedgeMenu {
    static constexpr int kNone = INT_MAX;
    int mixed = kNone;
    int pure_out = kNone;
    int pure_in = kNone;
    // witness info: tuple realizing each entry
    EmbTuple t_mixed{}, t_out{}, t_inn{};
    bool feasible() const { return mixed != kNone || pure_out != kNone || pure_in != kNone; }
};

struct BlockData {
    Digraph graph;
    std::vector<EdgeId> edge_map;  // block edge -> parent graph edge
    std::vector<int> child_cuts;   // cut vertices folded inside this block
};

// per-cut-vertex fold: the largest even rho such that an embedding of the
// parent block with rho alternations at v extends by the children wedges
// within m(v); EXTRA(rho) is evaluated by a small DP over the child menus
struct CutFold {
    std::vector<WedgeMenu> menus;
    int n_out_parent = 0, n_in_parent = 0;
    int m_v = 0;

    // minimal added alternations when the parent contributes rho of its own
    int extra(int rho) const {
        // state: (#mixed capped, mixed parity, pure-out used, pure-in used) -> min sum
        const int cap = rho + 2;
        std::map<std::tuple<int, int, int, int>, int> dp;
        dp[{0, 0, 0, 0}] = 0;
        for (const WedgeMenu& mn : menus) {
            std::map<std::tuple<int, int, int, int>, int> nd;
            auto relax = [&](std::tuple<int, int, int, int> key, int val) {
                auto it = nd.find(key);
                if (it == nd.end() || it->second > val) nd[key] = val;
            };
            for (auto& [key, sum] : dp) {
                auto [mcnt, mpar, po, pi] = key;
                if (mn.mixed != WedgeMenu::kNone)
                    relax({std::min(mcnt + 1, cap), mpar ^ 1, po, pi}, sum + mn.mixed);
                if (mn.pure_out != WedgeMenu::kNone) relax({mcnt, mpar, 1, pi}, sum + mn.pure_out);
                if (mn.pure_in != WedgeMenu::kNone) relax({mcnt, mpar, po, 1}, sum + mn.pure_in);
            }
            dp = std::move(nd);
            if (dp.empty()) return INT_MAX;
        }
        int best = INT_MAX;
        for (auto& [key, sum] : dp) {
            auto [mcnt, mpar, po, pi] = key;
            int s = std::min(mcnt, rho);
            int t;
            if (mcnt <= rho) {
                t = -mcnt;
            } else {
                // true count may exceed the cap; only its parity matters
                int leftover_par = (mpar ^ (rho & 1)) & 1;
                t = -s + leftover_par;
            }
            int clash = 0;
            if (mcnt == 0 && po && n_out_parent == 0) clash += 2;
            if (mcnt == 0 && pi && n_in_parent == 0) clash += 2;
            if (sum != INT_MAX) best = std::min(best, sum + t + clash);
        }
        return best;
    }

    // largest even rho in [0, m_v] with rho + extra(rho) <= m_v; -1 if none
    int folded_budget() const {
        for (int rho = m_v - (m_v & 1); rho >= 0; rho -= 2) {
            int ex = extra(rho);
            if (ex != INT_MAX && rho + ex <= m_v) return rho;
        }
        return -1;
    }
};

struct BcPlan {
    BCTree bc;
    std::vector<int> order;                     // block processing order, leaves first
    std::vector<int> parent_cut;                // per block: parent cut vertex index or -1
    std::map<VertexId, std::vector<int>> kids;  // cut vertex -> child blocks
    int root_block = 0;
};

BcPlan plan_bc(const Digraph& g) {
    BcPlan plan;
    plan.bc = bc_tree(g);
    int nb = (int)plan.bc.blocks.size();
    plan.parent_cut.assign((size_t)nb, -1);
    std::vector<int> depth((size_t)nb, -1);
    std::vector<int> queue = {0};
    depth[0] = 0;
    std::vector<VertexId> pc((size_t)nb, -1);
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        int b = queue[qi];
        for (VertexId v : plan.bc.blocks[(size_t)b].vertices) {
            auto it = plan.bc.blocks_at.find(v);
            if (it == plan.bc.blocks_at.end()) continue;
            for (int b2 : it->second) {
                if (depth[(size_t)b2] != -1) continue;
                depth[(size_t)b2] = depth[(size_t)b] + 1;
                pc[(size_t)b2] = v;
                plan.kids[v].push_back(b2);
                queue.push_back(b2);
            }
        }
    }
    plan.order = queue;
    std::reverse(plan.order.begin(), plan.order.end());  // leaves first
    for (int b = 0; b < nb; ++b) plan.parent_cut[(size_t)b] = (int)pc[(size_t)b];
    return plan;
}

// a biconnected block wrapped with its SPQR engine; embeds chosen tuples
struct BlockEngine {
    const Digraph& g;
    MaxModalityFn m;
    int k;
    EdgeId ref;
    SPQRTree t;
    Engine eng;
    bool ok;

    BlockEngine(const Digraph& g_, MaxModalityFn m_, int k_, EdgeId ref_)
        : g(g_), m(std::move(m_)), k(k_), ref(ref_), t(spqr_tree(g, ref)), eng(g, t, m, k) {
        ok = eng.run();
    }
    const std::vector<EmbTuple>& rho() const { return eng.gist(t.root_child); }
    VertexId pole_u() const { return t.nodes[(size_t)t.root_child].pole_u; }
    VertexId pole_v() const { return t.nodes[(size_t)t.root_child].pole_v; }

    RotationSystem embed(int idx) const {
        Fans f = eng.embed_node(t.root_child, idx);
        std::map<VertexId, std::vector<EdgeId>> rot;
        for (auto& [w, r] : f.rot) rot[w] = r;
        f.ufan.push_back(ref);
        f.vfan.push_back(ref);
        rot[pole_u()] = f.ufan;
        rot[pole_v()] = f.vfan;
        return RotationSystem::build(g, std::move(rot));
    }
};

// menu of a block at cut vertex v (its parent cut), with budgets already
// folded at the block's internal cut vertices; sets *infeasible when the
// block has no admissible embedding at all
WedgeMenu block_menu(const BlockEngine& be, VertexId v, bool* infeasible) {
    WedgeMenu menu;
    *infeasible = false;
    const Digraph& block = be.g;
    int n_out = 0, n_in = 0;
    for (EdgeId e : block.incident(v))
        (block.orientation(e, v) == Orientation::out ? n_out : n_in)++;
    if (!be.ok) {
        *infeasible = true;
        return menu;
    }
    VertexId pu = be.pole_u(), pv = be.pole_v();
    VertexId w = pu == v ? pv : pu;
    Orientation sev = block.orientation(be.ref, v), sew = block.orientation(be.ref, w);
    for (int i = 0; i < (int)be.rho().size(); ++i) {
        const EmbTuple& t2 = be.rho()[(size_t)i];
        Orientation sv = pu == v ? t2.s1 : t2.s2;
        int cv = pu == v ? t2.a : t2.b;
        Orientation sw = pu == v ? t2.s2 : t2.s1;
        int cw = pu == v ? t2.b : t2.a;
        if (ring_modality(sw, cw, sew) > be.m.at(w)) continue;
        int R = ring_modality(sv, cv, sev);
        if (R >= 2 && R - 1 <= be.m.at(v) && R - 1 < menu.mixed) {
            menu.mixed = R - 1;
            menu.t_mixed = t2;
        }
        if (R <= be.m.at(v)) {
            if (n_out > R / 2 && R < menu.pure_out) {
                menu.pure_out = R;
                menu.t_out = t2;
            }
            if (n_in > R / 2 && R < menu.pure_in) {
                menu.pure_in = R;
                menu.t_inn = t2;
            }
        }
    }
    return menu;
}

int alternations_of_ring(const Digraph& g, const std::vector<EdgeId>& ring, VertexId v) {
    if (ring.size() < 2) return 0;
    int total = 0;
    for (size_t i = 0; i < ring.size(); ++i)
        total += g.orientation(ring[i], v) != g.orientation(ring[(i + 1) % ring.size()], v);
    return total;
}

// connected decision and witness over the BC-tree
struct ConnOutcome {
    bool yes = false;
    std::optional<RotationSystem> witness;
};

ConnOutcome conn_decide(const Digraph& g, const MaxModalityFn& m, int k, bool want_witness) {
    ConnOutcome out;
    if (g.edge_count() == 0) {
        out.yes = true;
        if (want_witness) {
            std::map<VertexId, std::vector<EdgeId>> rot;
            for (VertexId v : g.vertices()) rot[v] = {};
            out.witness = RotationSystem::build(g, std::move(rot));
        }
        return out;
    }
    if (!g.connected()) throw std::invalid_argument("max_modality requires a connected digraph");

    BcPlan plan = plan_bc(g);
    int nb = (int)plan.bc.blocks.size();

    auto block_digraph = [&](int b) {
        std::vector<Edge> es;
        for (EdgeId e : plan.bc.blocks[(size_t)b].edges) es.push_back(g.edge(e));
        return Digraph::build(plan.bc.blocks[(size_t)b].vertices, es);
    };

    std::map<VertexId, int> folded;  // cut vertex -> folded budget
    std::vector<WedgeMenu> menus((size_t)nb);
    std::vector<std::shared_ptr<BlockEngine>> engines((size_t)nb);
    std::vector<Digraph> bgraphs((size_t)nb);
    for (int b = 0; b < nb; ++b) bgraphs[(size_t)b] = block_digraph(b);

    auto m_eff_for = [&](int b, std::optional<VertexId> skip) {
        MaxModalityFn me = m;
        for (VertexId w : plan.bc.blocks[(size_t)b].vertices) {
            if (skip && w == *skip) continue;
            auto it = folded.find(w);
            if (it != folded.end()) me = me.with(w, it->second);
        }
        return me;
    };

    auto fold_cut = [&](VertexId v, int parent_block) -> bool {
        CutFold cf;
        cf.m_v = m.at(v);
        const Digraph& pb = bgraphs[(size_t)parent_block];
        for (EdgeId e : pb.incident(v))
            (pb.orientation(e, v) == Orientation::out ? cf.n_out_parent : cf.n_in_parent)++;
        for (int c : plan.kids[v]) cf.menus.push_back(menus[(size_t)c]);
        int rho = cf.folded_budget();
        if (rho < 0) return false;
        folded[v] = rho;
        return true;
    };

    // leaves-first: menus for non-root blocks, folding each cut vertex once
    // all of its child menus exist
    for (int b : plan.order) {
        if (b == plan.root_block) continue;
        VertexId pc = (VertexId)plan.parent_cut[(size_t)b];
        // fold this block's internal cut vertices first
        for (VertexId w : plan.bc.blocks[(size_t)b].vertices) {
            if (w == pc || !plan.kids.count(w) || folded.count(w)) continue;
            // find the parent block of w's children: it is b
            if (!fold_cut(w, b)) return out;
        }
        const Digraph& bg = bgraphs[(size_t)b];
        bool infeasible = false;
        if (bg.edge_count() == 1) {
            WedgeMenu menu;
            (bg.orientation(0, pc) == Orientation::out ? menu.pure_out : menu.pure_in) = 0;
            menus[(size_t)b] = menu;
        } else {
            EdgeId ref = bg.incident(pc)[0];
            engines[(size_t)b] = std::make_shared<BlockEngine>(bg, m_eff_for(b, pc), k, ref);
            menus[(size_t)b] = block_menu(*engines[(size_t)b], pc, &infeasible);
        }
        if (infeasible) return out;
    }
    // root block: fold its cut vertices, then decide
    for (VertexId w : plan.bc.blocks[(size_t)plan.root_block].vertices) {
        if (!plan.kids.count(w) || folded.count(w)) continue;
        if (!fold_cut(w, plan.root_block)) return out;
    }
    const Digraph& rg = bgraphs[(size_t)plan.root_block];
    MaxModalityFn m_root = m_eff_for(plan.root_block, std::nullopt);
    int root_pick = -1;
    std::shared_ptr<BlockEngine> root_engine;
    if (rg.edge_count() == 1) {
        if (m_root.at(rg.edge(0).tail) < 0 || m_root.at(rg.edge(0).head) < 0) return out;
        root_pick = 0;
    } else {
        root_engine = std::make_shared<BlockEngine>(rg, m_root, k, 0);
        if (!root_engine->ok) return out;
        VertexId u = root_engine->pole_u(), v = root_engine->pole_v();
        Orientation seu = rg.orientation(0, u), sev = rg.orientation(0, v);
        for (int i = 0; i < (int)root_engine->rho().size(); ++i) {
            const EmbTuple& t2 = root_engine->rho()[(size_t)i];
            if (ring_modality(t2.s1, t2.a, seu) <= m_root.at(u) &&
                ring_modality(t2.s2, t2.b, sev) <= m_root.at(v)) {
                root_pick = i;
                break;
            }
        }
        if (root_pick == -1) return out;
    }
    out.yes = true;
    if (!want_witness) return out;

    // ---- witness assembly: stitch block embeddings at the cut vertices ----
    std::map<VertexId, std::vector<EdgeId>> rot;  // global edge ids
    auto splice_block_rotation = [&](int b, const RotationSystem& rs, const Digraph& bg) {
        const auto& blk = plan.bc.blocks[(size_t)b];
        for (VertexId v : blk.vertices) {
            auto order = rs.at(bg, v);
            std::vector<EdgeId> mapped;
            for (EdgeId e : order) mapped.push_back(blk.edges[(size_t)e]);
            if (!rot.count(v)) {
                rot[v] = std::move(mapped);
            } else {
                // cut vertex: insert this block's ring into the existing one
                // at the cheapest cut/position
                auto& ring = rot[v];
                int best = INT_MAX;
                size_t best_cut = 0, best_pos = 0;
                int base = alternations_of_ring(g, ring, v);
                for (size_t cut = 0; cut < mapped.size(); ++cut) {
                    std::vector<EdgeId> wedge;
                    for (size_t i = 0; i < mapped.size(); ++i)
                        wedge.push_back(mapped[(cut + i) % mapped.size()]);
                    for (size_t pos = 0; pos <= ring.size(); ++pos) {
                        std::vector<EdgeId> trial(ring.begin(), ring.begin() + (long)pos);
                        trial.insert(trial.end(), wedge.begin(), wedge.end());
                        trial.insert(trial.end(), ring.begin() + (long)pos, ring.end());
                        int delta = alternations_of_ring(g, trial, v) - base;
                        if (delta < best) {
                            best = delta;
                            best_cut = cut;
                            best_pos = pos;
                        }
                    }
                }
                std::vector<EdgeId> wedge;
                for (size_t i = 0; i < mapped.size(); ++i)
                    wedge.push_back(mapped[(best_cut + i) % mapped.size()]);
                ring.insert(ring.begin() + (long)best_pos, wedge.begin(), wedge.end());
            }
        }
    };

    // root first, then children by BFS depth; per child pick the menu tuple
    // that fits best at its parent cut vertex
    {
        RotationSystem rrs = rg.edge_count() == 1
                                 ? RotationSystem::build(rg, {{rg.edge(0).tail, {0}},
                                                              {rg.edge(0).head, {0}}})
                                 : root_engine->embed(root_pick);
        splice_block_rotation(plan.root_block, rrs, rg);
    }
    std::vector<int> bfs_blocks(plan.order.rbegin(), plan.order.rend());
    for (int b : bfs_blocks) {
        if (b == plan.root_block) continue;
        const Digraph& bg = bgraphs[(size_t)b];
        VertexId pc = (VertexId)plan.parent_cut[(size_t)b];
        if (bg.edge_count() == 1) {
            RotationSystem rs = RotationSystem::build(bg, {{bg.edge(0).tail, {0}},
                                                           {bg.edge(0).head, {0}}});
            splice_block_rotation(b, rs, bg);
            continue;
        }
        const WedgeMenu& menu = menus[(size_t)b];
        // candidate tuples for the wedge, deterministic preference order
        std::vector<EmbTuple> cands;
        if (menu.mixed != WedgeMenu::kNone) cands.push_back(menu.t_mixed);
        if (menu.pure_out != WedgeMenu::kNone) cands.push_back(menu.t_out);
        if (menu.pure_in != WedgeMenu::kNone) cands.push_back(menu.t_inn);
        const auto& rho_gist = engines[(size_t)b]->rho();
        int best_delta = INT_MAX;
        RotationSystem best_rs;
        auto& ring = rot[pc];
        int base = alternations_of_ring(g, ring, pc);
        for (const EmbTuple& cand : cands) {
            int idx = -1;
            for (int i = 0; i < (int)rho_gist.size(); ++i)
                if (rho_gist[(size_t)i] == cand) idx = i;
            if (idx == -1) continue;
            RotationSystem rs = engines[(size_t)b]->embed(idx);
            auto order = rs.at(bg, pc);
            std::vector<EdgeId> mapped;
            for (EdgeId e : order) mapped.push_back(plan.bc.blocks[(size_t)b].edges[(size_t)e]);
            for (size_t cut = 0; cut < mapped.size(); ++cut) {
                for (size_t pos = 0; pos <= ring.size(); ++pos) {
                    std::vector<EdgeId> trial(ring.begin(), ring.begin() + (long)pos);
                    for (size_t i = 0; i < mapped.size(); ++i)
                        trial.push_back(mapped[(cut + i) % mapped.size()]);
                    trial.insert(trial.end(), ring.begin() + (long)pos, ring.end());
                    int delta = alternations_of_ring(g, trial, pc) - base;
                    if (delta < best_delta) {
                        best_delta = delta;
                        best_rs = rs;
                    }
                }
            }
            if (best_delta <= 0) break;
        }
        if (best_delta == INT_MAX) throw std::logic_error("no embeddable wedge for a child block");
        splice_block_rotation(b, best_rs, bg);
    }
    RotationSystem rs = RotationSystem::build(g, std::move(rot));
    if (!is_planar_rotation(g, rs)) throw std::logic_error("assembled witness is not planar");
    if (!satisfies_m(g, rs, m)) throw std::logic_error("assembled witness violates the bounds");
    out.witness = std::move(rs);
    return out;
}

}  // namespace

bool max_modality(const Digraph& g, const MaxModalityFn& m, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    return conn_decide(g, m, k, false).yes;
}

std::optional<RotationSystem> embed_max_modality(const Digraph& g, const MaxModalityFn& m, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    auto r = conn_decide(g, m, k, true);
    return r.yes ? std::move(r.witness) : std::nullopt;
}

bool k_modality(const Digraph& g, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    for (const auto& comp : g.components())
        if (!conn_decide(g.induced(comp), MaxModalityFn::uniform(k), k, false).yes) return false;
    return true;
}

std::optional<RotationSystem> embed_k_modal(const Digraph& g, int k) {
    if (k <= 0 || (k & 1)) throw std::invalid_argument("k must be a positive even integer");
    std::map<VertexId, std::vector<EdgeId>> rot;
    for (const auto& comp : g.components()) {
        std::vector<EdgeId> emap;
        Digraph sub = g.induced(comp, &emap);
        auto r = conn_decide(sub, MaxModalityFn::uniform(k), k, true);
        if (!r.yes) return std::nullopt;
        for (VertexId v : sub.vertices()) {
            auto order = r.witness->at(sub, v);
            std::vector<EdgeId> mapped;
            for (EdgeId e : order) mapped.push_back(emap[(size_t)e]);
            rot[v] = std::move(mapped);
        }
    }
    return RotationSystem::build(g, std::move(rot));
}

bool is_partial_two_tree(const Digraph& g) {
    if (!is_planar_digraph(g)) return false;
    for (const auto& comp : g.components()) {
        Digraph sub = g.induced(comp);
        if (sub.edge_count() == 0) continue;
        for (const auto& blk : bc_tree(sub).blocks) {
            if (blk.edges.size() < 2) continue;
            std::vector<VertexId> vs = blk.vertices;
            std::vector<Edge> es;
            for (EdgeId e : blk.edges) es.push_back(sub.edge(e));
            Digraph bg = Digraph::build(vs, es);
            SPQRTree t = spqr_tree(bg, 0);
            for (const auto& n : t.nodes)
                if (n.type == NodeType::R) return false;
        }
    }
    return true;
}

}  // namespace kmodal
