#include "kmodal/rnode.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace kmodal::rnode {

namespace {

struct Pair {
    Orientation o;
    int c;
    auto operator<=>(const Pair&) const = default;
};

Pair pair_at(const SkelInstance::SEdge& e, const EmbTuple& t, int v) {
    return v == e.a ? Pair{t.s1, t.a} : Pair{t.s2, t.b};
}

FanBlock block_of_pair(const Pair& p, bool at_first_pole) {
    if (at_first_pole) return {flip_n(p.o, p.c), p.o, p.c};
    return {p.o, flip_n(p.o, p.c), p.c};
}

int cyclic_modality(const std::vector<FanBlock>& blocks) {
    if (blocks.empty()) return 0;
    int total = 0;
    for (auto& b : blocks) total += b.alts;
    for (size_t i = 0; i < blocks.size(); ++i)
        total += blocks[i].last != blocks[(i + 1) % blocks.size()].first;
    return total;
}

int max_alternations_at(const SkelInstance::SEdge& e, int v) {
    int best = 0;
    for (const EmbTuple& t : e.tuples) best = std::max(best, pair_at(e, t, v).c);
    return best;
}

// distinct embedding pairs the edge offers at v, sorted
std::vector<Pair> variety_at(const SkelInstance::SEdge& e, int v) {
    std::set<Pair> s;
    for (const EmbTuple& t : e.tuples) s.insert(pair_at(e, t, v));
    return {s.begin(), s.end()};
}

}  // namespace

bool is_good(const SkelInstance& inst) {
    for (int v = 0; v < inst.nv; ++v) {
        int sum = 0;
        for (int e : inst.rot[(size_t)v]) sum += max_alternations_at(inst.edges[(size_t)e], v) + 1;
        if (sum > 6) return false;
    }
    return true;
}

int selection_modality_at(const SkelInstance& inst, const std::vector<int>& choice, int v) {
    std::vector<FanBlock> blocks;
    for (int e : inst.rot[(size_t)v]) {
        const auto& ed = inst.edges[(size_t)e];
        const EmbTuple& t = ed.tuples[(size_t)choice[(size_t)e]];
        blocks.push_back(block_of_pair(pair_at(ed, t, v), v == ed.a));
    }
    return cyclic_modality(blocks);
}

std::string debug_dump(const SkelInstance& inst) {
    std::ostringstream out;
    out << "skel instance: " << inst.nv << " vertices, " << inst.edges.size() << " edges\n";
    for (int v = 0; v < inst.nv; ++v) {
        out << "  v" << v << " m=" << inst.m[(size_t)v] << (inst.marked[(size_t)v] ? " marked" : "")
            << " rot:";
        for (int e : inst.rot[(size_t)v]) out << " e" << e;
        out << "\n";
    }
    for (size_t e = 0; e < inst.edges.size(); ++e) {
        out << "  e" << e << " (" << inst.edges[e].a << "," << inst.edges[e].b << "):";
        for (const EmbTuple& t : inst.edges[e].tuples)
            out << " <" << (t.s1 == Orientation::inn ? 'i' : 'o') << t.a << ","
                << (t.s2 == Orientation::inn ? 'i' : 'o') << t.b << ">";
        out << "\n";
    }
    return out.str();
}

std::vector<int> ReduceResult::resolve(const SkelInstance& original,
                                       const std::vector<int>& choice) const {
    std::vector<int> sel(original.edges.size(), 0);
    std::vector<int> stack;
    for (size_t e = 0; e < inst.edges.size(); ++e) {
        if (inst.edges[e].tuples.empty()) continue;
        stack.push_back(prov[e][(size_t)choice[e]]);
    }
    while (!stack.empty()) {
        int i = stack.back();
        stack.pop_back();
        const Prov& p = arena[(size_t)i];
        if (p.orig_edge >= 0) {
            sel[(size_t)p.orig_edge] = p.orig_tuple;
        } else {
            stack.push_back(p.left);
            stack.push_back(p.right);
        }
    }
    return sel;
}

ReduceResult reduce(const SkelInstance& input) {
    ReduceResult rr;
    rr.inst = input;
    SkelInstance& W = rr.inst;
    std::vector<char> alive(W.edges.size(), 1);
    rr.prov.resize(W.edges.size());
    for (size_t e = 0; e < W.edges.size(); ++e)
        for (size_t t = 0; t < W.edges[e].tuples.size(); ++t) {
            rr.arena.push_back({(int)e, (int)t, -1, -1});
            rr.prov[e].push_back((int)rr.arena.size() - 1);
        }

    constexpr long long kComboBudget = 1'000'000;

    // evaluates vertex v: whether any/all pair combinations satisfy m(v) and
    // which pairs have support
    struct VertexEval {
        bool any = false, all = true;
        std::vector<std::set<Pair>> supported;  // per incident edge slot
    };
    auto eval_vertex = [&](int v) {
        VertexEval ev;
        const auto& edges_at = W.rot[(size_t)v];
        std::vector<std::vector<Pair>> dom;
        long long total = 1;
        for (int e : edges_at) {
            dom.push_back(variety_at(W.edges[(size_t)e], v));
            total *= (long long)dom.back().size();
            if (total > kComboBudget) throw budget_error("vertex combination budget exceeded");
        }
        ev.supported.resize(edges_at.size());
        std::vector<size_t> idx(edges_at.size(), 0);
        if (edges_at.empty()) {
            ev.any = true;
            return ev;
        }
        while (true) {
            std::vector<FanBlock> blocks;
            for (size_t i = 0; i < edges_at.size(); ++i)
                blocks.push_back(block_of_pair(dom[i][idx[i]], v == W.edges[(size_t)edges_at[i]].a));
            bool ok = cyclic_modality(blocks) <= W.m[(size_t)v];
            if (ok) {
                ev.any = true;
                for (size_t i = 0; i < edges_at.size(); ++i) ev.supported[i].insert(dom[i][idx[i]]);
            } else {
                ev.all = false;
            }
            size_t i = 0;
            while (i < edges_at.size() && idx[i] + 1 == dom[i].size()) idx[i++] = 0;
            if (i == edges_at.size()) break;
            ++idx[i];
        }
        return ev;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // rules 1 and 2: reject / filter unsupported pairs / mark satisfied
        for (int v = 0; v < W.nv && !rr.rejected; ++v) {
            if (W.marked[(size_t)v]) continue;
            VertexEval ev = eval_vertex(v);
            if (!ev.any) {
                rr.rejected = true;
                rr.reject_reason = "no satisfying combination at vertex " + std::to_string(v);
                return rr;
            }
            const auto& edges_at = W.rot[(size_t)v];
            bool deleted_here = false;
            for (size_t i = 0; i < edges_at.size(); ++i) {
                auto& ed = W.edges[(size_t)edges_at[i]];
                auto& pv = rr.prov[(size_t)edges_at[i]];
                std::vector<EmbTuple> kept;
                std::vector<int> kept_prov;
                for (size_t t = 0; t < ed.tuples.size(); ++t) {
                    if (ev.supported[i].count(pair_at(ed, ed.tuples[t], v))) {
                        kept.push_back(ed.tuples[t]);
                        kept_prov.push_back(pv[t]);
                    }
                }
                if (kept.size() != ed.tuples.size()) {
                    ed.tuples = std::move(kept);
                    pv = std::move(kept_prov);
                    deleted_here = changed = true;
                }
                if (ed.tuples.empty()) {
                    rr.rejected = true;
                    rr.reject_reason = "edge emptied at vertex " + std::to_string(v);
                    return rr;
                }
            }
            if (!deleted_here && ev.all) {
                W.marked[(size_t)v] = 1;
                changed = true;
            }
        }
        if (changed) continue;

        // rule 3: a vertex with exactly two varied incident edges contracts
        // into a composite edge between their far endpoints
        for (int v = 0; v < W.nv; ++v) {
            if (W.marked[(size_t)v]) continue;
            std::vector<int> varied;
            for (int e : W.rot[(size_t)v])
                if (variety_at(W.edges[(size_t)e], v).size() >= 2) varied.push_back(e);
            if (varied.size() != 2) continue;
            int e1 = varied[0], e2 = varied[1];
            int x = W.edges[(size_t)e1].a == v ? W.edges[(size_t)e1].b : W.edges[(size_t)e1].a;
            int y = W.edges[(size_t)e2].a == v ? W.edges[(size_t)e2].b : W.edges[(size_t)e2].a;
            if (x == y) continue;  // degenerate; left to the fallback solver

            // constant blocks of the other (variety-1) edges at v, in rotation order
            SkelInstance::SEdge merged;
            merged.a = x;
            merged.b = y;
            std::vector<int> merged_prov;
            // evaluate each (t1, t2) combo with the constant pairs around v
            for (size_t i1 = 0; i1 < W.edges[(size_t)e1].tuples.size(); ++i1) {
                for (size_t i2 = 0; i2 < W.edges[(size_t)e2].tuples.size(); ++i2) {
                    std::vector<FanBlock> blocks;
                    for (int e : W.rot[(size_t)v]) {
                        const auto& ed = W.edges[(size_t)e];
                        const EmbTuple& t = e == e1   ? ed.tuples[i1]
                                            : e == e2 ? ed.tuples[i2]
                                                      : ed.tuples[0];
                        blocks.push_back(block_of_pair(pair_at(ed, t, v), v == ed.a));
                    }
                    if (cyclic_modality(blocks) > W.m[(size_t)v]) continue;
                    const EmbTuple& t1 = W.edges[(size_t)e1].tuples[i1];
                    const EmbTuple& t2 = W.edges[(size_t)e2].tuples[i2];
                    Pair px = pair_at(W.edges[(size_t)e1], t1, x);
                    Pair py = pair_at(W.edges[(size_t)e2], t2, y);
                    // normalize both sides to the merged edge's pole convention
                    EmbTuple mt{px.o, px.c, py.o, py.c};
                    if (W.edges[(size_t)e1].a != x) mt.s1 = flip_n(px.o, px.c);
                    if (W.edges[(size_t)e2].a == y) mt.s2 = flip_n(py.o, py.c);
                    bool dup = false;
                    for (const EmbTuple& other : merged.tuples)
                        if (other == mt) dup = true;
                    if (dup) continue;
                    rr.arena.push_back({-1, -1, rr.prov[(size_t)e1][i1], rr.prov[(size_t)e2][i2]});
                    merged.tuples.push_back(mt);
                    merged_prov.push_back((int)rr.arena.size() - 1);
                }
            }
            if (merged.tuples.empty()) {
                rr.rejected = true;
                rr.reject_reason = "contraction at vertex " + std::to_string(v) + " has no tuples";
                return rr;
            }
            int em = (int)W.edges.size();
            W.edges.push_back(std::move(merged));
            rr.prov.push_back(std::move(merged_prov));
            alive.push_back(1);
            alive[(size_t)e1] = alive[(size_t)e2] = 0;
            // rotations: em replaces e1 at x and e2 at y; both vanish at v
            for (int& e : W.rot[(size_t)x])
                if (e == e1) e = em;
            for (int& e : W.rot[(size_t)y])
                if (e == e2) e = em;
            std::vector<int> nr;
            for (int e : W.rot[(size_t)v])
                if (e != e1 && e != e2) nr.push_back(e);
            W.rot[(size_t)v] = std::move(nr);
            W.marked[(size_t)v] = 1;
            W.edges[(size_t)e1].tuples.clear();
            W.edges[(size_t)e2].tuples.clear();
            changed = true;
            break;
        }
    }
    return rr;
}

namespace {

// exhaustive fallback over all tuple selections; used only off the profile
// path (degenerate contractions); edges emptied by contraction have no slot
// in any rotation and are skipped
SolveResult exhaustive_solve(const SkelInstance& inst) {
    long long total = 1;
    std::vector<size_t> sizes;
    for (const auto& e : inst.edges) {
        sizes.push_back(std::max<size_t>(1, e.tuples.size()));
        total *= (long long)sizes.back();
        if (total > 2'000'000) throw budget_error("exhaustive skel-instance budget exceeded");
    }
    std::vector<int> choice(inst.edges.size(), 0);
    while (true) {
        bool ok = true;
        for (int v = 0; v < inst.nv && ok; ++v) {
            if (inst.marked[(size_t)v]) continue;
            if (selection_modality_at(inst, choice, v) > inst.m[(size_t)v]) ok = false;
        }
        if (ok) return {true, choice};
        size_t i = 0;
        while (i < choice.size() && choice[i] + 1 == (int)sizes[i]) choice[i++] = 0;
        if (i == choice.size()) break;
        ++choice[i];
    }
    return {false, {}};
}

}  // namespace

SolveResult solve_good_instance(const SkelInstance& inst) {
    ReduceResult rr = reduce(inst);
    if (rr.rejected) return {false, {}};
    SkelInstance& W = rr.inst;

    // irreducible profile: every unmarked vertex has degree 3, bound 4, and
    // each incident edge offering exactly the pairs (inn,1) and (out,1)
    bool profile_ok = true;
    const std::vector<Pair> want = {{Orientation::inn, 1}, {Orientation::out, 1}};
    for (int v = 0; v < W.nv && profile_ok; ++v) {
        if (W.marked[(size_t)v]) continue;
        if (W.rot[(size_t)v].size() != 3 || W.m[(size_t)v] != 4) {
            profile_ok = false;
            break;
        }
        for (int e : W.rot[(size_t)v])
            if (variety_at(W.edges[(size_t)e], v) != want) profile_ok = false;
    }

    std::vector<int> reduced_choice(W.edges.size(), 0);
    if (!profile_ok) {
        // should not arise for good instances; solved directly for safety
        SolveResult ex = exhaustive_solve(W);
        if (!ex.yes) return {false, {}};
        reduced_choice = ex.selection;
    } else {
        // NAESAT over unmarked incidences
        nae::Formula f;
        std::map<std::pair<int, int>, int> var_of;  // (edge, vertex) -> var
        auto var_for = [&](int e, int v) {
            auto key = std::make_pair(e, v);
            auto it = var_of.find(key);
            if (it != var_of.end()) return it->second;
            var_of[key] = f.nvars;
            return f.nvars++;
        };
        auto unmarked = [&](int v) { return !W.marked[(size_t)v]; };
        // edge clauses, with family normalization (equal family preferred)
        for (size_t e = 0; e < W.edges.size(); ++e) {
            auto& ed = W.edges[e];
            if (ed.tuples.empty()) continue;
            if (!unmarked(ed.a) || !unmarked(ed.b)) continue;
            bool eq_tt = false, eq_ff = false, ne_tf = false, ne_ft = false;
            for (const EmbTuple& t : ed.tuples) {
                bool xa = pair_at(ed, t, ed.a).o == Orientation::inn;
                bool xb = pair_at(ed, t, ed.b).o == Orientation::inn;
                if (xa && xb) eq_tt = true;
                if (!xa && !xb) eq_ff = true;
                if (xa && !xb) ne_tf = true;
                if (!xa && xb) ne_ft = true;
            }
            bool keep_equal;
            if (eq_tt && eq_ff)
                keep_equal = true;  // both families may survive; drop the unequal one
            else if (ne_tf && ne_ft)
                keep_equal = false;
            else
                throw std::logic_error("irreducible edge offers a non-family tuple set");
            std::vector<EmbTuple> kept;
            std::vector<int> kept_prov;
            for (size_t t = 0; t < ed.tuples.size(); ++t) {
                bool xa = pair_at(ed, ed.tuples[t], ed.a).o == Orientation::inn;
                bool xb = pair_at(ed, ed.tuples[t], ed.b).o == Orientation::inn;
                if ((xa == xb) == keep_equal) {
                    kept.push_back(ed.tuples[t]);
                    kept_prov.push_back(rr.prov[e][t]);
                }
            }
            ed.tuples = std::move(kept);
            rr.prov[e] = std::move(kept_prov);
            int va = var_for((int)e, ed.a), vb = var_for((int)e, ed.b);
            if (keep_equal)
                f.clauses.push_back({{va, false}, {vb, true}});
            else
                f.clauses.push_back({{va, false}, {vb, false}});
        }
        // vertex clauses: violated exactly when all boundary orientations meet
        for (int v = 0; v < W.nv; ++v) {
            if (!unmarked(v)) continue;
            std::vector<nae::Literal> clause;
            for (int e : W.rot[(size_t)v])
                clause.push_back({var_for(e, v), W.edges[(size_t)e].a == v});
            f.clauses.push_back(clause);
        }
        if (!nae::always_sat_check(f))
            throw std::logic_error("rigid-component formula has a cycle component");
        nae::Result res = nae::nae_solve(f);
        if (!res.sat) throw std::logic_error("rigid-component formula unexpectedly unsatisfiable");
        // translate the assignment back to tuple choices
        for (size_t e = 0; e < W.edges.size(); ++e) {
            auto& ed = W.edges[e];
            if (ed.tuples.empty()) continue;
            int pick = -1;
            for (size_t t = 0; t < ed.tuples.size() && pick == -1; ++t) {
                bool ok = true;
                for (int end : {ed.a, ed.b}) {
                    if (!unmarked(end)) continue;
                    auto it = var_of.find({(int)e, end});
                    if (it == var_of.end()) continue;
                    bool want_inn = res.assignment[(size_t)it->second];
                    Pair p = pair_at(ed, ed.tuples[t], end);
                    if ((p.o == Orientation::inn) != want_inn || p.c != 1) ok = false;
                }
                if (ok) pick = (int)t;
            }
            if (pick == -1) throw std::logic_error("no tuple matches the NAE assignment");
            reduced_choice[e] = pick;
        }
    }

    std::vector<int> sel = rr.resolve(inst, reduced_choice);
    for (int v = 0; v < inst.nv; ++v) {
        if (inst.marked[(size_t)v]) continue;
        if (selection_modality_at(inst, sel, v) > inst.m[(size_t)v])
            throw std::logic_error("skel-instance selection failed final verification");
    }
    return {true, sel};
}

std::vector<RCandidate> r_tuples(const RSkelInput& in) {
    std::vector<RCandidate> out;
    for (int refl = 0; refl < 2; ++refl) {
        std::vector<std::vector<int>> rot = in.rot;
        if (refl)
            for (auto& r : rot) std::reverse(r.begin(), r.end());
        auto cut_at_parent = [&](int pole) {
            const auto& r = rot[(size_t)pole];
            size_t p = 0;
            while (p < r.size() && r[p] != -1) ++p;
            std::vector<int> seq;
            for (size_t i = 1; i < r.size(); ++i) seq.push_back(r[(p + i) % r.size()]);
            return seq;
        };
        std::vector<int> du = cut_at_parent(in.pole_u);
        std::vector<int> dv = cut_at_parent(in.pole_v);
        std::vector<int> pole_edges;
        {
            std::set<int> s(du.begin(), du.end());
            s.insert(dv.begin(), dv.end());
            pole_edges.assign(s.begin(), s.end());
        }
        // domain per pole edge: distinct projections onto the pole pairs
        struct Dom {
            std::vector<std::pair<std::optional<Pair>, std::optional<Pair>>> keys;
            std::vector<std::vector<int>> tuples;  // per key
        };
        std::map<int, Dom> dom;
        long long total = 1;
        for (int e : pole_edges) {
            const auto& ed = in.edges[(size_t)e];
            std::map<std::pair<std::optional<Pair>, std::optional<Pair>>, std::vector<int>> by_key;
            for (size_t t = 0; t < ed.gist.size(); ++t) {
                std::optional<Pair> pu, pv;
                Pair atu{}, atv{};
                if (ed.a == in.pole_u || ed.b == in.pole_u) {
                    atu = ed.a == in.pole_u ? Pair{ed.gist[t].s1, ed.gist[t].a}
                                            : Pair{ed.gist[t].s2, ed.gist[t].b};
                    pu = atu;
                }
                if (ed.a == in.pole_v || ed.b == in.pole_v) {
                    atv = ed.a == in.pole_v ? Pair{ed.gist[t].s1, ed.gist[t].a}
                                            : Pair{ed.gist[t].s2, ed.gist[t].b};
                    pv = atv;
                }
                by_key[{pu, pv}].push_back((int)t);
            }
            Dom d;
            for (auto& [k, ts] : by_key) {
                d.keys.push_back(k);
                d.tuples.push_back(ts);
            }
            total *= (long long)d.keys.size();
            if (total > 2'000'000) throw budget_error("candidate enumeration budget exceeded");
            dom[e] = std::move(d);
        }

        std::vector<size_t> idx(pole_edges.size(), 0);
        while (true) {
            std::map<int, size_t> pick;
            for (size_t i = 0; i < pole_edges.size(); ++i) pick[pole_edges[i]] = idx[i];

            auto fan_blocks = [&](const std::vector<int>& seq, int pole) {
                std::vector<FanBlock> blocks;
                for (int e : seq) {
                    const auto& d = dom[e];
                    const auto& key = d.keys[pick[e]];
                    Pair p = pole == in.pole_u ? *key.first : *key.second;
                    blocks.push_back(block_of_pair(p, in.edges[(size_t)e].a == pole));
                }
                return blocks;
            };
            std::vector<FanBlock> bu = fan_blocks(du, in.pole_u);
            std::vector<FanBlock> bv = fan_blocks(dv, in.pole_v);
            int a = 0, b = 0;
            for (auto& blk : bu) a += blk.alts;
            for (size_t i = 0; i + 1 < bu.size(); ++i) a += bu[i].last != bu[i + 1].first;
            for (auto& blk : bv) b += blk.alts;
            for (size_t i = 0; i + 1 < bv.size(); ++i) b += bv[i].last != bv[i + 1].first;
            EmbTuple cand{bu.back().last, a, bv.front().first, b};

            if (a <= in.m[(size_t)in.pole_u] && b <= in.m[(size_t)in.pole_v]) {
                // condition 2: a satisfying selection for the inner vertices
                SkelInstance si;
                si.nv = in.nv;
                si.m = in.m;
                si.marked.assign((size_t)in.nv, 0);
                si.marked[(size_t)in.pole_u] = si.marked[(size_t)in.pole_v] = 1;
                si.rot.resize((size_t)in.nv);
                for (int v = 0; v < in.nv; ++v)
                    for (int e : rot[(size_t)v])
                        if (e != -1) si.rot[(size_t)v].push_back(e);
                std::vector<std::vector<int>> back;  // instance tuple -> gist index
                for (size_t e = 0; e < in.edges.size(); ++e) {
                    SkelInstance::SEdge ed;
                    ed.a = in.edges[e].a;
                    ed.b = in.edges[e].b;
                    std::vector<int> origin;
                    if (dom.count((int)e)) {
                        for (int t : dom[(int)e].tuples[pick[(int)e]]) {
                            ed.tuples.push_back(in.edges[e].gist[(size_t)t]);
                            origin.push_back(t);
                        }
                    } else {
                        for (size_t t = 0; t < in.edges[e].gist.size(); ++t) {
                            ed.tuples.push_back(in.edges[e].gist[t]);
                            origin.push_back((int)t);
                        }
                    }
                    si.edges.push_back(std::move(ed));
                    back.push_back(std::move(origin));
                }
                assert(is_good(si));
                SolveResult sr = solve_good_instance(si);
                if (sr.yes) {
                    RCandidate rc;
                    rc.t = cand;
                    rc.reflected = refl != 0;
                    for (size_t e = 0; e < in.edges.size(); ++e)
                        rc.selection.push_back(back[e][(size_t)sr.selection[e]]);
                    out.push_back(std::move(rc));
                }
            }

            size_t i = 0;
            while (i < idx.size() && idx[i] + 1 == dom[pole_edges[i]].keys.size()) idx[i++] = 0;
            if (i == idx.size()) break;
            ++idx[i];
            if (pole_edges.empty()) break;
        }
        if (pole_edges.empty()) break;  // cannot happen for real skeletons
    }
    return out;
}

}  // namespace kmodal::rnode
