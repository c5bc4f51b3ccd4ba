#include "kmodal/naesat.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kmodal::nae {

bool check_assignment(const Formula& f, const std::vector<bool>& a) {
    for (const auto& c : f.clauses) {
        bool has_true = false, has_false = false;
        for (const Literal& l : c) {
            bool v = a[(size_t)l.var] ^ l.neg;
            (v ? has_true : has_false) = true;
        }
        if (!has_true || !has_false) return false;
    }
    return true;
}

Result nae_brute(const Formula& f) {
    if (f.nvars > 25) throw std::invalid_argument("nae_brute variable budget exceeded");
    int n = f.nvars;
    for (unsigned long long x = 0; x < (1ULL << n); ++x) {
        std::vector<bool> a((size_t)n, false);
        for (int i = 0; i < n; ++i) a[(size_t)i] = (x >> (n - 1 - i)) & 1;  // lex order, false < true
        if (check_assignment(f, a)) return {true, a, ""};
    }
    return {false, {}, "exhausted all assignments"};
}

namespace {

struct Norm {
    // active normalized clauses; dropped == tautological (contains x and !x)
    std::vector<std::vector<Literal>> clauses;
    std::vector<char> dropped;
    bool unsat = false;
    std::string reason;
};

Norm normalize(const Formula& f) {
    Norm out;
    for (const auto& c : f.clauses) {
        std::set<std::pair<int, bool>> lits;
        for (const Literal& l : c) lits.insert({l.var, l.neg});
        bool taut = false;
        for (auto& [v, neg] : lits)
            if (lits.count({v, !neg})) taut = true;
        std::vector<Literal> norm;
        for (auto& [v, neg] : lits) norm.push_back({v, neg});
        out.clauses.push_back(std::move(norm));
        out.dropped.push_back(taut ? 1 : 0);
        if (!taut && lits.size() <= 1) {
            out.unsat = true;
            out.reason = lits.empty() ? "empty clause" : "clause with a single literal";
        }
    }
    return out;
}

}  // namespace

bool always_sat_check(const Formula& f) {
    Norm nm = normalize(f);
    int nc = (int)nm.clauses.size();
    std::map<int, std::vector<int>> occ;
    for (int c = 0; c < nc; ++c) {
        if (nm.dropped[(size_t)c]) continue;
        for (const Literal& l : nm.clauses[(size_t)c]) occ[l.var].push_back(c);
    }
    for (auto& [v, cs] : occ)
        if (cs.size() > 2) throw std::invalid_argument("variable occurs in more than two clauses");
    // component scan over clauses; a simple-cycle component has every clause
    // of size 2 and every variable in exactly 2 clauses
    std::vector<char> seen((size_t)nc, 0);
    for (int c0 = 0; c0 < nc; ++c0) {
        if (nm.dropped[(size_t)c0] || seen[(size_t)c0]) continue;
        std::vector<int> comp, stack = {c0};
        seen[(size_t)c0] = 1;
        bool cyclic = true;
        while (!stack.empty()) {
            int c = stack.back();
            stack.pop_back();
            comp.push_back(c);
            if (nm.clauses[(size_t)c].size() != 2) cyclic = false;
            for (const Literal& l : nm.clauses[(size_t)c]) {
                auto& cs = occ[l.var];
                if (cs.size() != 2) cyclic = false;
                for (int c2 : cs)
                    if (!seen[(size_t)c2]) {
                        seen[(size_t)c2] = 1;
                        stack.push_back(c2);
                    }
            }
        }
        if (cyclic && comp.size() >= 1) return false;
    }
    return true;
}

Result nae_solve(const Formula& f) {
    Norm nm = normalize(f);
    if (nm.unsat) return {false, {}, nm.reason};
    int nc = (int)nm.clauses.size();
    int nv = f.nvars;

    std::vector<std::vector<Literal>> cls = nm.clauses;
    std::vector<char> active((size_t)nc, 1);
    for (int c = 0; c < nc; ++c)
        if (nm.dropped[(size_t)c]) active[(size_t)c] = 0;

    // occurrence lists over active clauses
    std::vector<std::set<int>> occ((size_t)nv);
    for (int c = 0; c < nc; ++c)
        if (active[(size_t)c])
            for (const Literal& l : cls[(size_t)c]) occ[(size_t)l.var].insert(c);
    for (int v = 0; v < nv; ++v)
        if (occ[(size_t)v].size() > 2)
            throw std::invalid_argument("variable occurs in more than two clauses");

    auto occ_count = [&](int v) {
        int k = 0;
        for (int c : occ[(size_t)v])
            if (active[(size_t)c]) ++k;
        return k;
    };

    struct OpPeel {
        std::vector<Literal> snapshot;
        int designated;
    };
    struct OpSubst {
        int var2, var1;
        bool parity;  // val2 = val1 ^ parity
    };
    struct OpDrop {
        std::vector<Literal> snapshot;
    };
    struct Op {
        int kind;  // 0 peel, 1 subst, 2 drop
        OpPeel peel;
        OpSubst subst;
        OpDrop drop;
    };
    std::vector<Op> log;

    auto deactivate = [&](int c) { active[(size_t)c] = 0; };

    // re-normalizes clause c in place after a substitution; may drop it or
    // detect a contradiction
    std::string contradiction;
    auto renorm_clause = [&](int c) {
        auto& lits = cls[(size_t)c];
        std::set<std::pair<int, bool>> s;
        for (auto& l : lits) s.insert({l.var, l.neg});
        bool taut = false;
        for (auto& [v, neg] : s)
            if (s.count({v, !neg})) taut = true;
        lits.clear();
        for (auto& [v, neg] : s) lits.push_back({v, neg});
        if (taut) {
            Op op;
            op.kind = 2;
            op.drop.snapshot = lits;
            log.push_back(op);
            deactivate(c);
            return;
        }
        if (lits.size() <= 1) contradiction = "substitution reduced a clause to a single literal";
    };

    while (contradiction.empty()) {
        // peel any clause holding a variable's only active occurrence
        bool progress = true;
        while (progress && contradiction.empty()) {
            progress = false;
            for (int c = 0; c < nc; ++c) {
                if (!active[(size_t)c]) continue;
                int designated = -1;
                for (const Literal& l : cls[(size_t)c])
                    if (occ_count(l.var) == 1) {
                        designated = l.var;
                        break;
                    }
                if (designated == -1) continue;
                Op op;
                op.kind = 0;
                op.peel.snapshot = cls[(size_t)c];
                op.peel.designated = designated;
                log.push_back(op);
                deactivate(c);
                progress = true;
            }
        }
        if (!contradiction.empty()) break;
        // eliminate one 2-clause by substitution
        int c2 = -1;
        for (int c = 0; c < nc; ++c)
            if (active[(size_t)c] && cls[(size_t)c].size() == 2) {
                c2 = c;
                break;
            }
        if (c2 == -1) break;
        Literal l1 = cls[(size_t)c2][0], l2 = cls[(size_t)c2][1];
        // NAE(l1,l2) forces l1 != l2: val2 = val1 ^ neg1 ^ neg2 ^ 1
        Op op;
        op.kind = 1;
        op.subst = {l2.var, l1.var, (bool)(l1.neg ^ l2.neg ^ 1)};
        log.push_back(op);
        deactivate(c2);
        // rewrite the other occurrence of var2 (if any)
        for (int c : occ[(size_t)l2.var]) {
            if (!active[(size_t)c]) continue;
            bool touched = false;
            for (auto& l : cls[(size_t)c])
                if (l.var == l2.var) {
                    l = {l1.var, (bool)(l.neg ^ op.subst.parity)};
                    touched = true;
                }
            if (touched) {
                occ[(size_t)l1.var].insert(c);
                renorm_clause(c);
            }
        }
    }
    if (!contradiction.empty()) return {false, {}, contradiction};

    std::vector<bool> value((size_t)nv, false);
    std::vector<char> assigned((size_t)nv, 0);

    // residual components: every clause size >= 3, every variable in exactly
    // two residual clauses; always NAE-satisfiable, built constructively
    {
        std::vector<int> residual;
        for (int c = 0; c < nc; ++c)
            if (active[(size_t)c]) residual.push_back(c);
        // var -> its two residual clauses
        std::map<int, std::vector<int>> vocc;
        for (int c : residual)
            for (const Literal& l : cls[(size_t)c]) vocc[l.var].push_back(c);
        std::set<int> done;
        for (int c0 : residual) {
            if (done.count(c0)) continue;
            // collect the component
            std::vector<int> comp, stack = {c0};
            done.insert(c0);
            while (!stack.empty()) {
                int c = stack.back();
                stack.pop_back();
                comp.push_back(c);
                for (const Literal& l : cls[(size_t)c])
                    for (int c2 : vocc[l.var])
                        if (!done.count(c2)) {
                            done.insert(c2);
                            stack.push_back(c2);
                        }
            }
            // clause graph: edges are variables with both occurrences in comp
            std::map<int, int> cidx;
            for (int i = 0; i < (int)comp.size(); ++i) cidx[comp[(size_t)i]] = i;
            struct GEdge {
                int var;
                int c1, c2;
                Literal l1, l2;  // occurrence literals in c1 / c2
            };
            std::vector<GEdge> gedges;
            for (auto& [v, cs] : vocc) {
                if (cs.size() != 2 || !cidx.count(cs[0]) || !cidx.count(cs[1])) continue;
                GEdge e;
                e.var = v;
                e.c1 = cidx[cs[0]];
                e.c2 = cidx[cs[1]];
                for (const Literal& l : cls[(size_t)cs[0]])
                    if (l.var == v) e.l1 = l;
                for (const Literal& l : cls[(size_t)cs[1]])
                    if (l.var == v) e.l2 = l;
                gedges.push_back(e);
            }
            // find a cycle edge: DFS tree, first non-tree edge; root at its end
            int ncn = (int)comp.size();
            std::vector<std::vector<int>> ginc((size_t)ncn);
            for (int i = 0; i < (int)gedges.size(); ++i) {
                ginc[(size_t)gedges[(size_t)i].c1].push_back(i);
                if (gedges[(size_t)i].c2 != gedges[(size_t)i].c1)
                    ginc[(size_t)gedges[(size_t)i].c2].push_back(i);
            }
            auto other_node = [&](int ei, int node) {
                return gedges[(size_t)ei].c1 == node ? gedges[(size_t)ei].c2 : gedges[(size_t)ei].c1;
            };
            // spanning structure from node 0 to locate one non-tree edge
            int reserved = -1;
            {
                std::vector<int> par((size_t)ncn, -1), pare((size_t)ncn, -1);
                std::vector<char> vis((size_t)ncn, 0);
                std::vector<int> st = {0};
                vis[0] = 1;
                while (!st.empty()) {
                    int x = st.back();
                    st.pop_back();
                    for (int ei : ginc[(size_t)x]) {
                        int y = other_node(ei, x);
                        if (!vis[(size_t)y]) {
                            vis[(size_t)y] = 1;
                            par[(size_t)y] = x;
                            pare[(size_t)y] = ei;
                            st.push_back(y);
                        }
                    }
                }
                for (int ei = 0; ei < (int)gedges.size() && reserved == -1; ++ei) {
                    int a = gedges[(size_t)ei].c1, b = gedges[(size_t)ei].c2;
                    if (pare[(size_t)a] != ei && pare[(size_t)b] != ei) reserved = ei;
                }
            }
            // residual components always contain a cycle (min clause size 3,
            // every variable shared by two clauses)
            if (reserved == -1) return {false, {}, "internal error: acyclic residual component"};
            int root = gedges[(size_t)reserved].c1;
            // DFS tree from root avoiding the reserved edge
            std::vector<int> par((size_t)ncn, -1), pare((size_t)ncn, -1), prefix;
            std::vector<char> vis((size_t)ncn, 0);
            std::vector<int> st = {root};
            vis[(size_t)root] = 1;
            while (!st.empty()) {
                int x = st.back();
                st.pop_back();
                prefix.push_back(x);
                for (int ei : ginc[(size_t)x]) {
                    if (ei == reserved) continue;
                    int y = other_node(ei, x);
                    if (!vis[(size_t)y]) {
                        vis[(size_t)y] = 1;
                        par[(size_t)y] = x;
                        pare[(size_t)y] = ei;
                        st.push_back(y);
                    }
                }
            }
            // pre-assign non-tree edges except the reserved one
            std::vector<char> is_tree((size_t)gedges.size(), 0);
            for (int i = 0; i < ncn; ++i)
                if (pare[(size_t)i] != -1) is_tree[(size_t)pare[(size_t)i]] = 1;
            for (int ei = 0; ei < (int)gedges.size(); ++ei) {
                if (is_tree[(size_t)ei] || ei == reserved) continue;
                value[(size_t)gedges[(size_t)ei].var] = false;
                assigned[(size_t)gedges[(size_t)ei].var] = 1;
            }
            auto literal_value_at = [&](int ei, int node) {
                const GEdge& e = gedges[(size_t)ei];
                const Literal& l = e.c1 == node ? e.l1 : e.l2;
                return value[(size_t)l.var] ^ l.neg;
            };
            // children before parents: reverse DFS discovery order
            for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) {
                int x = *it;
                if (x == root) continue;
                bool seen_any = false, all_equal = true, ref = false;
                for (int ei : ginc[(size_t)x]) {
                    if (ei == reserved || ei == pare[(size_t)x]) continue;
                    if (!assigned[(size_t)gedges[(size_t)ei].var]) continue;
                    bool v = literal_value_at(ei, x);
                    if (!seen_any) {
                        seen_any = true;
                        ref = v;
                    } else if (v != ref) {
                        all_equal = false;
                    }
                }
                const GEdge& pe = gedges[(size_t)pare[(size_t)x]];
                const Literal& pl = pe.c1 == x ? pe.l1 : pe.l2;
                bool want = (seen_any && all_equal) ? !ref : false;  // literal value at x
                value[(size_t)pl.var] = want ^ pl.neg;
                assigned[(size_t)pl.var] = 1;
            }
            // reserved edge fixes the root
            {
                bool seen_any = false, all_equal = true, ref = false;
                for (int ei : ginc[(size_t)root]) {
                    if (ei == reserved) continue;
                    bool v = literal_value_at(ei, root);
                    if (!seen_any) {
                        seen_any = true;
                        ref = v;
                    } else if (v != ref) {
                        all_equal = false;
                    }
                }
                const GEdge& re = gedges[(size_t)reserved];
                const Literal& rl = re.c1 == root ? re.l1 : re.l2;
                bool want = (seen_any && all_equal) ? !ref : false;
                value[(size_t)rl.var] = want ^ rl.neg;
                assigned[(size_t)rl.var] = 1;
            }
        }
    }

    // unwind the operation log in reverse
    for (auto it = log.rbegin(); it != log.rend(); ++it) {
        const Op& op = *it;
        if (op.kind == 1) {
            value[(size_t)op.subst.var2] = value[(size_t)op.subst.var1] ^ op.subst.parity;
            assigned[(size_t)op.subst.var2] = 1;
        } else if (op.kind == 2) {
            for (const Literal& l : op.drop.snapshot)
                if (!assigned[(size_t)l.var]) {
                    value[(size_t)l.var] = false;
                    assigned[(size_t)l.var] = 1;
                }
        } else {
            // peel: set free non-designated vars, then the designated one
            bool seen_any = false, all_equal = true, ref = false;
            for (const Literal& l : op.peel.snapshot) {
                if (l.var == op.peel.designated) continue;
                if (!assigned[(size_t)l.var]) {
                    value[(size_t)l.var] = false;
                    assigned[(size_t)l.var] = 1;
                }
                bool v = value[(size_t)l.var] ^ l.neg;
                if (!seen_any) {
                    seen_any = true;
                    ref = v;
                } else if (v != ref) {
                    all_equal = false;
                }
            }
            Literal dl{};
            for (const Literal& l : op.peel.snapshot)
                if (l.var == op.peel.designated) dl = l;
            bool want = (seen_any && all_equal) ? !ref : false;
            value[(size_t)dl.var] = want ^ dl.neg;
            assigned[(size_t)dl.var] = 1;
        }
    }

    std::vector<bool> out(value.begin(), value.end());
    if (!check_assignment(f, out))
        return {false, {}, "internal error: constructed assignment failed verification"};
    return {true, out, ""};
}

Formula parse_formula(std::string_view text) {
    Formula f;
    bool header = false;
    int line = 0;
    size_t start = 0;
    int expect_clauses = -1;
    while (start <= text.size()) {
        size_t end = text.find('\n', start);
        std::string_view l =
            text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line;
        std::istringstream in{std::string(l)};
        std::string tok;
        if (!(in >> tok)) continue;
        if (tok == "c") continue;
        if (tok == "p") {
            std::string kind;
            if (!(in >> kind >> f.nvars >> expect_clauses) || kind != "nae")
                throw std::runtime_error("line " + std::to_string(line) + ": expected 'p nae <vars> <clauses>'");
            header = true;
            continue;
        }
        if (!header) throw std::runtime_error("clause before 'p nae' header");
        std::vector<Literal> clause;
        long v = std::stol(tok);
        while (v != 0) {
            int var = (int)std::labs(v) - 1;
            if (var >= f.nvars) throw std::runtime_error("literal out of range");
            clause.push_back({var, v < 0});
            if (!(in >> v)) throw std::runtime_error("clause not terminated by 0");
        }
        f.clauses.push_back(std::move(clause));
    }
    if (!header) throw std::runtime_error("missing 'p nae' header");
    if (expect_clauses >= 0 && expect_clauses != (int)f.clauses.size())
        throw std::runtime_error("clause count mismatch");
    return f;
}

std::string serialize_formula(const Formula& f) {
    std::ostringstream out;
    out << "p nae " << f.nvars << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) {
        for (const Literal& l : c) out << (l.neg ? -(l.var + 1) : (l.var + 1)) << " ";
        out << "0\n";
    }
    return out.str();
}

}  // namespace kmodal::nae
