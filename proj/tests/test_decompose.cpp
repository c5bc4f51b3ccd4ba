#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <map>
#include <set>

#include "doctest.h"
#include "kmodal/decompose.hpp"
#include "kmodal/oracle.hpp"
#include "kmodal/planarity.hpp"

using namespace kmodal;

namespace {

int count_type(const SPQRTree& t, NodeType ty) {
    int c = 0;
    for (auto& n : t.nodes) c += n.type == ty;
    return c;
}

void check_tree_invariants(const Digraph& g, const SPQRTree& t) {
    // parent edge / child poles consistency and canonical adjacency
    for (int x = 0; x < (int)t.nodes.size(); ++x) {
        const auto& n = t.nodes[(size_t)x];
        for (auto& e : n.skel) {
            const auto& c = t.nodes[(size_t)e.child];
            CHECK(c.parent == x);
            CHECK(c.pole_u == e.a);
            CHECK(c.pole_v == e.b);
            if (n.type == NodeType::S) CHECK(c.type != NodeType::S);
            if (n.type == NodeType::P) CHECK(c.type != NodeType::P);
        }
        if (n.type == NodeType::S) {
            // skeleton path from pole_u to pole_v
            REQUIRE(n.skel.size() >= 2);
            CHECK(n.skel.front().a == n.pole_u);
            CHECK(n.skel.back().b == n.pole_v);
            for (size_t i = 0; i + 1 < n.skel.size(); ++i) CHECK(n.skel[i].b == n.skel[i + 1].a);
        }
        if (n.type == NodeType::P) {
            REQUIRE(n.skel.size() >= 2);
            for (auto& e : n.skel) {
                CHECK(e.a == n.pole_u);
                CHECK(e.b == n.pole_v);
            }
        }
        if (n.type == NodeType::R) {
            REQUIRE(n.skel.size() >= 4);
            // simple skeleton: no two edges on the same vertex pair (incl. poles)
            std::set<std::pair<VertexId, VertexId>> seen = {std::minmax(n.pole_u, n.pole_v)};
            for (auto& e : n.skel) CHECK(seen.insert(std::minmax(e.a, e.b)).second);
            // st orientation: single source pole_u, single sink pole_v
            std::map<VertexId, int> outd, ind;
            for (auto& e : n.skel) {
                outd[e.a]++;
                ind[e.b]++;
                outd[e.b];
                ind[e.a];
            }
            for (auto& [v, d] : outd) {
                if (v == n.pole_v) CHECK(d == 0);
                if (v != n.pole_v) CHECK(d > 0);
            }
            for (auto& [v, d] : ind) {
                if (v == n.pole_u) CHECK(d == 0);
                if (v != n.pole_u) CHECK(d > 0);
            }
            // stored embedding covers the extended skeleton and is planar
            REQUIRE(!n.skel_rot.empty());
            std::vector<VertexId> vs;
            for (auto& [v, r] : n.skel_rot) vs.push_back(v);
            std::vector<Edge> es;
            for (auto& e : n.skel) es.push_back({e.a, e.b});
            es.push_back({n.pole_u, n.pole_v});
            Digraph skel = Digraph::build(vs, es);
            std::map<VertexId, std::vector<EdgeId>> rot;
            for (auto& [v, r] : n.skel_rot) {
                for (int s : r) rot[v].push_back(s == -1 ? (EdgeId)n.skel.size() : (EdgeId)s);
            }
            RotationSystem rs = RotationSystem::build(skel, rot);
            CHECK(is_planar_rotation(skel, rs));
        }
    }
    // pertinent edge partition: children partition the parent's pertinent set
    for (int x = 0; x < (int)t.nodes.size(); ++x) {
        if (x == t.root) continue;
        const auto& n = t.nodes[(size_t)x];
        if (n.type == NodeType::Q) continue;
        std::set<EdgeId> mine;
        for (EdgeId e : t.pertinent_edges(x)) mine.insert(e);
        std::set<EdgeId> kids;
        size_t total = 0;
        for (auto& e : n.skel) {
            for (EdgeId f : t.pertinent_edges(e.child)) kids.insert(f);
            total += t.pertinent_edges(e.child).size();
        }
        CHECK(mine == kids);
        CHECK(total == mine.size());
    }
    // the root child covers everything but the reference edge
    auto rc = t.pertinent_edges(t.root_child);
    CHECK((int)rc.size() == g.edge_count() - 1);
    for (EdgeId e : rc) CHECK(e != t.ref_edge);
}

}  // namespace

TEST_CASE("bc tree shapes") {
    // one biconnected block
    Digraph tri = parse_digraph("v 1\nv 2\nv 3\ne 1 2\ne 2 3\ne 3 1");
    BCTree t1 = bc_tree(tri);
    CHECK(t1.blocks.size() == 1);
    CHECK(t1.cut_vertices.empty());

    // two triangles sharing a vertex
    Digraph bow = parse_digraph(
        "v 1\nv 2\nv 3\nv 4\nv 5\ne 1 2\ne 2 3\ne 3 1\ne 3 4\ne 4 5\ne 5 3");
    BCTree t2 = bc_tree(bow);
    CHECK(t2.blocks.size() == 2);
    REQUIRE(t2.cut_vertices.size() == 1);
    CHECK(t2.cut_vertices[0] == 3);

    // path of three edges: three bridges, two cut vertices
    Digraph path = parse_digraph("v 1\nv 2\nv 3\nv 4\ne 1 2\ne 2 3\ne 3 4");
    BCTree t3 = bc_tree(path);
    CHECK(t3.blocks.size() == 3);
    CHECK(t3.cut_vertices.size() == 2);
    for (auto& b : t3.blocks) CHECK(b.is_bridge);

    CHECK_THROWS_AS(bc_tree(parse_digraph("v 1\nv 2\nv 3\ne 1 2")), std::invalid_argument);

    // edge partition across blocks
    std::set<EdgeId> all;
    size_t total = 0;
    for (auto& b : t2.blocks) {
        total += b.edges.size();
        for (EdgeId e : b.edges) all.insert(e);
    }
    CHECK(total == (size_t)bow.edge_count());
    CHECK(all.size() == (size_t)bow.edge_count());
}

TEST_CASE("spqr of a cycle is a single S node") {
    Digraph c4 = parse_digraph("v 0\nv 1\nv 2\nv 3\ne 0 1\ne 1 2\ne 2 3\ne 3 0");
    SPQRTree t = spqr_tree(c4, 0);
    CHECK(count_type(t, NodeType::S) == 1);
    CHECK(count_type(t, NodeType::P) == 0);
    CHECK(count_type(t, NodeType::R) == 0);
    CHECK(count_type(t, NodeType::Q) == 4);  // root + 3 leaves
    CHECK(t.nodes[(size_t)t.root_child].type == NodeType::S);
    CHECK(t.nodes[(size_t)t.root_child].skel.size() == 3);
    check_tree_invariants(c4, t);
}

TEST_CASE("spqr of three parallel edges is a single P node") {
    Digraph p3 = parse_digraph("v 0\nv 1\ne 0 1\ne 0 1\ne 0 1");
    SPQRTree t = spqr_tree(p3, 0);
    CHECK(t.nodes[(size_t)t.root_child].type == NodeType::P);
    CHECK(t.nodes[(size_t)t.root_child].skel.size() == 2);
    CHECK(count_type(t, NodeType::Q) == 3);
    check_tree_invariants(p3, t);
}

TEST_CASE("spqr of K4 is a single R node") {
    Digraph k4 = parse_digraph("v 0\nv 1\nv 2\nv 3\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3");
    SPQRTree t = spqr_tree(k4, 0);
    CHECK(t.nodes[(size_t)t.root_child].type == NodeType::R);
    CHECK(t.nodes[(size_t)t.root_child].skel.size() == 5);
    CHECK(count_type(t, NodeType::R) == 1);
    check_tree_invariants(k4, t);
}

TEST_CASE("two vertices two edges: root child is the other Q") {
    Digraph g = parse_digraph("v 0\nv 1\ne 0 1\ne 1 0");
    SPQRTree t = spqr_tree(g, 0);
    CHECK(t.nodes[(size_t)t.root_child].type == NodeType::Q);
    check_tree_invariants(g, t);
}

TEST_CASE("series parallel generator yields R-free trees") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        Digraph g = oracle::gen_series_parallel(3 + (int)(seed % 10), seed);
        REQUIRE(is_biconnected(g));
        SPQRTree t = spqr_tree(g, 0);
        CHECK(count_type(t, NodeType::R) == 0);
        check_tree_invariants(g, t);
    }
}

TEST_CASE("spqr invariants on random biconnected planar digraphs") {
    int done = 0;
    for (std::uint64_t seed = 0; seed < 400 && done < 60; ++seed) {
        Digraph g = oracle::gen_planar_bounded_degree(4 + (int)(seed % 5), 5, 40000 + seed);
        if (!is_biconnected(g) || g.edge_count() < 2) continue;
        SPQRTree t = spqr_tree(g, (EdgeId)(seed % (std::uint64_t)g.edge_count()));
        check_tree_invariants(g, t);
        ++done;
    }
    CHECK(done == 60);
}

TEST_CASE("wheel graph has an R node") {
    // wheel on 5+1 vertices: triconnected
    std::string s = "v 0\nv 1\nv 2\nv 3\nv 4\nv 5\n";
    for (int i = 1; i <= 5; ++i) s += "e 0 " + std::to_string(i) + "\n";
    for (int i = 1; i <= 5; ++i) s += "e " + std::to_string(i) + " " + std::to_string(i % 5 + 1) + "\n";
    Digraph w = parse_digraph(s);
    SPQRTree t = spqr_tree(w, 3);
    CHECK(count_type(t, NodeType::R) == 1);
    check_tree_invariants(w, t);
}

TEST_CASE("nonplanar and non-biconnected inputs are rejected") {
    Digraph k5 = parse_digraph(
        "v 0\nv 1\nv 2\nv 3\nv 4\n"
        "e 0 1\ne 0 2\ne 0 3\ne 0 4\ne 1 2\ne 1 3\ne 1 4\ne 2 3\ne 2 4\ne 3 4");
    CHECK_THROWS_AS(spqr_tree(k5, 0), unsupported_error);
    Digraph path = parse_digraph("v 0\nv 1\nv 2\ne 0 1\ne 1 2");
    CHECK_THROWS_AS(spqr_tree(path, 0), std::invalid_argument);
}

TEST_CASE("spqr dump mentions all node types") {
    Digraph k4 = parse_digraph("v 0\nv 1\nv 2\nv 3\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3");
    std::string d = spqr_dump(k4, spqr_tree(k4, 0));
    CHECK(d.find('R') != std::string::npos);
    CHECK(d.find("poles") != std::string::npos);
}
