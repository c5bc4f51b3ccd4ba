#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "kmodal/naesat.hpp"

using namespace kmodal::nae;

namespace {

Formula make(int nvars, std::vector<std::vector<int>> clauses) {
    Formula f;
    f.nvars = nvars;
    for (auto& c : clauses) {
        std::vector<Literal> lits;
        for (int l : c) lits.push_back({std::abs(l) - 1, l < 0});
        f.clauses.push_back(lits);
    }
    return f;
}

bool two_occurrence(const Formula& f) {
    std::vector<int> occ((size_t)f.nvars, 0);
    for (auto& c : f.clauses) {
        std::vector<char> seen((size_t)f.nvars, 0);
        for (auto& l : c)
            if (!seen[(size_t)l.var]) {
                seen[(size_t)l.var] = 1;
                occ[(size_t)l.var]++;
            }
    }
    for (int o : occ)
        if (o > 2) return false;
    return true;
}

// deterministic random two-occurrence formula
Formula random_formula(int nvars, int nclauses, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Formula f;
    f.nvars = nvars;
    std::vector<int> quota((size_t)nvars, 2);
    for (int c = 0; c < nclauses; ++c) {
        int size = 2 + (int)(rng() % 3);
        std::vector<Literal> clause;
        std::vector<char> used((size_t)nvars, 0);
        for (int i = 0; i < size; ++i) {
            int tries = 0;
            while (tries++ < 40) {
                int v = (int)(rng() % (std::uint64_t)nvars);
                if (quota[(size_t)v] > 0 && !used[(size_t)v]) {
                    used[(size_t)v] = 1;
                    quota[(size_t)v]--;
                    clause.push_back({v, (rng() & 1) != 0});
                    break;
                }
            }
        }
        if (clause.size() >= 2) f.clauses.push_back(clause);
    }
    return f;
}

}  // namespace

TEST_CASE("spec examples") {
    // NAE(x,y) & NAE(x,!y) is unsatisfiable
    auto r1 = nae_solve(make(2, {{1, 2}, {1, -2}}));
    CHECK_FALSE(r1.sat);
    CHECK_FALSE(nae_brute(make(2, {{1, 2}, {1, -2}})).sat);

    // a single 3-clause is satisfiable
    auto r2 = nae_solve(make(3, {{1, 2, 3}}));
    REQUIRE(r2.sat);
    CHECK(check_assignment(make(3, {{1, 2, 3}}), r2.assignment));

    // NAE(a,b,c) & NAE(a,!b)
    Formula f3 = make(3, {{1, 2, 3}, {1, -2}});
    auto r3 = nae_solve(f3);
    REQUIRE(r3.sat);
    CHECK(check_assignment(f3, r3.assignment));

    // single literal clause: unsat
    CHECK_FALSE(nae_brute(make(1, {{1}})).sat);
    CHECK_FALSE(nae_solve(make(1, {{1}})).sat);

    // NAE(x,!x) holds under any assignment
    CHECK(nae_brute(make(1, {{1, -1}})).sat);
    CHECK(nae_solve(make(1, {{1, -1}})).sat);
}

TEST_CASE("brute returns the lexicographically least witness") {
    // x=F..., first satisfying in lex order with false < true
    Formula f = make(3, {{1, 2, 3}});
    auto r = nae_brute(f);
    REQUIRE(r.sat);
    CHECK(r.assignment == std::vector<bool>{false, false, true});
}

TEST_CASE("always_sat_check") {
    // two 2-clauses sharing both variables: a 4-cycle component
    CHECK_FALSE(always_sat_check(make(2, {{1, 2}, {-1, 2}})));
    // tree-shaped variable-clause graph
    CHECK(always_sat_check(make(4, {{1, 2, 3}, {3, 4}})));
    // size-3 clauses keep components off the pure cycle shape
    CHECK(always_sat_check(make(6, {{1, 2, 3}, {3, 4, 5}, {5, 6, 1}})));
}

TEST_CASE("cycle components: both parities exercised") {
    // cycle of 2-clauses with contradictory signs -> unsat
    Formula bad = make(2, {{1, 2}, {1, -2}});
    CHECK_FALSE(nae_solve(bad).sat);
    CHECK_FALSE(nae_brute(bad).sat);
    // consistent cycle -> sat
    Formula good = make(2, {{1, 2}, {1, 2}});
    CHECK(nae_solve(good).sat);
    CHECK(nae_brute(good).sat);
    // longer cycles
    Formula c3bad = make(3, {{1, -2}, {2, -3}, {3, -1}});
    CHECK(nae_solve(c3bad).sat == nae_brute(c3bad).sat);
    Formula c3 = make(3, {{1, 2}, {2, 3}, {3, 1}});
    CHECK(nae_solve(c3).sat == nae_brute(c3).sat);
}

TEST_CASE("agreement with brute on random two-occurrence formulas") {
    int sat_seen = 0, unsat_seen = 0;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        int nv = 2 + (int)(seed % 9);
        Formula f = random_formula(nv, 1 + (int)(seed % 8), seed * 77 + 5);
        REQUIRE(two_occurrence(f));
        auto a = nae_solve(f);
        auto b = nae_brute(f);
        REQUIRE(a.sat == b.sat);
        if (a.sat) {
            CHECK(check_assignment(f, a.assignment));
            ++sat_seen;
        } else {
            ++unsat_seen;
        }
        if (always_sat_check(f)) CHECK(a.sat);
    }
    CHECK(sat_seen > 100);
    CHECK(unsat_seen > 0);
}

TEST_CASE("exhaustive tiny formulas") {
    // all formulas over 3 variables with up to 3 clauses of size 2..3 drawn
    // from a fixed clause pool, filtered to the two-occurrence subtype
    std::vector<std::vector<int>> pool;
    for (int a = 1; a <= 3; ++a)
        for (int b = a + 1; b <= 3; ++b)
            for (int sa : {1, -1})
                for (int sb : {1, -1}) pool.push_back({sa * a, sb * b});
    pool.push_back({1, 2, 3});
    pool.push_back({-1, 2, 3});
    pool.push_back({1, -2, 3});
    pool.push_back({1, 2, -3});
    int tested = 0;
    for (size_t i = 0; i < pool.size(); ++i)
        for (size_t j = i; j < pool.size(); ++j) {
            Formula f = make(3, {pool[i], pool[j]});
            if (!two_occurrence(f)) continue;
            auto a = nae_solve(f);
            auto b = nae_brute(f);
            REQUIRE(a.sat == b.sat);
            if (a.sat) CHECK(check_assignment(f, a.assignment));
            ++tested;
        }
    CHECK(tested > 50);
}

TEST_CASE("three occurrences rejected") {
    CHECK_THROWS_AS(nae_solve(make(2, {{1, 2}, {1, -2}, {1, 2}})), std::invalid_argument);
}

TEST_CASE("formula text round-trip") {
    Formula f = make(3, {{1, -2, 3}, {2, -3}});
    std::string s = serialize_formula(f);
    Formula g = parse_formula(s);
    CHECK(g.nvars == 3);
    REQUIRE(g.clauses.size() == 2);
    CHECK(g.clauses[0] == f.clauses[0]);
    CHECK(g.clauses[1] == f.clauses[1]);
    CHECK_THROWS(parse_formula("1 2 0\n"));
}
