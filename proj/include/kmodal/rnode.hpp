#pragma once

#include <string>

#include "kmodal/naesat.hpp"
#include "kmodal/tuples.hpp"

namespace kmodal::rnode {

// An embedded skeleton with a set of candidate tuples per edge and per-vertex
// modality bounds; the combinatorial core behind rigid components at k = 4.
struct SkelInstance {
    struct SEdge {
        int a, b;  // dense endpoints; the tuple's first pole is a
        std::vector<EmbTuple> tuples;
    };
    int nv = 0;
    std::vector<SEdge> edges;
    std::vector<std::vector<int>> rot;  // per vertex: cyclic order of edge ids
    std::vector<int> m;                 // even bounds, <= 4
    std::vector<char> marked;           // exempt from the modality constraint
};

// goodness: sum over edges at v of (A_v(e) + 1) stays within 6 at all vertices
bool is_good(const SkelInstance& inst);

// modality at v under a tuple choice per edge (cyclic fan accounting)
int selection_modality_at(const SkelInstance& inst, const std::vector<int>& choice, int v);

struct ReduceResult {
    bool rejected = false;
    std::string reject_reason;
    SkelInstance inst;  // irreducible when not rejected
    // per current edge and current tuple: provenance into the input instance
    struct Prov {
        int orig_edge = -1, orig_tuple = -1;  // leaf
        int left = -1, right = -1;            // contraction: arena indices
    };
    std::vector<Prov> arena;
    std::vector<std::vector<int>> prov;  // prov[edge][tuple] -> arena index
    // resolves a selection on the reduced instance to original tuple indices
    std::vector<int> resolve(const SkelInstance& original, const std::vector<int>& choice) const;
};
ReduceResult reduce(const SkelInstance& inst);

struct SolveResult {
    bool yes = false;
    std::vector<int> selection;  // tuple index per input edge when yes
};
SolveResult solve_good_instance(const SkelInstance& inst);

std::string debug_dump(const SkelInstance& inst);

// gist computation for an R-node: k = 4, every pertinent degree <= 6
struct RSkelInput {
    int nv = 0;
    int pole_u = -1, pole_v = -1;
    struct REdge {
        int a, b;  // dense endpoints; child tuples' first pole is a
        std::vector<EmbTuple> gist;
    };
    std::vector<REdge> edges;
    std::vector<std::vector<int>> rot;  // CCW incl. the parent edge as -1
    std::vector<int> m;
};
struct RCandidate {
    EmbTuple t;
    bool reflected = false;
    std::vector<int> selection;  // tuple index per skeleton edge
};
// all accepted candidate tuples over both reflections (not yet gist-reduced)
std::vector<RCandidate> r_tuples(const RSkelInput& in);

}  // namespace kmodal::rnode
