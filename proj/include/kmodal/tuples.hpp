#pragma once

#include <optional>

#include "kmodal/decompose.hpp"
#include "kmodal/digraph.hpp"

namespace kmodal {

// DP state summarizing a regular embedding of a pertinent graph:
// boundary orientations at the two poles plus the number of alternating
// inner faces at each pole.
struct EmbTuple {
    Orientation s1;
    int a;
    Orientation s2;
    int b;
    bool operator==(const EmbTuple&) const = default;
    auto operator<=>(const EmbTuple&) const = default;
};

// t dominates t2 (componentwise, equal orientations)
bool dominates(const EmbTuple& t, const EmbTuple& t2);

// deterministic antichain reduction: drops every tuple dominated by another,
// result sorted
std::vector<EmbTuple> gist_of(std::vector<EmbTuple> ts);

// A pole-side view of a tuple: the orientations of the first and last edge of
// the fan at that pole (in storage order) and the alternation count between
// them. `first_pole` selects the (s1,a) side.
struct FanBlock {
    Orientation first, last;
    int alts;
};
FanBlock tuple_block(const EmbTuple& t, bool at_first_pole);

std::vector<EmbTuple> q_tuples(Orientation at_u, Orientation at_v);

// series composition along a path u = w0, w1, ..., wh = v; children[j] spans
// (w_{j-1}, w_j) with its first pole at w_{j-1}; internal_m[j] bounds w_{j+1}
std::vector<EmbTuple> s_compose(const std::vector<std::vector<EmbTuple>>& children,
                                const std::vector<int>& internal_m, int m_u, int m_v, int k);

// parallel composition of children between u and v (first poles at u)
std::vector<EmbTuple> p_compose(const std::vector<std::vector<EmbTuple>>& children, int m_u,
                                int m_v, int k);

// decide whether some tuple extends to an embedding of the whole graph with
// the reference edge on the outer face
bool root_test(const std::vector<EmbTuple>& s_rho, Orientation sigma_e_u, Orientation sigma_e_v,
               int m_u, int m_v);

// modality at the pole of the closed ring formed by the fan plus one extra
// edge of orientation sigma_e (the root-test accounting)
int ring_modality(Orientation s, int count, Orientation sigma_e);

struct DecisionStats {
    long long gist_checks = 0;  // gists verified against the 4k bound
    int max_gist = 0;
};
DecisionStats& global_stats();

// ---- decision procedures ----

// biconnected driver; throws unsupported_error when an R-node appears and
// (k, max degree) is outside the implemented regime (k = 4, degree <= 6)
bool max_modality_biconnected(const Digraph& g, const MaxModalityFn& m, int k);
std::optional<RotationSystem> embed_biconnected(const Digraph& g, const MaxModalityFn& m, int k);

// connected driver over the BC-tree
bool max_modality(const Digraph& g, const MaxModalityFn& m, int k);
std::optional<RotationSystem> embed_max_modality(const Digraph& g, const MaxModalityFn& m, int k);

// k-modality via m == k, per connected component
bool k_modality(const Digraph& g, int k);
std::optional<RotationSystem> embed_k_modal(const Digraph& g, int k);

// true iff the SPQR tree of every block is R-free (series-parallel blocks)
bool is_partial_two_tree(const Digraph& g);

}  // namespace kmodal
