#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kmodal {

using VertexId = long long;
using EdgeId = int;

enum class Orientation : unsigned char { inn = 0, out = 1 };

constexpr Orientation flip(Orientation o) {
    return o == Orientation::inn ? Orientation::out : Orientation::inn;
}
constexpr Orientation flip_n(Orientation o, int n) { return (n & 1) ? flip(o) : o; }

struct parse_error : std::runtime_error {
    int line;
    parse_error(int line_, const std::string& msg)
        : std::runtime_error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

// thrown when the instance is outside the implemented decision regime
// (e.g. a rigid component with k != 4 or max degree > 6)
struct unsupported_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Edge {
    VertexId tail;
    VertexId head;
};

// Directed multigraph. Parallel and antiparallel edges are allowed, self-loops
// are not. Edge ids are 0..m-1 in declaration order; vertex ids are arbitrary.
class Digraph {
  public:
    Digraph() = default;
    static Digraph build(std::vector<VertexId> vertices, std::vector<Edge> edges);

    int vertex_count() const { return (int)verts_.size(); }
    int edge_count() const { return (int)edges_.size(); }
    std::span<const VertexId> vertices() const { return verts_; }
    std::span<const Edge> edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_[(size_t)e]; }
    bool has_vertex(VertexId v) const { return index_.count(v) != 0; }
    int index_of(VertexId v) const { return index_.at(v); }
    VertexId vertex_at(int idx) const { return verts_[(size_t)idx]; }
    int degree(VertexId v) const { return (int)inc_[(size_t)index_of(v)].size(); }
    std::span<const EdgeId> incident(VertexId v) const { return inc_[(size_t)index_of(v)]; }

    Orientation orientation(EdgeId e, VertexId x) const {
        return edges_[(size_t)e].tail == x ? Orientation::out : Orientation::inn;
    }
    VertexId other_end(EdgeId e, VertexId x) const {
        const Edge& ed = edges_[(size_t)e];
        return ed.tail == x ? ed.head : ed.tail;
    }

    bool connected() const;
    int max_degree() const;
    // vertex sets of the weakly connected components, deterministic order
    std::vector<std::vector<VertexId>> components() const;
    // subgraph induced by a vertex set (edge ids are renumbered, mapping returned)
    Digraph induced(const std::vector<VertexId>& vs, std::vector<EdgeId>* edge_map = nullptr) const;

  private:
    std::vector<VertexId> verts_;  // sorted ascending
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> inc_;  // by dense vertex index, declaration order
    std::unordered_map<VertexId, int> index_;
};

// Per-vertex cyclic order of edge incidences (a combinatorial embedding
// candidate). Stored as a plain vector per vertex; index 0 is arbitrary.
class RotationSystem {
  public:
    RotationSystem() = default;
    // validates that rot covers exactly the incidences of g
    static RotationSystem build(const Digraph& g, std::map<VertexId, std::vector<EdgeId>> rot);
    static RotationSystem from_dense(const Digraph& g, std::vector<std::vector<EdgeId>> rot);

    std::span<const EdgeId> at(const Digraph& g, VertexId v) const {
        return rot_[(size_t)g.index_of(v)];
    }
    const std::vector<std::vector<EdgeId>>& dense() const { return rot_; }
    RotationSystem reflected() const;

  private:
    std::vector<std::vector<EdgeId>> rot_;  // by dense vertex index
};

// Per-vertex even modality bounds in [0, k]; vertices absent from the map
// default to k.
class MaxModalityFn {
  public:
    MaxModalityFn() = default;
    MaxModalityFn(int k, std::map<VertexId, int> bounds);
    static MaxModalityFn uniform(int k) { return MaxModalityFn(k, {}); }

    int k() const { return k_; }
    int at(VertexId v) const {
        auto it = bounds_.find(v);
        return it == bounds_.end() ? k_ : it->second;
    }
    const std::map<VertexId, int>& bounds() const { return bounds_; }
    MaxModalityFn with(VertexId v, int value) const;

  private:
    int k_ = 0;
    std::map<VertexId, int> bounds_;
};

// number of cyclically adjacent incidence pairs at v with opposite
// orientations; always even, 0 for degree <= 1
int modality_at(const Digraph& g, const RotationSystem& rs, VertexId v);
bool is_k_modal(const Digraph& g, const RotationSystem& rs, int k);
bool satisfies_m(const Digraph& g, const RotationSystem& rs, const MaxModalityFn& m);

struct Dart {
    EdgeId e;
    bool forward;  // true: tail -> head
    bool operator==(const Dart&) const = default;
};

// closed walks partitioning the darts, per the rotation system
std::vector<std::vector<Dart>> trace_faces(const Digraph& g, const RotationSystem& rs);
// Euler check V - E + F = 2 on every connected component
bool is_planar_rotation(const Digraph& g, const RotationSystem& rs);

// true iff g admits a 2-modal embedding (vertex-splitting + planarity test)
bool bimodal_test(const Digraph& g);

// text edge-list format: lines "v <id>" and "e <tail> <head>", comments "#"
Digraph parse_digraph(std::string_view text);
std::string serialize_digraph(const Digraph& g);

std::string to_dot(const Digraph& g, const RotationSystem* rs = nullptr);
std::string rotation_to_json(const Digraph& g, const RotationSystem& rs);
RotationSystem rotation_from_json(const Digraph& g, std::string_view json_text);

// maximum-modality file: lines "<vertex> <even bound>"
MaxModalityFn parse_max_modality(std::string_view text, int k, const Digraph& g);

}  // namespace kmodal
