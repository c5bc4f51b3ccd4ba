#pragma once

#include <map>

#include "kmodal/digraph.hpp"

namespace kmodal {

struct BCTree {
    struct Block {
        std::vector<EdgeId> edges;
        std::vector<VertexId> vertices;  // sorted
        bool is_bridge = false;
    };
    std::vector<Block> blocks;
    std::vector<VertexId> cut_vertices;              // sorted
    std::map<VertexId, std::vector<int>> blocks_at;  // cut vertex -> block indices
};

// block / cut-vertex decomposition; throws std::invalid_argument on
// disconnected input
BCTree bc_tree(const Digraph& g);

bool is_biconnected(const Digraph& g);

enum class NodeType { S, P, Q, R };

// Rooted SPQR-tree. The root is the Q-node of the reference edge and has a
// single child whose pertinent graph is g minus the reference edge. Skeleton
// edges carry a reference st-orientation a -> b under which the extended
// skeleton of every node is a DAG with single source pole_u and single sink
// pole_v.
struct SPQRTree {
    struct SkelEdge {
        VertexId a, b;  // st-orientation
        int child;
    };
    struct Node {
        NodeType type;
        VertexId pole_u, pole_v;
        int parent = -1;
        EdgeId real_edge = -1;       // Q only
        std::vector<SkelEdge> skel;  // S: in path order pole_u..pole_v; empty for Q
        // R only: rotation of the extended skeleton (one chosen reflection);
        // entries index into skel, -1 is the parent edge
        std::map<VertexId, std::vector<int>> skel_rot;
    };
    std::vector<Node> nodes;
    int root = -1;
    int root_child = -1;  // the unique child of the root Q-node
    EdgeId ref_edge = -1;

    std::vector<int> postorder() const;                 // children before parents
    std::vector<EdgeId> pertinent_edges(int node) const;
    Digraph pertinent(const Digraph& g, int node) const;
};

// canonical SPQR-tree of a biconnected planar digraph with >= 2 edges,
// rooted at ref; throws std::invalid_argument (not biconnected / too small)
// or unsupported_error (not planar)
SPQRTree spqr_tree(const Digraph& g, EdgeId ref);

std::string spqr_dump(const Digraph& g, const SPQRTree& t);

}  // namespace kmodal
