#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kmodal/digraph.hpp"

namespace kmodal {

// Undirected planarity utilities over dense vertex indices 0..n-1.
// Parallel edges and self-loops are tolerated on input (they do not affect
// planarity and are stripped before testing).

bool is_planar_undirected(int n, const std::vector<std::pair<int, int>>& edges);

// Combinatorial embedding of a connected, biconnected, simple planar graph:
// per vertex a cyclic order of incident edge indices (face-consistent).
// Returns nullopt when the graph is not planar.
std::optional<std::vector<std::vector<int>>> planar_embedding_biconnected(
    int n, const std::vector<std::pair<int, int>>& edges);

// planarity of the underlying undirected graph of a digraph
bool is_planar_digraph(const Digraph& g);

// true iff g has an embedding with every vertex on one face
// (tested via planarity of g plus an apex vertex joined to all vertices)
bool is_outerplanar_digraph(const Digraph& g);

}  // namespace kmodal
