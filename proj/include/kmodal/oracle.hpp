#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "kmodal/digraph.hpp"

namespace kmodal::oracle {

struct EnumOptions {
    long long budget = 5'000'000;  // max rotation systems visited (after halving)
};

// Visits every planar rotation system of g exactly once, canonicalized under
// global reflection (the rotation at one maximum-degree vertex is restricted
// to its lexicographically smaller mirror image). Deterministic order.
// Returns the number of planar rotation systems visited.
long long enumerate_planar_embeddings(const Digraph& g,
                                      const std::function<void(const RotationSystem&)>& fn,
                                      const EnumOptions& opt = {});

// Minimum over planar embeddings of the maximum vertex modality;
// nullopt when g has no planar embedding.
std::optional<int> min_modality(const Digraph& g, const EnumOptions& opt = {});

// Deterministic random instance generators.
Digraph gen_series_parallel(int n, std::uint64_t seed);
Digraph gen_outerplanar(int n, std::uint64_t seed);
Digraph gen_planar_bounded_degree(int n, int max_degree, std::uint64_t seed);

}  // namespace kmodal::oracle
