#pragma once

#include <string>

#include "graph.hpp"

namespace ge {

/** Deterministic test-family generators. Family strings:
 *    path:n            path on n vertices
 *    cycle:n           cycle on n vertices
 *    grid:k            k x k axis-adjacency grid patch
 *    gridinf:k         k x k patch with diagonal (l-infinity) adjacency
 *    tree:depth,b      complete rooted tree, branching factor b
 *    er-bounded:n,d,s  random graph with max degree <= d, seed s
 *  Throws std::runtime_error on malformed strings. */
Graph generate(const std::string& family);

}  // namespace ge
