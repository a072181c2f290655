#pragma once

#include <vector>

#include "toriclab/geometry.h"

namespace oracle {

// All-pairs shortest path lengths on the defect graph by breadth-first search.
std::vector<std::vector<int>> bfs_distances(const toriclab::CodeGeometry& geom);

// Length of the shortest closed walk with nontrivial crossing parity, found by
// breadth-first search on the four-sheeted parity cover of the defect graph.
int shortest_nontrivial_cycle(const toriclab::CodeGeometry& geom);

}  // namespace oracle
