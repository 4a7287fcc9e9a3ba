#pragma once

#include <cstddef>
#include <vector>

#include "rfeig/sparse.hpp"

namespace rfeig {

// Undirected adjacency lists without self loops.
struct Graph {
    std::vector<std::vector<std::size_t>> adjacency;
    std::size_t size() const { return adjacency.size(); }
};

// Adjacency graph of |A| + |A^T| + |M| + |M^T|.
Graph build_adjacency(const SparsePencil& pencil);

// Recursive bisection into `parts` non-overlapping groups; labels are 0-based.
// Each bisection grows one side greedily from a pseudo-peripheral vertex,
// absorbing the frontier vertex with the best cut gain until the proportional
// target is reached.
std::vector<std::size_t> partition_graph(const Graph& graph, std::size_t parts);

struct PartitionResult {
    Permutation permutation;                  // old index -> new index
    std::vector<std::size_t> part_labels;     // per old vertex, in 0..p-1
    std::vector<std::size_t> interior_sizes;  // d_i per part
    std::vector<std::size_t> interface_sizes; // s_i per part
    std::size_t interior_total = 0;           // d
    std::size_t interface_total = 0;          // s
    std::size_t edge_cut = 0;
    std::size_t parts = 0;
};

// Orders all interior vertices (no neighbour in another part), grouped by
// part, ahead of all interface vertices.
PartitionResult interior_interface_order(const Graph& graph,
                                         const std::vector<std::size_t>& labels);

// Reordered pencil with its 2x2 block splitting. The interior block B is block
// diagonal with one diagonal block per part; interior_offsets[k] is the first
// row of part k inside B, so part k occupies [interior_offsets[k],
// interior_offsets[k+1]).
struct PartitionedPencil {
    SparsePencil reordered;
    PartitionResult partition;
    PencilBlocks blocks;
    std::vector<std::size_t> interior_offsets;  // size parts+1
};

PartitionedPencil partition_pencil(const SparsePencil& pencil, std::size_t parts);

// Wraps an already-reordered pencil whose interior block structure is known
// (used by tests that construct block forms directly).
PartitionedPencil wrap_partitioned(SparsePencil reordered,
                                   std::vector<std::size_t> interior_sizes);

}  // namespace rfeig
