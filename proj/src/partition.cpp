#include "rfeig/partition.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "rfeig/errors.hpp"

namespace rfeig {

Graph build_adjacency(const SparsePencil& pencil) {
    Graph graph;
    graph.adjacency.assign(pencil.n, {});
    auto add_pattern = [&](const SparseMatrix& a) {
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k) {
                const std::size_t i = a.row_idx()[k];
                if (i == j) continue;
                graph.adjacency[i].push_back(j);
                graph.adjacency[j].push_back(i);
            }
    };
    add_pattern(pencil.a);
    add_pattern(pencil.m);
    for (auto& list : graph.adjacency) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return graph;
}

namespace {

// BFS order over a vertex subset, restarting on unreached vertices so
// disconnected subsets still enumerate completely. Returns visit order.
std::vector<std::size_t> bfs_order(const Graph& graph, const std::vector<std::size_t>& subset,
                                   std::size_t start, const std::vector<char>& in_subset) {
    std::vector<char> seen(graph.size(), 0);
    std::vector<std::size_t> order;
    order.reserve(subset.size());
    std::vector<std::size_t> queue;
    auto run = [&](std::size_t root) {
        queue.clear();
        queue.push_back(root);
        seen[root] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            order.push_back(v);
            for (std::size_t u : graph.adjacency[v])
                if (in_subset[u] && !seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        }
    };
    run(start);
    for (std::size_t v : subset)
        if (!seen[v]) run(v);
    return order;
}

std::size_t pseudo_peripheral(const Graph& graph, const std::vector<std::size_t>& subset,
                              const std::vector<char>& in_subset) {
    std::size_t start = subset.front();
    for (int round = 0; round < 3; ++round) {
        const auto order = bfs_order(graph, subset, start, in_subset);
        // Last vertex of the component containing `start`.
        std::size_t farthest = start;
        std::vector<char> seen(graph.size(), 0);
        std::vector<std::size_t> queue{start};
        seen[start] = 1;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::size_t v = queue[head];
            farthest = v;
            for (std::size_t u : graph.adjacency[v])
                if (in_subset[u] && !seen[u]) {
                    seen[u] = 1;
                    queue.push_back(u);
                }
        }
        if (farthest == start) break;
        start = farthest;
    }
    return start;
}

// Grows one side to exactly `target` vertices, repeatedly absorbing the
// frontier vertex with the largest gain (neighbours already grown minus
// neighbours still outside). Plain breadth-first growth would tunnel through
// high-degree vertices and scatter the parts; greedy gains keep the boundary
// tight.
std::vector<std::size_t> grow_half(const Graph& graph, const std::vector<std::size_t>& subset,
                                   std::size_t target, const std::vector<char>& in_subset) {
    std::vector<char> grown(graph.size(), 0);
    std::vector<long> gain(graph.size(), 0);
    std::vector<char> queued(graph.size(), 0);
    // Max-heap on (gain, preference for older frontier entries via index).
    using Entry = std::pair<long, std::size_t>;
    std::priority_queue<Entry> frontier;

    std::vector<std::size_t> picked;
    picked.reserve(target);
    auto add_to_frontier = [&](std::size_t v) {
        long g = 0;
        for (std::size_t u : graph.adjacency[v])
            if (in_subset[u]) g += grown[u] ? 1 : -1;
        gain[v] = g;
        queued[v] = 1;
        frontier.push({g, v});
    };

    std::size_t seed = pseudo_peripheral(graph, subset, in_subset);
    while (picked.size() < target) {
        std::size_t next = graph.size();
        while (!frontier.empty()) {
            const auto [g, v] = frontier.top();
            frontier.pop();
            if (grown[v] || g != gain[v]) continue;  // stale
            next = v;
            break;
        }
        if (next == graph.size()) {
            // Frontier exhausted (component consumed): restart elsewhere.
            if (!grown[seed] && in_subset[seed]) {
                next = seed;
            } else {
                for (std::size_t v : subset)
                    if (!grown[v]) {
                        next = v;
                        break;
                    }
            }
            if (next == graph.size()) break;
        }
        grown[next] = 1;
        queued[next] = 0;
        picked.push_back(next);
        for (std::size_t u : graph.adjacency[next]) {
            if (!in_subset[u] || grown[u]) continue;
            if (queued[u]) {
                gain[u] += 2;  // one edge moved from outside to inside
                frontier.push({gain[u], u});
            } else {
                add_to_frontier(u);
            }
        }
    }
    return picked;
}

void bisect(const Graph& graph, const std::vector<std::size_t>& subset, std::size_t parts,
            std::size_t first_label, std::vector<std::size_t>& labels) {
    if (parts == 1) {
        for (std::size_t v : subset) labels[v] = first_label;
        return;
    }
    std::vector<char> in_subset(graph.size(), 0);
    for (std::size_t v : subset) in_subset[v] = 1;

    const std::size_t left_parts = (parts + 1) / 2;
    const std::size_t right_parts = parts - left_parts;
    const std::size_t left_target =
        (subset.size() * left_parts + parts / 2) / parts;

    std::vector<std::size_t> left = grow_half(graph, subset, left_target, in_subset);
    std::vector<char> taken(graph.size(), 0);
    for (std::size_t v : left) taken[v] = 1;
    std::vector<std::size_t> right;
    right.reserve(subset.size() - left.size());
    for (std::size_t v : subset)
        if (!taken[v]) right.push_back(v);
    std::sort(left.begin(), left.end());
    bisect(graph, left, left_parts, first_label, labels);
    bisect(graph, right, right_parts, first_label + left_parts, labels);
}

}  // namespace

std::vector<std::size_t> partition_graph(const Graph& graph, std::size_t parts) {
    const std::size_t n = graph.size();
    if (parts > n) throw TooManyParts();
    std::vector<std::size_t> labels(n, 0);
    if (parts <= 1 || n == 0) return labels;
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    bisect(graph, all, parts, 0, labels);
    return labels;
}

PartitionResult interior_interface_order(const Graph& graph,
                                         const std::vector<std::size_t>& labels) {
    const std::size_t n = graph.size();
    const std::size_t parts = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    PartitionResult result;
    result.part_labels = labels;
    result.parts = parts;
    result.interior_sizes.assign(parts, 0);
    result.interface_sizes.assign(parts, 0);

    std::vector<char> interface_flag(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t u : graph.adjacency[v])
            if (labels[u] != labels[v]) {
                interface_flag[v] = 1;
                if (u > v) ++result.edge_cut;  // counted once per cut edge
            }

    for (std::size_t v = 0; v < n; ++v) {
        if (interface_flag[v])
            ++result.interface_sizes[labels[v]];
        else
            ++result.interior_sizes[labels[v]];
    }
    for (std::size_t k = 0; k < parts; ++k) {
        result.interior_total += result.interior_sizes[k];
        result.interface_total += result.interface_sizes[k];
    }

    // New order: interiors grouped by part, then interfaces grouped by part.
    std::vector<std::size_t> forward(n, 0);
    std::vector<std::size_t> interior_next(parts, 0), interface_next(parts, 0);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < parts; ++k) {
        interior_next[k] = offset;
        offset += result.interior_sizes[k];
    }
    for (std::size_t k = 0; k < parts; ++k) {
        interface_next[k] = offset;
        offset += result.interface_sizes[k];
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (interface_flag[v])
            forward[v] = interface_next[labels[v]]++;
        else
            forward[v] = interior_next[labels[v]]++;
    }
    result.permutation = Permutation(std::move(forward));
    return result;
}

PartitionedPencil partition_pencil(const SparsePencil& pencil, std::size_t parts) {
    const Graph graph = build_adjacency(pencil);
    const auto labels = partition_graph(graph, parts);
    PartitionResult partition = interior_interface_order(graph, labels);

    PartitionedPencil out;
    out.reordered = SparsePencil(permute_symmetric(pencil.a, partition.permutation),
                                 permute_symmetric(pencil.m, partition.permutation));
    out.blocks = extract_blocks(out.reordered, partition.interior_total);
    out.interior_offsets.assign(partition.parts + 1, 0);
    for (std::size_t k = 0; k < partition.parts; ++k)
        out.interior_offsets[k + 1] = out.interior_offsets[k] + partition.interior_sizes[k];
    out.partition = std::move(partition);
    return out;
}

PartitionedPencil wrap_partitioned(SparsePencil reordered,
                                   std::vector<std::size_t> interior_sizes) {
    PartitionedPencil out;
    std::size_t d = 0;
    for (std::size_t size : interior_sizes) d += size;
    out.blocks = extract_blocks(reordered, d);
    out.reordered = std::move(reordered);
    out.partition.parts = interior_sizes.size();
    out.partition.interior_sizes = interior_sizes;
    out.partition.interior_total = d;
    out.partition.interface_total = out.reordered.n - d;
    out.partition.interface_sizes.assign(interior_sizes.size(), 0);
    if (!interior_sizes.empty())
        out.partition.interface_sizes.back() = out.partition.interface_total;
    out.partition.permutation = Permutation::identity(out.reordered.n);
    out.partition.part_labels.assign(out.reordered.n, 0);
    out.interior_offsets.assign(out.partition.parts + 1, 0);
    for (std::size_t k = 0; k < out.partition.parts; ++k)
        out.interior_offsets[k + 1] = out.interior_offsets[k] + interior_sizes[k];
    return out;
}

}  // namespace rfeig
