#include "rfeig/sparse_lu.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "rfeig/errors.hpp"

namespace rfeig {

namespace {

// Symmetrized adjacency pattern (A + A^T without the diagonal) as padded lists.
std::vector<std::vector<std::size_t>> symmetric_pattern(const SparseMatrix& a) {
    const std::size_t n = a.rows();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = a.col_ptr()[j]; k < a.col_ptr()[j + 1]; ++k) {
            const std::size_t i = a.row_idx()[k];
            if (i == j) continue;
            adj[i].push_back(j);
            adj[j].push_back(i);
        }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

}  // namespace

Permutation fill_reducing_order(const SparseMatrix& a) {
    const std::size_t n = a.rows();
    auto variable_adj = symmetric_pattern(a);

    // Quotient-graph minimum degree: eliminated vertices become elements whose
    // boundary lists stand in for the fill their elimination would create.
    std::vector<std::vector<std::size_t>> element_boundary(n);
    std::vector<std::vector<std::size_t>> elements_of(n);
    std::vector<bool> eliminated(n, false);
    std::vector<std::size_t> degree(n, 0);
    std::vector<std::size_t> stamp(n, 0);
    std::size_t clock = 0;

    using Entry = std::pair<std::size_t, std::size_t>;  // (degree, vertex)
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
    for (std::size_t v = 0; v < n; ++v) {
        degree[v] = variable_adj[v].size();
        heap.push({degree[v], v});
    }

    std::vector<std::size_t> order;
    order.reserve(n);
    std::vector<std::size_t> scratch;

    while (order.size() < n) {
        Entry top = heap.top();
        heap.pop();
        const std::size_t v = top.second;
        if (eliminated[v] || top.first != degree[v]) continue;  // stale heap entry

        // Boundary of the new element: live variable neighbours plus the
        // boundaries of every adjacent element.
        ++clock;
        scratch.clear();
        stamp[v] = clock;
        for (std::size_t u : variable_adj[v])
            if (!eliminated[u] && stamp[u] != clock) {
                stamp[u] = clock;
                scratch.push_back(u);
            }
        for (std::size_t e : elements_of[v])
            for (std::size_t u : element_boundary[e])
                if (!eliminated[u] && u != v && stamp[u] != clock) {
                    stamp[u] = clock;
                    scratch.push_back(u);
                }
        element_boundary[v] = scratch;
        const std::vector<std::size_t> absorbed = std::move(elements_of[v]);
        eliminated[v] = true;
        order.push_back(v);

        for (std::size_t u : element_boundary[v]) {
            // Drop absorbed elements, attach the new one.
            auto& eu = elements_of[u];
            eu.erase(std::remove_if(eu.begin(), eu.end(),
                                    [&](std::size_t e) {
                                        return std::find(absorbed.begin(), absorbed.end(), e) !=
                                               absorbed.end();
                                    }),
                     eu.end());
            eu.push_back(v);
            // Exact external degree via a fresh mark pass.
            ++clock;
            std::size_t deg = 0;
            stamp[u] = clock;
            for (std::size_t w : variable_adj[u])
                if (!eliminated[w] && stamp[w] != clock) {
                    stamp[w] = clock;
                    ++deg;
                }
            for (std::size_t e : eu)
                for (std::size_t w : element_boundary[e])
                    if (!eliminated[w] && w != u && stamp[w] != clock) {
                        stamp[w] = clock;
                        ++deg;
                    }
            degree[u] = deg;
            heap.push({deg, u});
        }
    }
    // order[k] = vertex eliminated at step k; forward map sends it to position k.
    std::vector<std::size_t> forward(n);
    for (std::size_t k = 0; k < n; ++k) forward[order[k]] = k;
    return Permutation(std::move(forward));
}

LuFactor factor_with_order(const SparseMatrix& a, const Permutation& col_order,
                           double pivot_threshold) {
    const std::size_t n = a.rows();
    LuFactor lu;
    lu.n_ = n;
    lu.l_col_ptr_.assign(n + 1, 0);
    lu.u_col_ptr_.assign(n + 1, 0);
    lu.u_diag_.assign(n, Complex(0.0, 0.0));
    lu.pivot_row_.assign(n, 0);
    lu.col_order_.assign(n, 0);

    constexpr std::size_t kUnpivoted = static_cast<std::size_t>(-1);
    std::vector<std::size_t> pinv(n, kUnpivoted);  // original row -> elimination step
    std::vector<Complex> work(n, Complex(0.0, 0.0));
    std::vector<char> visited(n, 0);
    std::vector<std::size_t> reach, dfs_stack, dfs_edge;

    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t col = col_order.inverse(step);
        lu.col_order_[step] = col;
        const std::size_t col_begin = a.col_ptr()[col];
        const std::size_t col_end = a.col_ptr()[col + 1];
        if (col_begin == col_end) throw StructurallySingular(col);

        // Symbolic: depth-first reachability from the column pattern through L.
        reach.clear();
        for (std::size_t k = col_begin; k < col_end; ++k) {
            std::size_t root = a.row_idx()[k];
            if (visited[root]) continue;
            dfs_stack.clear();
            dfs_edge.clear();
            dfs_stack.push_back(root);
            dfs_edge.push_back(pinv[root] == kUnpivoted ? lu.l_col_ptr_[n]  // leaf
                                                        : lu.l_col_ptr_[pinv[root]]);
            visited[root] = 1;
            while (!dfs_stack.empty()) {
                const std::size_t node = dfs_stack.back();
                const std::size_t piv = pinv[node];
                bool descended = false;
                if (piv != kUnpivoted) {
                    std::size_t& edge = dfs_edge.back();
                    const std::size_t end = lu.l_col_ptr_[piv + 1];
                    while (edge < end) {
                        const std::size_t child = lu.l_rows_[edge++];
                        if (!visited[child]) {
                            visited[child] = 1;
                            dfs_stack.push_back(child);
                            dfs_edge.push_back(pinv[child] == kUnpivoted
                                                   ? lu.l_col_ptr_[n]
                                                   : lu.l_col_ptr_[pinv[child]]);
                            descended = true;
                            break;
                        }
                    }
                }
                if (!descended) {
                    reach.push_back(node);  // postorder: dependencies first on reversal
                    dfs_stack.pop_back();
                    dfs_edge.pop_back();
                }
            }
        }
        std::reverse(reach.begin(), reach.end());

        // Numeric: scatter the column and eliminate along reached pivots.
        for (std::size_t k = col_begin; k < col_end; ++k)
            work[a.row_idx()[k]] = a.values()[k];
        for (std::size_t node : reach) {
            const std::size_t piv = pinv[node];
            if (piv == kUnpivoted) continue;
            const Complex xk = work[node];
            if (xk != Complex(0.0, 0.0)) {
                for (std::size_t e = lu.l_col_ptr_[piv]; e < lu.l_col_ptr_[piv + 1]; ++e)
                    work[lu.l_rows_[e]] -= lu.l_values_[e] * xk;
            }
        }

        // Pivot among unpivoted reached rows, preferring the diagonal when it
        // is within the threshold of the column maximum.
        double best = 0.0;
        std::size_t best_row = kUnpivoted;
        for (std::size_t node : reach) {
            if (pinv[node] != kUnpivoted) continue;
            const double mag = std::abs(work[node]);
            if (mag > best) {
                best = mag;
                best_row = node;
            }
        }
        if (best_row == kUnpivoted || best < 1e-300) {
            for (std::size_t node : reach) {
                visited[node] = 0;
                work[node] = Complex(0.0, 0.0);
            }
            throw NumericallySingular(col);
        }
        if (pinv[col] == kUnpivoted && std::abs(work[col]) >= pivot_threshold * best)
            best_row = col;

        const Complex pivot_value = work[best_row];
        lu.u_diag_[step] = pivot_value;
        lu.pivot_row_[step] = best_row;
        pinv[best_row] = step;

        for (std::size_t node : reach) {
            visited[node] = 0;
            const Complex x = work[node];
            work[node] = Complex(0.0, 0.0);
            if (node == best_row) continue;
            const std::size_t piv = pinv[node];
            if (piv != kUnpivoted && piv != step) {
                if (x != Complex(0.0, 0.0)) {
                    lu.u_pos_.push_back(piv);
                    lu.u_values_.push_back(x);
                }
            } else if (x != Complex(0.0, 0.0)) {
                lu.l_rows_.push_back(node);
                lu.l_values_.push_back(x / pivot_value);
            }
        }
        lu.l_col_ptr_[step + 1] = lu.l_rows_.size();
        lu.u_col_ptr_[step + 1] = lu.u_pos_.size();
    }
    lu.pinv_ = std::move(pinv);
    return lu;
}

LuFactor factor(const SparseMatrix& a) {
    return factor_with_order(a, fill_reducing_order(a));
}

void LuFactor::solve_in_place(std::vector<Complex>& x) const {
    // Forward substitution: z holds the solution of L z = P_r b in elimination
    // order, updated column by column of L.
    std::vector<Complex> z(n_);
    for (std::size_t k = 0; k < n_; ++k) z[k] = x[pivot_row_[k]];
    for (std::size_t k = 0; k < n_; ++k) {
        const Complex zk = z[k];
        if (zk == Complex(0.0, 0.0)) continue;
        for (std::size_t e = l_col_ptr_[k]; e < l_col_ptr_[k + 1]; ++e)
            z[pinv_[l_rows_[e]]] -= l_values_[e] * zk;
    }
    // Back substitution with U stored by column.
    for (std::size_t k = n_; k-- > 0;) {
        z[k] /= u_diag_[k];
        const Complex zk = z[k];
        if (zk == Complex(0.0, 0.0)) continue;
        for (std::size_t e = u_col_ptr_[k]; e < u_col_ptr_[k + 1]; ++e)
            z[u_pos_[e]] -= u_values_[e] * zk;
    }
    for (std::size_t k = 0; k < n_; ++k) x[col_order_[k]] = z[k];
}

std::vector<Complex> LuFactor::solve(const std::vector<Complex>& b) const {
    std::vector<Complex> x = b;
    solve_in_place(x);
    solve_count_.fetch_add(1);
    return x;
}

DenseMatrix LuFactor::solve(const DenseMatrix& b) const {
    DenseMatrix x = b;
    std::vector<Complex> column(n_);
    for (std::size_t j = 0; j < b.cols(); ++j) {
        std::copy(x.col(j), x.col(j) + n_, column.begin());
        solve_in_place(column);
        std::copy(column.begin(), column.end(), x.col(j));
    }
    solve_count_.fetch_add(static_cast<std::int64_t>(b.cols()));
    return x;
}

}  // namespace rfeig
