#include "trackmine/assignment.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace trackmine {

std::vector<int> min_cost_assignment(std::span<const double> cost, int rows, int cols) {
    if (rows < 0 || cols < 0 || rows > cols)
        throw std::invalid_argument("min_cost_assignment: need 0 <= rows <= cols");
    if (cost.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols))
        throw std::invalid_argument("min_cost_assignment: cost size mismatch");
    if (rows == 0) return {};

    constexpr double kInf = std::numeric_limits<double>::infinity();
    const auto at = [&](int r, int c) { return cost[static_cast<std::size_t>(r) * cols + c]; };

    // 1-based potentials; column 0 is a virtual start node.
    std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
    std::vector<int> owner(cols + 1, 0), way(cols + 1, 0);
    std::vector<double> minv(cols + 1);
    std::vector<char> used(cols + 1);

    for (int i = 1; i <= rows; ++i) {
        owner[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), kInf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = owner[j0];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const double cur = at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (owner[j0] != 0);
        do {
            const int j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> assignment(rows, -1);
    for (int j = 1; j <= cols; ++j)
        if (owner[j] != 0) assignment[owner[j] - 1] = j - 1;
    return assignment;
}

namespace {

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent[b] = a;
    }
};

}  // namespace

MatchPairs max_weight_matching(int n_left, int n_right, std::span<const WeightedEdge> edges) {
    // Keep the best weight per (left, right); drop edges that cannot help.
    std::map<std::pair<int, int>, double> best;
    for (const auto& e : edges) {
        if (e.left < 0 || e.left >= n_left || e.right < 0 || e.right >= n_right)
            throw std::out_of_range("max_weight_matching: edge endpoint out of range");
        if (!(e.weight > 0.0)) continue;
        auto [it, inserted] = best.try_emplace({e.left, e.right}, e.weight);
        if (!inserted) it->second = std::max(it->second, e.weight);
    }
    if (best.empty()) return {};

    DisjointSets sets(n_left + n_right);
    for (const auto& [key, w] : best) sets.unite(key.first, n_left + key.second);

    // Group edges by component root; std::map keeps components in index order.
    std::map<int, std::vector<std::pair<std::pair<int, int>, double>>> components;
    for (const auto& [key, w] : best) components[sets.find(key.first)].push_back({key, w});

    MatchPairs result;
    for (const auto& [root, comp] : components) {
        std::vector<int> lefts, rights;
        for (const auto& [key, w] : comp) {
            lefts.push_back(key.first);
            rights.push_back(key.second);
        }
        std::sort(lefts.begin(), lefts.end());
        lefts.erase(std::unique(lefts.begin(), lefts.end()), lefts.end());
        std::sort(rights.begin(), rights.end());
        rights.erase(std::unique(rights.begin(), rights.end()), rights.end());

        const auto index_of = [](const std::vector<int>& v, int x) {
            return static_cast<int>(std::lower_bound(v.begin(), v.end(), x) - v.begin());
        };

        // Non-edges cost 0, the same as leaving both endpoints unmatched.
        const bool transposed = lefts.size() > rights.size();
        const int rows = static_cast<int>(transposed ? rights.size() : lefts.size());
        const int cols = static_cast<int>(transposed ? lefts.size() : rights.size());
        std::vector<double> cost(static_cast<std::size_t>(rows) * cols, 0.0);
        for (const auto& [key, w] : comp) {
            const int l = index_of(lefts, key.first);
            const int r = index_of(rights, key.second);
            const int row = transposed ? r : l;
            const int col = transposed ? l : r;
            cost[static_cast<std::size_t>(row) * cols + col] = -w;
        }

        const auto assign = min_cost_assignment(cost, rows, cols);
        for (int row = 0; row < rows; ++row) {
            const int col = assign[row];
            if (col < 0) continue;
            const int l = transposed ? lefts[col] : lefts[row];
            const int r = transposed ? rights[row] : rights[col];
            if (best.count({l, r})) result.emplace_back(l, r);
        }
    }
    std::sort(result.begin(), result.end());
    return result;
}

}  // namespace trackmine
