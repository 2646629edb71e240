#include <algorithm>
#include <numeric>

#include "doctest.h"
#include "trackmine/assignment.hpp"
#include "trackmine/rng.hpp"

using namespace trackmine;

namespace {

// Exhaustive reference: best total over all injective row -> column maps.
double brute_min_cost(const std::vector<double>& cost, int rows, int cols) {
    std::vector<int> perm(cols);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
        double total = 0.0;
        for (int r = 0; r < rows; ++r) total += cost[r * cols + perm[r]];
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Exhaustive reference for maximum-weight matching with optional nodes.
double brute_max_weight(int n_left, int n_right, const std::vector<WeightedEdge>& edges) {
    std::vector<std::vector<double>> w(n_left, std::vector<double>(n_right, -1.0));
    for (const auto& e : edges) w[e.left][e.right] = std::max(w[e.left][e.right], e.weight);
    std::vector<char> used(n_right, 0);
    double best = 0.0;
    auto rec = [&](auto&& self, int l, double acc) -> void {
        if (l == n_left) {
            best = std::max(best, acc);
            return;
        }
        self(self, l + 1, acc);
        for (int r = 0; r < n_right; ++r) {
            if (used[r] || w[l][r] <= 0.0) continue;
            used[r] = 1;
            self(self, l + 1, acc + w[l][r]);
            used[r] = 0;
        }
    };
    rec(rec, 0, 0.0);
    return best;
}

}  // namespace

TEST_CASE("min cost assignment matches enumeration") {
    Rng rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const int rows = rng.uniform_int(1, 5);
        const int cols = rng.uniform_int(rows, 6);
        std::vector<double> cost(rows * cols);
        for (auto& c : cost) c = rng.uniform(-10.0, 10.0);
        const auto assign = min_cost_assignment(cost, rows, cols);
        REQUIRE(assign.size() == static_cast<std::size_t>(rows));
        std::vector<int> seen(assign);
        std::sort(seen.begin(), seen.end());
        CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
        double total = 0.0;
        for (int r = 0; r < rows; ++r) total += cost[r * cols + assign[r]];
        CHECK(total == doctest::Approx(brute_min_cost(cost, rows, cols)).epsilon(1e-12));
    }
}

TEST_CASE("min cost assignment rejects bad shapes") {
    std::vector<double> cost(6, 0.0);
    CHECK_THROWS_AS(min_cost_assignment(cost, 3, 2), std::invalid_argument);
    CHECK_THROWS_AS(min_cost_assignment(cost, 2, 2), std::invalid_argument);
    CHECK(min_cost_assignment({}, 0, 0).empty());
}

TEST_CASE("max weight matching leaves nodes unmatched when that pays") {
    // One heavy edge beats two light ones that conflict with it.
    std::vector<WeightedEdge> edges{{0, 0, 5.0}, {0, 1, 1.0}, {1, 0, 1.0}};
    const auto m = max_weight_matching(2, 2, edges);
    CHECK(m == MatchPairs{{0, 0}});

    // Non-positive edges are never used.
    std::vector<WeightedEdge> zero{{0, 0, 0.0}, {1, 1, -2.0}};
    CHECK(max_weight_matching(2, 2, zero).empty());
    CHECK(max_weight_matching(0, 0, {}).empty());
}

TEST_CASE("max weight matching matches enumeration on sparse random graphs") {
    Rng rng(5);
    for (int trial = 0; trial < 400; ++trial) {
        const int nl = rng.uniform_int(1, 6);
        const int nr = rng.uniform_int(1, 6);
        std::vector<WeightedEdge> edges;
        for (int l = 0; l < nl; ++l)
            for (int r = 0; r < nr; ++r)
                if (rng.bernoulli(0.4)) edges.push_back({l, r, rng.uniform(0.1, 2.0)});
        const auto m = max_weight_matching(nl, nr, edges);
        std::vector<char> lu(nl, 0), ru(nr, 0);
        double total = 0.0;
        for (const auto& [l, r] : m) {
            CHECK(!lu[l]);
            CHECK(!ru[r]);
            lu[l] = ru[r] = 1;
            double w = 0.0;
            for (const auto& e : edges)
                if (e.left == l && e.right == r) w = std::max(w, e.weight);
            CHECK(w > 0.0);
            total += w;
        }
        CHECK(total == doctest::Approx(brute_max_weight(nl, nr, edges)).epsilon(1e-12));
    }
}
