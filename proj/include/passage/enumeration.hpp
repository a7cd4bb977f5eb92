#ifndef PASSAGE_ENUMERATION_HPP
#define PASSAGE_ENUMERATION_HPP

#include <algorithm>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "passage/chain.hpp"
#include "passage/errors.hpp"

namespace passage {

// Brute-force ground truth for the forest quantities. Enumeration walks all
// outdegree functions (every vertex picks one outgoing arc or none), so the
// cost is prod_v (outdeg(v) + 1); usable for small n only.

inline constexpr int kDefaultEnumLimit = 8;

// Spanning in-forest: every weak component is a converging tree. Vertices
// with no chosen out-arc are the roots; |arcs| + |roots| = n. The weight is
// the product of arc weights (1 for the arcless forest).
struct InForest {
    int n = 0;
    std::vector<std::pair<int, int>> arcs;  // sorted by (tail, head)
    std::vector<int> roots;                 // ascending
    double weight = 1.0;

    // Root of the tree containing v: follow the unique out-path.
    int root_of(int v) const {
        int u = v;
        for (int steps = 0; steps <= n; ++steps) {
            auto it = std::find_if(arcs.begin(), arcs.end(),
                                   [u](const auto& a) { return a.first == u; });
            if (it == arcs.end()) return u;
            u = it->second;
        }
        throw NumericError("cycle found while walking to a forest root");
    }
};

namespace detail {

struct ForestEnumerator {
    const WeightedDigraph& g;
    int k;
    std::vector<std::vector<Arc>> out;
    std::vector<int> head;  // chosen head per vertex, -1 = none
    std::vector<double> warc;
    std::vector<InForest> found;

    ForestEnumerator(const WeightedDigraph& g_, int k_)
        : g(g_), k(k_), out(g_.n), head(g_.n, -1), warc(g_.n, 0.0) {
        for (const Arc& a : g.arcs) out[a.tail].push_back(a);
    }

    bool acyclic() const {
        // 0 = unvisited, 1 = on current walk, 2 = known acyclic
        std::vector<int> state(g.n, 0);
        for (int v = 0; v < g.n; ++v) {
            if (state[v] != 0) continue;
            int u = v;
            std::vector<int> walk;
            while (u != -1 && state[u] == 0) {
                state[u] = 1;
                walk.push_back(u);
                u = head[u];
            }
            if (u != -1 && state[u] == 1) return false;
            for (int w : walk) state[w] = 2;
        }
        return true;
    }

    void collect() {
        if (!acyclic()) return;
        InForest f;
        f.n = g.n;
        f.weight = 1.0;
        for (int v = 0; v < g.n; ++v) {
            if (head[v] == -1) {
                f.roots.push_back(v);
            } else {
                f.arcs.emplace_back(v, head[v]);
                f.weight *= warc[v];
            }
        }
        found.push_back(std::move(f));
    }

    void descend(int v, int chosen) {
        if (chosen > k) return;
        if (chosen + (g.n - v) < k) return;  // too few vertices left to reach k arcs
        if (v == g.n) {
            if (chosen == k) collect();
            return;
        }
        for (const Arc& a : out[v]) {
            head[v] = a.head;
            warc[v] = a.weight;
            descend(v + 1, chosen + 1);
        }
        head[v] = -1;
        descend(v + 1, chosen);
    }
};

}  // namespace detail

// All k-arc in-forests of g, duplicate-free, in lexicographic order of the
// arc list. Throws when n exceeds the enumeration limit or k is out of the
// valid range 0..n-1.
inline std::vector<InForest> enumerate_in_forests(const WeightedDigraph& g, int k,
                                                  int limit = kDefaultEnumLimit) {
    if (g.n > limit)
        throw ValidationError("n = " + std::to_string(g.n) + " exceeds enumeration limit " +
                              std::to_string(limit));
    if (k < 0 || k > g.n - 1)
        throw ValidationError("arc count k = " + std::to_string(k) + " outside 0.." +
                              std::to_string(g.n - 1));
    detail::ForestEnumerator e(g, k);
    e.descend(0, 0);
    std::sort(e.found.begin(), e.found.end(),
              [](const InForest& a, const InForest& b) { return a.arcs < b.arcs; });
    return e.found;
}

// sigma_k and Q_k by direct summation over the enumerated forests.
inline std::pair<double, Matrix> oracle_sigma_q(const WeightedDigraph& g, int k,
                                                int limit = kDefaultEnumLimit) {
    double sigma = 0.0;
    Matrix q = Matrix::Zero(g.n, g.n);
    for (const InForest& f : enumerate_in_forests(g, k, limit)) {
        sigma += f.weight;
        for (int i = 0; i < g.n; ++i) q(i, f.root_of(i)) += f.weight;
    }
    return {sigma, q};
}

// q_j summed over spanning converging trees and f_ij summed over 2-tree
// in-forests by explicit membership (one tree converging to j, i in the other
// tree) -- deliberately not via the Q_{n-2} difference formula, so the two can
// be checked against each other.
inline std::pair<Vector, Matrix> oracle_tree_and_two_tree(const WeightedDigraph& g,
                                                          int limit = kDefaultEnumLimit) {
    if (g.n < 2)
        throw ValidationError("two-tree forests are undefined for a single-state chain");
    Vector q = Vector::Zero(g.n);
    for (const InForest& f : enumerate_in_forests(g, g.n - 1, limit))
        q(f.roots.front()) += f.weight;
    Matrix fmat = Matrix::Zero(g.n, g.n);
    for (const InForest& f : enumerate_in_forests(g, g.n - 2, limit)) {
        for (int j : f.roots)
            for (int i = 0; i < g.n; ++i)
                if (f.root_of(i) != j) fmat(i, j) += f.weight;
    }
    return {q, fmat};
}

namespace detail {

inline std::string dot_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

// One DOT digraph per forest. Roots carry peripheries=2; arcs are labeled
// with their weights at full precision so the product can be recovered.
inline std::string forest_dot(const WeightedDigraph& g, const InForest& f, int index) {
    std::string s = "digraph forest_" + std::to_string(index) + " {\n";
    s += "  label=\"weight = " + detail::dot_number(f.weight) + "\";\n";
    std::vector<bool> is_root(g.n, false);
    for (int r : f.roots) is_root[r] = true;
    for (int v = 0; v < g.n; ++v) {
        s += "  " + std::to_string(v + 1);
        if (is_root[v]) s += " [peripheries=2]";
        s += ";\n";
    }
    for (const auto& [tail, head] : f.arcs) {
        double w = 0.0;
        for (const Arc& a : g.arcs)
            if (a.tail == tail && a.head == head) w = a.weight;
        s += "  " + std::to_string(tail + 1) + " -> " + std::to_string(head + 1) +
             " [label=\"" + detail::dot_number(w) + "\"];\n";
    }
    s += "}\n";
    return s;
}

}  // namespace passage

#endif
