#ifndef PASSAGE_CHAIN_HPP
#define PASSAGE_CHAIN_HPP

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "passage/errors.hpp"

namespace passage {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Input validation tolerance for row sums of T (and row sums of L).
inline constexpr double kRowSumTol = 1e-12;

namespace detail {

// Arc i->j exists whenever i != j and t_ij != 0.
inline std::vector<std::vector<int>> adjacency(const Matrix& t) {
    const int n = static_cast<int>(t.rows());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && t(i, j) != 0.0) adj[i].push_back(j);
    return adj;
}

inline std::vector<bool> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<int> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    return seen;
}

// Returns a witness (a, b) with "state a cannot reach state b" (0-indexed),
// or nullopt when the digraph of t is strongly connected.
inline std::optional<std::pair<int, int>> find_unreachable_pair(const Matrix& t) {
    const int n = static_cast<int>(t.rows());
    const auto adj = adjacency(t);
    const auto fwd = reachable_from(adj, 0);
    for (int v = 0; v < n; ++v)
        if (!fwd[v]) return std::make_pair(0, v);

    std::vector<std::vector<int>> radj(n);
    for (int i = 0; i < n; ++i)
        for (int j : adj[i]) radj[j].push_back(i);
    const auto bwd = reachable_from(radj, 0);
    for (int v = 0; v < n; ++v)
        if (!bwd[v]) return std::make_pair(v, 0);
    return std::nullopt;
}

}  // namespace detail

// True iff the digraph of t (arc i->j when i != j, t_ij != 0) is strongly
// connected. Single-state chains are vacuously irreducible.
inline bool check_irreducible(const Matrix& t) {
    return !detail::find_unreachable_pair(t).has_value();
}

// Row-stochastic transition matrix of an irreducible chain. Validation covers
// nonnegativity, row sums within kRowSumTol of 1, and strong connectivity.
// Aperiodicity is deliberately NOT checked: mean first passage times and the
// stationary vector are well defined for any irreducible finite chain.
// States are 0-indexed in this API; all user-facing I/O is 1-indexed.
class TransitionMatrix {
  public:
    explicit TransitionMatrix(Matrix t) : t_(std::move(t)) {
        if (t_.rows() != t_.cols() || t_.rows() < 1)
            throw ValidationError("transition matrix must be square with n >= 1");
        const int n = static_cast<int>(t_.rows());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j)
                if (!(t_(i, j) >= 0.0))
                    throw ValidationError("negative entry at row " + std::to_string(i + 1) +
                                          ", column " + std::to_string(j + 1));
            const double s = t_.row(i).sum();
            if (!(std::abs(s - 1.0) <= kRowSumTol))
                throw ValidationError("row " + std::to_string(i + 1) +
                                      " sums to " + std::to_string(s) + ", expected 1");
        }
        if (auto w = detail::find_unreachable_pair(t_))
            throw ValidationError("chain is not irreducible: state " +
                                  std::to_string(w->first + 1) + " cannot reach state " +
                                  std::to_string(w->second + 1));
    }

    int n() const { return static_cast<int>(t_.rows()); }
    double operator()(int i, int j) const { return t_(i, j); }
    const Matrix& matrix() const { return t_; }

  private:
    Matrix t_;
};

inline bool check_irreducible(const TransitionMatrix& t) { return check_irreducible(t.matrix()); }

struct Arc {
    int tail = 0;
    int head = 0;
    double weight = 0.0;
    friend bool operator==(const Arc&, const Arc&) = default;
};

// Loop-free weighted digraph of a chain: arc (i,j,t_ij) for every i != j with
// t_ij != 0. Arcs are kept sorted by (tail, head).
struct WeightedDigraph {
    int n = 0;
    std::vector<Arc> arcs;
};

inline WeightedDigraph digraph_of(const TransitionMatrix& t) {
    WeightedDigraph g;
    g.n = t.n();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (i != j && t(i, j) != 0.0) g.arcs.push_back({i, j, t(i, j)});
    return g;
}

// L = I - T. Row sums are 0, off-diagonal entries <= 0, diagonal >= 0.
class LaplacianMatrix {
  public:
    explicit LaplacianMatrix(Matrix l) : l_(std::move(l)) {
        if (l_.rows() != l_.cols() || l_.rows() < 1)
            throw ValidationError("Laplacian must be square with n >= 1");
        const int n = static_cast<int>(l_.rows());
        for (int i = 0; i < n; ++i) {
            if (!(std::abs(l_.row(i).sum()) <= kRowSumTol))
                throw ValidationError("Laplacian row " + std::to_string(i + 1) +
                                      " does not sum to 0");
            for (int j = 0; j < n; ++j) {
                const double v = l_(i, j);
                if (i == j ? !(v >= -kRowSumTol) : !(v <= kRowSumTol))
                    throw ValidationError("Laplacian sign pattern violated at row " +
                                          std::to_string(i + 1) + ", column " +
                                          std::to_string(j + 1));
            }
        }
    }

    int n() const { return static_cast<int>(l_.rows()); }
    double operator()(int i, int j) const { return l_(i, j); }
    const Matrix& matrix() const { return l_; }

  private:
    Matrix l_;
};

inline LaplacianMatrix laplacian(const TransitionMatrix& t) {
    return LaplacianMatrix(Matrix::Identity(t.n(), t.n()) - t.matrix());
}

namespace detail {

inline TransitionMatrix parse_chain_text(const std::string& source) {
    std::istringstream in(source);
    long long n = 0;
    if (!(in >> n)) throw ParseError("expected state count on line 1");
    if (n < 1) throw ParseError("state count must be >= 1, got " + std::to_string(n));
    if (n > 100000) throw ParseError("state count " + std::to_string(n) + " is implausibly large");
    Matrix t(n, n);
    for (long long i = 0; i < n; ++i)
        for (long long j = 0; j < n; ++j) {
            double v = 0.0;
            if (!(in >> v)) {
                in.clear();
                std::string tok;
                if (in >> tok)
                    throw ParseError("cannot parse row " + std::to_string(i + 1) + ", entry " +
                                     std::to_string(j + 1) + ": '" + tok + "'");
                throw ParseError("unexpected end of input at row " + std::to_string(i + 1) +
                                 ", entry " + std::to_string(j + 1));
            }
            t(i, j) = v;
        }
    std::string rest;
    if (in >> rest) throw ParseError("trailing garbage after matrix: '" + rest + "'");
    return TransitionMatrix(std::move(t));
}

inline TransitionMatrix parse_chain_json(const std::string& source) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(source);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("rows"))
        throw ParseError("JSON chain must be an object with \"n\" and \"rows\"");
    if (!doc["n"].is_number_integer()) throw ParseError("\"n\" must be an integer");
    const long long n = doc["n"].get<long long>();
    if (n < 1) throw ParseError("state count must be >= 1, got " + std::to_string(n));
    const auto& rows = doc["rows"];
    if (!rows.is_array() || static_cast<long long>(rows.size()) != n)
        throw ParseError("\"rows\" must be an array of " + std::to_string(n) + " rows");
    Matrix t(n, n);
    for (long long i = 0; i < n; ++i) {
        const auto& row = rows[i];
        if (!row.is_array() || static_cast<long long>(row.size()) != n)
            throw ParseError("row " + std::to_string(i + 1) + " must have " +
                             std::to_string(n) + " entries");
        for (long long j = 0; j < n; ++j) {
            if (!row[j].is_number())
                throw ParseError("row " + std::to_string(i + 1) + ", entry " +
                                 std::to_string(j + 1) + " is not a number");
            t(i, j) = row[j].get<double>();
        }
    }
    return TransitionMatrix(std::move(t));
}

}  // namespace detail

// Parses either chain-spec format: plain text (line 1 = n, then n rows of n
// probabilities) or a JSON document {"n": int, "rows": [[...], ...]}.
// Trailing garbage is rejected; the result is fully validated.
inline TransitionMatrix parse_chain(const std::string& source) {
    const auto pos = source.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) throw ParseError("empty chain specification");
    if (source[pos] == '{') return detail::parse_chain_json(source);
    return detail::parse_chain_text(source);
}

inline TransitionMatrix parse_chain_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_chain(buf.str());
}

}  // namespace passage

#endif
