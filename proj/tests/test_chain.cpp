#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <vector>

#include "passage/chain.hpp"
#include "passage/simulate.hpp"
#include "support/fixtures.hpp"

using namespace passage;
using passage::testing::paper_fixtures;

namespace {

// Reachability oracle: boolean transitive closure (Floyd-Warshall).
std::vector<std::vector<bool>> closure(const Matrix& t) {
    const int n = static_cast<int>(t.rows());
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) reach[i][j] = (i == j) || (i != j && t(i, j) != 0.0);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (reach[i][k] && reach[k][j]) reach[i][j] = true;
    return reach;
}

bool strongly_connected_oracle(const Matrix& t) {
    const auto reach = closure(t);
    for (const auto& row : reach)
        for (bool r : row)
            if (!r) return false;
    return true;
}

Matrix mat2(double a, double b, double c, double d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

}  // namespace

TEST_CASE("text parsing accepts the worked example", "[chain][parse]") {
    const auto t = parse_chain(
        "4\n"
        "0 1 0 0\n"
        "0 0.8 0.2 0\n"
        "0.4 0 0.2 0.4\n"
        "0 0 0.25 0.75\n");
    REQUIRE(t.n() == 4);
    REQUIRE(t.matrix() == paper_fixtures().t);
}

TEST_CASE("the shipped chain file parses and validates", "[chain][parse]") {
    const auto t = parse_chain_file(passage::testing::data_path("paper.chain"));
    REQUIRE(t.n() == 4);
    REQUIRE(t.matrix() == paper_fixtures().t);
}

TEST_CASE("single-state chain is accepted", "[chain][parse]") {
    const auto t = parse_chain("1\n1\n");
    REQUIRE(t.n() == 1);
    REQUIRE(t(0, 0) == 1.0);
}

TEST_CASE("reducible chain is rejected with a witness", "[chain][parse]") {
    REQUIRE_THROWS_MATCHES(parse_chain("2\n0.5 0.5\n0 1\n"), ValidationError,
                           Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring(
                               "state 2 cannot reach state 1")));
}

TEST_CASE("parse errors name the offending location", "[chain][parse]") {
    SECTION("bad token") {
        REQUIRE_THROWS_MATCHES(parse_chain("2\n0 1\nx 1\n"), ParseError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("row 2, entry 1")));
    }
    SECTION("truncated input") {
        REQUIRE_THROWS_MATCHES(parse_chain("2\n0 1\n1\n"), ParseError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("row 2, entry 2")));
    }
    SECTION("trailing garbage") {
        REQUIRE_THROWS_AS(parse_chain("2\n0 1\n1 0\nextra\n"), ParseError);
    }
    SECTION("empty input") { REQUIRE_THROWS_AS(parse_chain("  \n"), ParseError); }
    SECTION("zero states") { REQUIRE_THROWS_AS(parse_chain("0\n"), ParseError); }
}

TEST_CASE("validation errors name the offending row or entry", "[chain][validate]") {
    SECTION("negative entry") {
        REQUIRE_THROWS_MATCHES(parse_chain("2\n0 1\n1.5 -0.5\n"), ValidationError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("row 2, column 2")));
    }
    SECTION("bad row sum") {
        REQUIRE_THROWS_MATCHES(parse_chain("2\n0.5 0.8\n1 0\n"), ValidationError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("row 1")));
    }
}

TEST_CASE("JSON parsing", "[chain][parse]") {
    SECTION("accepts a well-formed document") {
        const auto t = parse_chain(R"({"n": 2, "rows": [[0, 1], [0.5, 0.5]]})");
        REQUIRE(t.n() == 2);
        REQUIRE(t(1, 0) == 0.5);
    }
    SECTION("rejects trailing garbage") {
        REQUIRE_THROWS_AS(parse_chain(R"({"n": 2, "rows": [[0,1],[0.5,0.5]]} tail)"),
                          ParseError);
    }
    SECTION("rejects shape mismatch") {
        REQUIRE_THROWS_MATCHES(parse_chain(R"({"n": 2, "rows": [[0, 1]]})"), ParseError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("rows")));
        REQUIRE_THROWS_MATCHES(parse_chain(R"({"n": 2, "rows": [[0, 1], [0.5]]})"), ParseError,
                               Catch::Matchers::MessageMatches(
                                   Catch::Matchers::ContainsSubstring("row 2")));
    }
    SECTION("rejects non-numeric entries") {
        REQUIRE_THROWS_AS(parse_chain(R"({"n": 1, "rows": [["x"]]})"), ParseError);
    }
}

TEST_CASE("check_irreducible on the named cases", "[chain][irreducible]") {
    REQUIRE(check_irreducible(paper_fixtures().t));
    REQUIRE(check_irreducible(mat2(0, 1, 1, 0)));
    REQUIRE_FALSE(check_irreducible(mat2(1, 0, 0.5, 0.5)));
}

TEST_CASE("check_irreducible agrees with transitive closure, n <= 5",
          "[chain][irreducible][property]") {
    SECTION("exhaustive over all arc patterns, n <= 3") {
        for (int n = 1; n <= 3; ++n) {
            const int off_diag = n * n - n;
            for (unsigned mask = 0; mask < (1u << off_diag); ++mask) {
                Matrix t = Matrix::Zero(n, n);
                int bit = 0;
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (i != j) t(i, j) = (mask >> bit++ & 1u) ? 0.5 : 0.0;
                REQUIRE(check_irreducible(t) == strongly_connected_oracle(t));
            }
        }
    }
    SECTION("random patterns, n = 4, 5") {
        std::mt19937_64 rng(20240811);
        for (int trial = 0; trial < 500; ++trial) {
            const int n = 4 + static_cast<int>(rng() % 2);
            Matrix t = Matrix::Zero(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) t(i, j) = (rng() % 3 == 0) ? 0.5 : 0.0;
            REQUIRE(check_irreducible(t) == strongly_connected_oracle(t));
        }
    }
}

TEST_CASE("digraph of the worked example has exactly the five expected arcs",
          "[chain][digraph]") {
    const auto g = digraph_of(passage::testing::paper_chain());
    const std::vector<Arc> expected = {
        {0, 1, 1.0}, {1, 2, 0.2}, {2, 0, 0.4}, {2, 3, 0.4}, {3, 2, 0.25}};
    REQUIRE(g.n == 4);
    REQUIRE(g.arcs == expected);
}

TEST_CASE("digraph construction drops loops and zero entries", "[chain][digraph]") {
    SECTION("2-cycle") {
        const auto g = digraph_of(TransitionMatrix(mat2(0, 1, 1, 0)));
        REQUIRE(g.arcs == std::vector<Arc>{{0, 1, 1.0}, {1, 0, 1.0}});
    }
    SECTION("loops excluded") {
        const auto g = digraph_of(TransitionMatrix(mat2(0.5, 0.5, 0.5, 0.5)));
        REQUIRE(g.arcs == std::vector<Arc>{{0, 1, 0.5}, {1, 0, 0.5}});
    }
}

TEST_CASE("arc weights reconstruct the off-diagonal of T exactly", "[chain][digraph][property]") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 5);
        Matrix t(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) t(i, j) = passage::detail::uniform01(rng) + 1e-3;
            t.row(i) /= t.row(i).sum();
        }
        const TransitionMatrix tm(t);
        const auto g = digraph_of(tm);
        Matrix rebuilt = Matrix::Zero(n, n);
        for (const Arc& a : g.arcs) rebuilt(a.tail, a.head) = a.weight;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) REQUIRE(rebuilt(i, j) == t(i, j));
    }
}

TEST_CASE("laplacian matches the reference L and sums to zero", "[chain][laplacian]") {
    const auto l = laplacian(passage::testing::paper_chain());
    REQUIRE((l.matrix() - paper_fixtures().l).cwiseAbs().maxCoeff() < 1e-12);

    SECTION("2-cycle") {
        const auto l2 = laplacian(TransitionMatrix(mat2(0, 1, 1, 0)));
        REQUIRE(l2.matrix() == mat2(1, -1, -1, 1));
    }
    SECTION("single state") {
        Matrix one(1, 1);
        one << 1.0;
        REQUIRE(laplacian(TransitionMatrix(one)).matrix()(0, 0) == 0.0);
    }
}

TEST_CASE("laplacian row sums vanish for random chains", "[chain][laplacian][property]") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng() % 8);
        Matrix t(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) t(i, j) = passage::detail::uniform01(rng) + 1e-3;
            t.row(i) /= t.row(i).sum();
        }
        const auto l = laplacian(TransitionMatrix(t));
        REQUIRE(l.matrix().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12);
    }
}
