#ifndef PASSAGE_TESTS_FIXTURES_HPP
#define PASSAGE_TESTS_FIXTURES_HPP

#include <nlohmann/json.hpp>

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "passage/chain.hpp"

#ifndef PASSAGE_DATA_DIR
#error "PASSAGE_DATA_DIR must be defined by the build"
#endif

namespace passage::testing {

inline std::string data_path(const std::string& name) {
    return std::string(PASSAGE_DATA_DIR) + "/" + name;
}

// The worked 4-state example: the chain and its full set of reference
// matrices, loaded from the shipped fixtures file.
struct PaperFixtures {
    int n = 0;
    Matrix t, l, l_sharp, m, q1, q2, q3, f;
    Vector pi, q, q_tilde;
    std::vector<double> sigmas;
};

namespace detail {

inline Matrix json_matrix(const nlohmann::json& rows) {
    const int r = static_cast<int>(rows.size());
    const int c = static_cast<int>(rows.at(0).size());
    Matrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
    return m;
}

inline Vector json_vector(const nlohmann::json& vals) {
    Vector v(static_cast<int>(vals.size()));
    for (int j = 0; j < v.size(); ++j) v(j) = vals.at(j).get<double>();
    return v;
}

}  // namespace detail

inline const PaperFixtures& paper_fixtures() {
    static const PaperFixtures fx = [] {
        std::ifstream in(data_path("paper_fixtures.json"));
        if (!in) throw std::runtime_error("cannot open paper_fixtures.json");
        const auto doc = nlohmann::json::parse(in);
        PaperFixtures f;
        f.n = doc.at("n").get<int>();
        f.t = detail::json_matrix(doc.at("t"));
        f.l = detail::json_matrix(doc.at("l"));
        f.l_sharp = detail::json_matrix(doc.at("l_sharp"));
        f.m = detail::json_matrix(doc.at("m"));
        f.q1 = detail::json_matrix(doc.at("q1"));
        f.q2 = detail::json_matrix(doc.at("q2"));
        f.q3 = detail::json_matrix(doc.at("q3"));
        f.f = detail::json_matrix(doc.at("f"));
        f.pi = detail::json_vector(doc.at("pi"));
        f.q = detail::json_vector(doc.at("q"));
        f.q_tilde = detail::json_vector(doc.at("q_tilde"));
        f.sigmas = doc.at("sigmas").get<std::vector<double>>();
        return f;
    }();
    return fx;
}

inline TransitionMatrix paper_chain() {
    return TransitionMatrix(paper_fixtures().t);
}

}  // namespace passage::testing

#endif
