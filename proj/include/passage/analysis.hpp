#ifndef PASSAGE_ANALYSIS_HPP
#define PASSAGE_ANALYSIS_HPP

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "passage/chain.hpp"
#include "passage/forest.hpp"
#include "passage/group_inverse.hpp"
#include "passage/simulate.hpp"

namespace passage {

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

inline double max_abs_diff(const Vector& a, const Vector& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// Results of both analytic routes over one chain. pi comes from the direct
// linear solve; the normalized tree weights q/sigma_tot are its forest-route
// counterpart.
struct AnalysisBundle {
    int n = 0;
    Vector pi;
    TreeWeights tree;
    TwoTreeWeights two_tree;
    MfptMatrix m_forest;
    MfptMatrix m_meyer;
    std::vector<double> sigmas;
    double max_route_discrepancy = 0.0;

    AnalysisBundle(int n_, Vector pi_, TreeWeights tree_, TwoTreeWeights two_tree_,
                   MfptMatrix m_forest_, MfptMatrix m_meyer_, std::vector<double> sigmas_)
        : n(n_),
          pi(std::move(pi_)),
          tree(std::move(tree_)),
          two_tree(std::move(two_tree_)),
          m_forest(std::move(m_forest_)),
          m_meyer(std::move(m_meyer_)),
          sigmas(std::move(sigmas_)),
          max_route_discrepancy(max_abs_diff(m_forest.m, m_meyer.m)) {}
};

// Runs the forest route and the group-inverse route and packages both.
// The requested diagonal convention is applied to both MFPT matrices.
inline AnalysisBundle analyze(const TransitionMatrix& t,
                              DiagonalConvention convention = DiagonalConvention::RecurrenceTime) {
    const LaplacianMatrix l = laplacian(t);
    ForestAccumulator acc = forest_recurrence(l);
    TreeWeights tw = tree_weights(acc);
    TwoTreeWeights ttw = two_tree_weights(acc);
    MfptMatrix m_forest = mfpt_forest(tw, ttw, convention);

    Vector pi = stationary_direct(t);
    GroupInverse sharp = group_inverse(l, pi);
    MfptMatrix m_meyer = mfpt_meyer(sharp, pi);
    if (convention == DiagonalConvention::Zero) {
        m_meyer.m.diagonal().setZero();
        m_meyer.convention = DiagonalConvention::Zero;
    }

    return AnalysisBundle(t.n(), std::move(pi), std::move(tw), std::move(ttw),
                          std::move(m_forest), std::move(m_meyer), std::move(acc.sigmas));
}

namespace detail {

inline std::string fmt(double v, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision) << v;
    return os.str();
}

inline void print_vector(std::ostream& out, const Vector& v, int precision) {
    for (int j = 0; j < v.size(); ++j) out << (j ? " " : "") << fmt(v(j), precision);
    out << "\n";
}

inline void print_matrix(std::ostream& out, const Matrix& m, int precision) {
    for (int i = 0; i < m.rows(); ++i) {
        out << " ";
        for (int j = 0; j < m.cols(); ++j) out << " " << fmt(m(i, j), precision);
        out << "\n";
    }
}

inline std::vector<double> to_std(const Vector& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
}

inline std::vector<std::vector<double>> to_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows());
    for (int i = 0; i < m.rows(); ++i) {
        rows[i].resize(m.cols());
        for (int j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    }
    return rows;
}

}  // namespace detail

// Machine surface: nlohmann serializes doubles at round-trip precision, so
// the bundle is recoverable losslessly.
inline nlohmann::ordered_json bundle_to_json(const AnalysisBundle& b) {
    nlohmann::ordered_json doc;
    doc["n"] = b.n;
    doc["pi"] = detail::to_std(b.pi);
    doc["q"] = detail::to_std(b.tree.q);
    doc["f"] = detail::to_rows(b.two_tree.f);
    doc["m_forest"] = detail::to_rows(b.m_forest.m);
    doc["m_meyer"] = detail::to_rows(b.m_meyer.m);
    doc["sigmas"] = b.sigmas;
    doc["max_route_discrepancy"] = b.max_route_discrepancy;
    return doc;
}

inline void render_bundle(std::ostream& out, const AnalysisBundle& b, int precision) {
    out << "n: " << b.n << "\n";
    out << "sigma (in-forest weights by arc count):";
    for (double s : b.sigmas) out << " " << detail::fmt(s, precision);
    out << "\n";
    out << "q (spanning tree weights): ";
    detail::print_vector(out, b.tree.q, precision);
    out << "q~ (normalized):           ";
    detail::print_vector(out, stationary_from_trees(b.tree), precision);
    out << "pi (direct solve):         ";
    detail::print_vector(out, b.pi, precision);
    out << "f (2-tree forest weights):\n";
    detail::print_matrix(out, b.two_tree.f, precision);
    const char* diag = b.m_forest.convention == DiagonalConvention::RecurrenceTime
                           ? "recurrence-time"
                           : "zero";
    out << "M, forest route (" << diag << " diagonal):\n";
    detail::print_matrix(out, b.m_forest.m, precision);
    out << "M, group-inverse route:\n";
    detail::print_matrix(out, b.m_meyer.m, precision);
    out << "max route discrepancy: " << detail::fmt(b.max_route_discrepancy, 3) << "\n";
}

// Simulation table plus z-scores against an analytic reference M.
inline void render_simulation(std::ostream& out, const SimulationReport& rep,
                              const Matrix& reference, int precision) {
    out << "trials per pair: " << rep.trials << ", seed: " << rep.seed << "\n";
    out << "m_hat (sample means):\n";
    detail::print_matrix(out, rep.m_hat, precision);
    out << "standard errors:\n";
    detail::print_matrix(out, rep.stderr_, precision);
    out << "z-scores vs analytic M:\n";
    double zmax = 0.0;
    for (int i = 0; i < rep.m_hat.rows(); ++i) {
        out << " ";
        for (int j = 0; j < rep.m_hat.cols(); ++j) {
            const double diff = rep.m_hat(i, j) - reference(i, j);
            double z = 0.0;
            if (rep.stderr_(i, j) > 0.0)
                z = diff / rep.stderr_(i, j);
            else if (std::abs(diff) > 1e-9 * (1.0 + std::abs(reference(i, j))))
                z = std::numeric_limits<double>::infinity();  // zero variance, wrong value
            zmax = std::max(zmax, std::abs(z));
            out << " " << detail::fmt(z, precision);
        }
        out << "\n";
    }
    out << "max |z|: " << detail::fmt(zmax, precision) << "\n";
}

inline nlohmann::ordered_json simulation_to_json(const SimulationReport& rep,
                                                 const Matrix& reference) {
    nlohmann::ordered_json doc;
    doc["n"] = static_cast<int>(rep.m_hat.rows());
    doc["trials"] = rep.trials;
    doc["seed"] = rep.seed;
    doc["m_hat"] = detail::to_rows(rep.m_hat);
    doc["stderr"] = detail::to_rows(rep.stderr_);
    doc["m_analytic"] = detail::to_rows(reference);
    return doc;
}

}  // namespace passage

#endif
