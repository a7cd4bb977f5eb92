#ifndef PASSAGE_FOREST_HPP
#define PASSAGE_FOREST_HPP

#include <cmath>
#include <string>
#include <vector>

#include "passage/chain.hpp"
#include "passage/errors.hpp"

namespace passage {

// Diagonal of the MFPT matrix: mean recurrence time 1/pi_j, or zero when the
// first return to the start state does not count as a passage.
enum class DiagonalConvention { RecurrenceTime, Zero };

// sigma_k (total weight of k-arc in-forests) and Q_k (entry (i,j) = total
// weight of k-arc in-forests with i in the tree converging to j), k = 0..n.
struct ForestAccumulator {
    std::vector<double> sigmas;
    std::vector<Matrix> qs;

    int n() const { return static_cast<int>(sigmas.size()) - 1; }
};

// In-forest weight recurrence:
//   sigma_{k+1} = tr(L Q_k) / (k+1),   Q_{k+1} = -L Q_k + sigma_{k+1} I,
// starting from Q_0 = I. Runs one step past the maximum forest count so that
// Q_n = 0, sigma_n = 0 serve as a built-in termination check.
inline ForestAccumulator forest_recurrence(const LaplacianMatrix& l) {
    const int n = l.n();
    ForestAccumulator acc;
    acc.sigmas.reserve(n + 1);
    acc.qs.reserve(n + 1);
    acc.sigmas.push_back(1.0);
    acc.qs.push_back(Matrix::Identity(n, n));
    for (int k = 0; k < n; ++k) {
        const Matrix lq = l.matrix() * acc.qs.back();
        const double sigma = lq.trace() / (k + 1);
        acc.sigmas.push_back(sigma);
        acc.qs.push_back(-lq + sigma * Matrix::Identity(n, n));
    }
    return acc;
}

// q_j = total weight of spanning trees converging to j; sigma_tot = sum_j q_j.
struct TreeWeights {
    Vector q;
    double sigma_tot = 0.0;
};

// Extracts q from Q_{n-1}. All rows of Q_{n-1} are equal for an irreducible
// chain (each maximum in-forest converging to j holds i in the same tree), so
// q is taken as the column-wise mean; disagreement beyond 1e-6 means the
// input was not ergodic and is reported as an error.
inline TreeWeights tree_weights(const ForestAccumulator& acc) {
    const int n = acc.n();
    const Matrix& qn1 = acc.qs[n - 1];
    TreeWeights tw;
    tw.q = qn1.colwise().mean().transpose();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (std::abs(qn1(i, j) - tw.q(j)) > 1e-6)
                throw NumericError("rows of Q_{n-1} disagree at row " + std::to_string(i + 1) +
                                   ", column " + std::to_string(j + 1) +
                                   ": forest dimension != 1 (non-ergodic input slipped validation)");
    tw.sigma_tot = acc.sigmas[n - 1];
    return tw;
}

// Markov chain tree theorem: pi_j = q_j / sigma_{n-1}.
inline Vector stationary_from_trees(const TreeWeights& tw) {
    return tw.q / tw.sigma_tot;
}

// f_ij = total weight of 2-tree in-forests with one tree containing i and the
// other converging to j.
struct TwoTreeWeights {
    Matrix f;
};

// f_ij = Q_{n-2}[j,j] - Q_{n-2}[i,j]; the diagonal is exactly zero.
inline TwoTreeWeights two_tree_weights(const ForestAccumulator& acc) {
    const int n = acc.n();
    if (n < 2)
        throw ValidationError("two-tree weights are undefined for a single-state chain");
    const Matrix& qn2 = acc.qs[n - 2];
    TwoTreeWeights ttw;
    ttw.f = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) ttw.f(i, j) = qn2(j, j) - qn2(i, j);
    return ttw;
}

// Mean first passage times in expected steps.
struct MfptMatrix {
    Matrix m;
    DiagonalConvention convention = DiagonalConvention::RecurrenceTime;
};

// m_ij = f_ij / q_j for i != j; the diagonal is sigma_tot / q_j (the mean
// recurrence time 1/pi_j) or zero, by convention.
inline MfptMatrix mfpt_forest(const TreeWeights& tw, const TwoTreeWeights& ttw,
                              DiagonalConvention convention = DiagonalConvention::RecurrenceTime) {
    const int n = static_cast<int>(tw.q.size());
    MfptMatrix out;
    out.convention = convention;
    out.m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j) {
        if (!(tw.q(j) > 0.0))
            throw NumericError("tree weight q_" + std::to_string(j + 1) +
                               " is not positive: inconsistent input");
        for (int i = 0; i < n; ++i)
            if (i != j) out.m(i, j) = ttw.f(i, j) / tw.q(j);
        if (convention == DiagonalConvention::RecurrenceTime)
            out.m(j, j) = tw.sigma_tot / tw.q(j);
    }
    return out;
}

}  // namespace passage

#endif
