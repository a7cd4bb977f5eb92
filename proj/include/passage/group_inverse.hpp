#ifndef PASSAGE_GROUP_INVERSE_HPP
#define PASSAGE_GROUP_INVERSE_HPP

#include <Eigen/Dense>

#include <string>

#include "passage/chain.hpp"
#include "passage/errors.hpp"
#include "passage/forest.hpp"

namespace passage {

// Solves pi T = pi, ||pi||_1 = 1 by a direct linear solve: one equation of
// L^T x = 0 is replaced with the normalization sum(x) = 1. Independent of the
// forest route by construction.
inline Vector stationary_direct(const TransitionMatrix& t) {
    const int n = t.n();
    Matrix a = (Matrix::Identity(n, n) - t.matrix()).transpose();
    a.row(0).setOnes();
    Vector b = Vector::Zero(n);
    b(0) = 1.0;
    Eigen::PartialPivLU<Matrix> lu(a);
    if (!(lu.rcond() > 1e-14))
        throw NumericError("stationary solve is singular beyond the expected rank "
                           "deficiency: input is (near-)reducible");
    Vector pi = lu.solve(b);
    for (int j = 0; j < n; ++j)
        if (!(pi(j) > 0.0))
            throw NumericError("stationary probability of state " + std::to_string(j + 1) +
                               " is not positive");
    return pi;
}

// Group inverse L# of the Laplacian: the unique matrix with
// L L# L = L, L# L L# = L#, L L# = L# L.
struct GroupInverse {
    Matrix sharp;
};

// L# = (L + Jt)^{-1} - Jt with Jt = (1,...,1)^T pi. The solve carries a
// condition estimate; rcond below 1e-14 signals a near-reducible chain.
inline GroupInverse group_inverse(const LaplacianMatrix& l, const Vector& pi) {
    const int n = l.n();
    const Matrix jt = Matrix::Ones(n, 1) * pi.transpose();
    Eigen::PartialPivLU<Matrix> lu(l.matrix() + jt);
    if (!(lu.rcond() > 1e-14))
        throw NumericError("L + Jt is numerically singular (condition estimate beyond 1e14): "
                           "near-reducible chain");
    return GroupInverse{lu.inverse() - jt};
}

// Entrywise mean-first-passage formula from the group inverse:
//   m_jj = 1/pi_j,   m_ij = (L#_jj - L#_ij) / pi_j.
inline MfptMatrix mfpt_meyer(const GroupInverse& sharp, const Vector& pi) {
    const int n = static_cast<int>(pi.size());
    MfptMatrix out;
    out.convention = DiagonalConvention::RecurrenceTime;
    out.m = Matrix::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            out.m(i, j) = (i == j) ? 1.0 / pi(j)
                                   : (sharp.sharp(j, j) - sharp.sharp(i, j)) / pi(j);
    return out;
}

// Matrix form of the same quantity, M = (I - L# + J L#_dg) Pi^{-1}.
// Kept as a second algebraic route for consistency tests; mfpt_meyer is the
// canonical output.
inline Matrix mfpt_meyer_matrix_form(const GroupInverse& sharp, const Vector& pi) {
    const int n = static_cast<int>(pi.size());
    const Matrix sharp_dg = sharp.sharp.diagonal().asDiagonal();
    const Matrix j = Matrix::Ones(n, n);
    return (Matrix::Identity(n, n) - sharp.sharp + j * sharp_dg) *
           pi.cwiseInverse().asDiagonal();
}

}  // namespace passage

#endif
