#ifndef DYADIC_TESTS_ORACLES_HPP
#define DYADIC_TESTS_ORACLES_HPP

// Independent oracles used only by tests.  They deliberately avoid the tree
// kernels: dense matrices, literal cell loops, Jacobi rotations.

#include <cmath>
#include <vector>

#include "dyadic/operators.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

// Largest eigenvalue of a symmetric PSD matrix by cyclic Jacobi rotations.
inline double jacobi_largest_eigenvalue(Matrix a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, a[i][i]);
    return best;
}

// Largest singular value via Jacobi on B^T B.
inline double largest_singular_value(const Matrix& b) {
    const std::size_t n = b.size();
    Matrix gram(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += b[k][i] * b[k][j];
            gram[i][j] = s;
        }
    return std::sqrt(jacobi_largest_eigenvalue(gram));
}

// Dense cell-basis matrix of a sparse summation operator: out_i = sum_j K_ij f_j.
inline Matrix dense_operator_matrix(const dyadic::OperatorSpec& op) {
    const std::int64_t cells = op.mesh.total_cells();
    Matrix k(static_cast<std::size_t>(cells), std::vector<double>(static_cast<std::size_t>(cells), 0.0));
    for (const dyadic::DyadicCube& q : op.family.cubes) {
        const dyadic::MeshCubeRef ref = locate_cube(op.mesh, q);
        const auto qcells = cube_cells(op.mesh, ref);
        const double coef = (op.kind == dyadic::OperatorSpec::Kind::cz_sparse)
                                ? 1.0
                                : std::pow(std::ldexp(1.0, q.level), op.alpha);
        const double avg_weight = 1.0 / static_cast<double>(qcells.size());
        for (std::int64_t i : qcells)
            for (std::int64_t j : qcells)
                k[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += coef * avg_weight;
    }
    return k;
}

// Operator norm on L^2(Lebesgue) of a sparse summation operator with
// uniform cell measures: singular value of the cell-basis matrix.
inline double l2_norm_dense(const dyadic::OperatorSpec& op) {
    return largest_singular_value(dense_operator_matrix(op));
}

} // namespace oracle

#endif
