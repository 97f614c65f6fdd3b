#pragma once

#include "qsu22/smatrix.hpp"

// Charge-coefficient matrices shared between the block evaluators, the
// assembly and the special-case reductions.

namespace qsu22 {

namespace sII {

std::array<Cplx, 4> Q_row(const Kinematics& K1, const Kinematics& K2,
                          int k1, int k2, bool affine, bool op);
std::array<Cplx, 4> Z_row_op(const Kinematics& K1, const Kinematics& K2,
                             int n, int K, bool affine);
std::array<Cplx, 4> Z_row(const Kinematics& K1, const Kinematics& K2,
                          int k1, int k2, int n, Cplx z12, bool affine);
Matrix4 A_matrix(const Kinematics& K1, const Kinematics& K2, int n, int K);
Matrix4 B_matrix(const Kinematics& K1, const Kinematics& K2,
                 int k1, int k2, int n, Cplx z12);
std::pair<Matrix4, Matrix4> Bpm_matrices(const Kinematics& K1, const Kinematics& K2,
                                         int k1, int k2, int n, Cplx z12);
Matrix4 factorized_inverse(const Kinematics& K1, const Kinematics& K2,
                           int n, int K, Cplx z12);
Matrix4 rhs_matrix(const Kinematics& K1, const Kinematics& K2,
                   int k1, int k2, int n, Cplx z12, Cplx D);

}  // namespace sII

namespace sIII {

// Charge matrices between subspace III (columns) and subspace II (rows).
// The non-op versions are evaluated at in-labels (k1, k2); the op versions
// at out-labels (n, K - n) passed through (k1 = n, k2 = K - n).
Eigen::Matrix<Cplx, 4, 6> G_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int Ksec, bool op, bool affine);
Eigen::Matrix<Cplx, 4, 6> H_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int Ksec, bool op, bool affine);
Eigen::Matrix<Cplx, 4, 6> G_bar(const Kinematics& K1, const Kinematics& K2,
                                int k1, int k2, int n, int Ksec, bool op);
Eigen::Matrix<Cplx, 4, 6> H_bar(const Kinematics& K1, const Kinematics& K2,
                                int k1, int k2, int Ksec, bool op);
Matrix6 A_matrix(const Kinematics& K1, const Kinematics& K2, int n, int Ksec);
Matrix6 A_inverse(const Kinematics& K1, const Kinematics& K2, int n, int Ksec);
Eigen::Matrix<Cplx, 8, 6> B_matrix(const Kinematics& K1, const Kinematics& K2,
                                   int k1, int k2, int n, int Ksec);
Matrix4 Y_shifted(const YTable& Y, int k1, int k2, int n);
Eigen::Matrix<Cplx, 6, 8> Y_check(const YTable& Y, int k1, int k2, int n);

}  // namespace sIII

}  // namespace qsu22
