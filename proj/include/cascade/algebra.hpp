#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cascade {

using complexd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec16 = Eigen::Vector<complexd, 16>;
using Mat16 = Eigen::Matrix<complexd, 16, 16>;

// Joint basis ordering: |g_s g_t>, |g_s e_t>, |e_s g_t>, |e_s e_t>,
// i.e. the source index varies slowest, matching kron(source, target).

template <int RA, int CA, int RB, int CB>
Eigen::Matrix<complexd, RA * RB, CA * CB>
kron(const Eigen::Matrix<complexd, RA, CA>& a,
     const Eigen::Matrix<complexd, RB, CB>& b)
{
    Eigen::Matrix<complexd, RA * RB, CA * CB> out;
    for (int i = 0; i < RA; ++i)
        for (int j = 0; j < CA; ++j)
            out.template block<RB, CB>(i * RB, j * CB) = a(i, j) * b;
    return out;
}

// |g><e| on a single 2LS, with |g> = e0, |e> = e1.
Mat2 lowering2();

// Lowering operator of the source 2LS on the joint space (lowering x I).
Mat4 sigma_source();

// Lowering operator of the target 2LS on the joint space (I x lowering).
Mat4 xi_target();

// Column-stacking vectorization: vec(X) stacks the columns of X top to
// bottom, so that vec(A X B) = (B^T kron A) vec(X).
Vec16 vectorize(const Mat4& m);
Mat4 devectorize(const Vec16& v);

Mat16 left_mult(const Mat4& a);              // vec(A X)   = (I kron A) vec(X)
Mat16 right_mult(const Mat4& b);             // vec(X B)   = (B^T kron I) vec(X)
Mat16 sandwich(const Mat4& a, const Mat4& b);// vec(A X B) = (B^T kron A) vec(X)

// Superoperator of i [rho, H].
Mat16 hamiltonian_superop(const Mat4& h);

// Lindblad dissipator D[J] rho = J rho J' - (J'J rho + rho J'J)/2.
Mat16 dissipator(const Mat4& j);

} // namespace cascade
