#include "cascade/algebra.hpp"

namespace cascade {

Mat2 lowering2()
{
    Mat2 s = Mat2::Zero();
    s(0, 1) = 1.0;
    return s;
}

Mat4 sigma_source()
{
    return kron<2, 2, 2, 2>(lowering2(), Mat2::Identity());
}

Mat4 xi_target()
{
    return kron<2, 2, 2, 2>(Mat2::Identity(), lowering2());
}

Vec16 vectorize(const Mat4& m)
{
    // Eigen fixed matrices are column-major, so a flat copy is exactly
    // the column-stacking convention.
    return Eigen::Map<const Vec16>(m.data());
}

Mat4 devectorize(const Vec16& v)
{
    return Eigen::Map<const Mat4>(v.data());
}

Mat16 left_mult(const Mat4& a)
{
    return kron<4, 4, 4, 4>(Mat4::Identity(), a);
}

Mat16 right_mult(const Mat4& b)
{
    return kron<4, 4, 4, 4>(b.transpose(), Mat4::Identity());
}

Mat16 sandwich(const Mat4& a, const Mat4& b)
{
    return kron<4, 4, 4, 4>(b.transpose(), a);
}

Mat16 hamiltonian_superop(const Mat4& h)
{
    const complexd i(0.0, 1.0);
    return i * (right_mult(h) - left_mult(h));
}

Mat16 dissipator(const Mat4& j)
{
    const Mat4 jdj = j.adjoint() * j;
    return sandwich(j, j.adjoint()) - 0.5 * left_mult(jdj) - 0.5 * right_mult(jdj);
}

} // namespace cascade
