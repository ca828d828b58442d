#include "tenfold/random.hpp"

namespace tenfold {

CMatrix random_gaussian(int rows, int cols, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    CMatrix G(rows, cols);
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) G(i, j) = cplx(nd(rng), nd(rng)) / std::sqrt(2.0);
    return G;
}

CMatrix random_unitary(int n, Rng& rng) {
    const CMatrix G = random_gaussian(n, n, rng);
    Eigen::HouseholderQR<CMatrix> qr(G);
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
    const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const cplx d = R(i, i);
        if (std::abs(d) > 0.0) Q.col(i) *= d / std::abs(d);
    }
    return Q;
}

CMatrix random_special_orthogonal(int n, Rng& rng) {
    std::normal_distribution<double> nd(0.0, 1.0);
    RMatrix G(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) G(i, j) = nd(rng);
    Eigen::HouseholderQR<RMatrix> qr(G);
    RMatrix Q = qr.householderQ() * RMatrix::Identity(n, n);
    const RMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        if (R(i, i) < 0.0) Q.col(i) *= -1.0;
    }
    if (Q.determinant() < 0.0) Q.col(0) *= -1.0;
    return Q.cast<cplx>();
}

CMatrix random_hermitian(int n, Rng& rng) {
    const CMatrix G = random_gaussian(n, n, rng);
    return 0.5 * (G + G.adjoint());
}

CMatrix random_sp_algebra(int two_m, Rng& rng, double norm) {
    const CMatrix J = symplectic_J(two_m);
    CMatrix X = cplx(0.0, 1.0) * random_hermitian(two_m, rng);
    X = 0.5 * (X + J * X.conjugate() * J.transpose());
    const double nx = op_norm(X);
    if (nx > 0.0) X *= norm / nx;
    return X;
}

}  // namespace tenfold
