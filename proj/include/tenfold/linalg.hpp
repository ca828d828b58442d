#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "tenfold/errors.hpp"

namespace tenfold {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

struct Tolerance {
    double atol = 1e-10;
    double gap_min = 1e-6;
};

enum class SetTag {
    unitary,
    orthogonal,
    hermitian,
    skew_hermitian,
    symmetric,
    antisymmetric,
    symplectic,
    compact_symplectic,
    special_orthogonal,
    projection
};

/// J_{2M} = ((0, I_M), (-I_M, 0)).
CMatrix symplectic_J(int two_m);

double max_abs(const CMatrix& A);
double op_norm(const CMatrix& A);
bool is_real(const CMatrix& A, double atol);

/// Entrywise structure test. `rank` is only used for SetTag::projection.
bool is_in_set(const CMatrix& A, SetTag tag, const Tolerance& tol = {}, int rank = -1);

/// Residual of the defining relations of `tag` (max entrywise).
double set_residual(const CMatrix& A, SetTag tag, int rank = -1);

struct EigResult {
    RVector values;
    CMatrix vectors;
};

/// Ascending eigenvalues of a hermitian matrix.
EigResult hermitian_eig(const CMatrix& H, const Tolerance& tol = {});

/// Closest unitary A (A^*A)^{-1/2}.
CMatrix polar_unitary(const CMatrix& A, const Tolerance& tol = {});

/// Unitary eigendecomposition of a normal matrix via the complex Schur form.
struct UnitaryEig {
    CVector values;
    CMatrix vectors;
};
UnitaryEig unitary_eig(const CMatrix& U);

/// exp of a skew-hermitian matrix, computed spectrally so the result is unitary.
CMatrix expm_skew(const CMatrix& X);
CMatrix expm(const CMatrix& X);

/// Principal log with branch cut along e^{i cut}; returns skew-hermitian L with exp(L) = U.
CMatrix principal_log_unitary(const CMatrix& U, double branch_cut_angle = kPi,
                              const Tolerance& tol = {});

/// Angle in the middle of the widest gap between eigenvalue phases of U.
double widest_gap_cut(const CMatrix& U);

/// Principal log, retried with the cut placed in the widest spectral gap.
CMatrix log_unitary(const CMatrix& U, const Tolerance& tol = {});

/// Real antisymmetric logarithm of a special orthogonal matrix.
RMatrix real_skew_log_so(const CMatrix& R, const Tolerance& tol = {});

struct SymplecticLog {
    CMatrix X;
    double residual = 0.0;
    bool needs_subdivision = false;
};

/// Logarithm of U in Sp(M) = U(2M) ∩ Sp(2M; C), landing in its Lie algebra.
SymplecticLog symplectic_log(const CMatrix& U, const Tolerance& tol = {});

enum class PfaffianMethod { automatic, combinatorial, elimination };

cplx pfaffian(const CMatrix& A, PfaffianMethod method = PfaffianMethod::automatic,
              const Tolerance& tol = {});

/// Orthonormalize columns (modified Gram-Schmidt, two passes).
CMatrix orthonormalize(const CMatrix& A);

/// Projection onto the span of the eigenvectors of X with eigenvalue > 0.
/// Throws FillFailed if the smallest |eigenvalue| is below gap_min or the rank differs.
CMatrix retract_projection(const CMatrix& X, int rank, double gap_min, double* gap_out = nullptr);

}  // namespace tenfold
