#pragma once

#include "tenfold/linalg.hpp"

namespace tenfold {

struct TakagiResult {
    CMatrix U;
    RVector lambda;  // descending singular values
    bool symplectic = false;
};

/// A = U diag(lambda) U^T for complex symmetric A.
/// The symplectic branch is implemented for unitary symplectic A (lambda = 1).
TakagiResult takagi(const CMatrix& A, bool symplectic = false, const Tolerance& tol = {});

struct HuaResult {
    CMatrix U;
    RVector D;  // one entry per 2x2 block, descending
};

/// A = U (D ⊗ J_2) U^T for nondegenerate antisymmetric A.
HuaResult hua(const CMatrix& A, const Tolerance& tol = {});

/// A = V^T V for A unitary and symmetric.
CMatrix factor_unitary_symmetric(const CMatrix& A, const Tolerance& tol = {});

/// A = V^T V with V in Sp(M) for A in Sp(M) and symmetric.
CMatrix factor_symplectic_symmetric(const CMatrix& A, const Tolerance& tol = {});

struct SignatureResult {
    RMatrix V;  // special orthogonal
    int j = 0;  // dim Ker(A - I)
};

/// A = V^T D_j V with D_j = diag(1 x j, -1 x (n-j)) for real orthogonal symmetric A.
SignatureResult factor_signature(const CMatrix& A, const Tolerance& tol = {});

/// A = V^T J V for A unitary and antisymmetric.
CMatrix factor_skew_unitary(const CMatrix& A, const Tolerance& tol = {});

enum class SkewForm { J_form, pfaffian_form };

struct SkewOrthogonalResult {
    RMatrix V;
    RMatrix Lambda;  // J_{2m} (J_form) or diag(1,...,1,Pf) ⊗ J_2 (pfaffian_form)
    int pf = 1;
};

/// J_form: A = W^T J W with W in O(2m). pfaffian_form: A = V^T Lambda_A V with V in SO(2m).
SkewOrthogonalResult factor_skew_orthogonal(const CMatrix& A, SkewForm form, const Tolerance& tol = {});

/// ((A, B), (-B, A)) -> A + iB.
CMatrix sp_cap_o_to_u(const CMatrix& U, const Tolerance& tol = {});
CMatrix u_to_sp_cap_o(const CMatrix& V);

/// I_m ⊗ J_2.
RMatrix kron_identity_J2(int m);
/// Permutation E (odd indices, then even indices) with E^T (I_m ⊗ J_2) E = J_{2m}.
RMatrix interleave_permutation(int two_m);

}  // namespace tenfold
