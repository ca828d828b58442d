#include "tenfold/factorizations.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tenfold/symmetry.hpp"

namespace tenfold {

namespace {

double scale_of(const CMatrix& A) { return 1.0 + op_norm(A); }

void require_square_even(const CMatrix& A, const char* what, bool even) {
    if (A.rows() != A.cols() || A.rows() == 0) throw DimensionError(std::string(what) + ": matrix must be square");
    if (even && A.rows() % 2 != 0) throw DimensionError(std::string(what) + ": size must be even");
}

void require(double residual, double bound, const char* what) {
    if (residual > bound) throw StructureError(what, residual);
}

// Half of the principal phase in (-pi, pi].
cplx half_phase(cplx z) {
    double a = std::arg(z);
    if (a <= -kPi) a += 2.0 * kPi;
    return std::exp(cplx(0.0, 0.5 * a));
}

struct Clusters {
    std::vector<std::pair<Eigen::Index, Eigen::Index>> ranges;  // [begin, end)
};

Clusters cluster_descending(const RVector& s, double tol) {
    Clusters c;
    Eigen::Index b = 0;
    for (Eigen::Index i = 1; i <= s.size(); ++i) {
        if (i == s.size() || std::abs(s(i) - s(i - 1)) > tol) {
            c.ranges.emplace_back(b, i);
            b = i;
        }
    }
    return c;
}

// Eigen-decomposition of A^*A with eigenvalues in descending order; real when A is.
void gram_eig_descending(const CMatrix& A, bool real, RVector& sigma, CMatrix& W) {
    const Eigen::Index n = A.rows();
    RVector ev;
    CMatrix V;
    if (real) {
        const RMatrix Ar = A.real();
        Eigen::SelfAdjointEigenSolver<RMatrix> es(Ar.transpose() * Ar);
        ev = es.eigenvalues();
        V = es.eigenvectors().cast<cplx>();
    } else {
        Eigen::SelfAdjointEigenSolver<CMatrix> es(A.adjoint() * A);
        ev = es.eigenvalues();
        V = es.eigenvectors();
    }
    sigma.resize(n);
    W.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        sigma(i) = std::sqrt(std::max(0.0, ev(n - 1 - i)));
        W.col(i) = V.col(n - 1 - i);
    }
}

// Real orthogonal O and phases with A = O diag(e^{i theta}) O^T, for A symmetric unitary.
void symmetric_unitary_spectrum(const CMatrix& A, RMatrix& O, RVector& theta) {
    const Eigen::Index n = A.rows();
    const RMatrix X = 0.5 * (A.real() + A.real().transpose());
    const RMatrix Y = 0.5 * (A.imag() + A.imag().transpose());
    const double c = 0.6180339887498949;
    Eigen::SelfAdjointEigenSolver<RMatrix> es(X + c * Y);
    O = es.eigenvectors();
    const RVector& mu = es.eigenvalues();
    Eigen::Index b = 0;
    for (Eigen::Index i = 1; i <= n; ++i) {
        if (i == n || mu(i) - mu(i - 1) > 1e-8) {
            const Eigen::Index len = i - b;
            if (len > 1) {
                const RMatrix Z = O.middleCols(b, len);
                Eigen::SelfAdjointEigenSolver<RMatrix> ec(Z.transpose() * Y * Z);
                O.middleCols(b, len) = Z * ec.eigenvectors();
            }
            b = i;
        }
    }
    theta.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double x = O.col(i).dot(X * O.col(i));
        const double y = O.col(i).dot(Y * O.col(i));
        theta(i) = std::atan2(y, x);
    }
}

}  // namespace

RMatrix kron_identity_J2(int m) {
    RMatrix M = RMatrix::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
        M(2 * i, 2 * i + 1) = 1.0;
        M(2 * i + 1, 2 * i) = -1.0;
    }
    return M;
}

RMatrix interleave_permutation(int two_m) {
    if (two_m <= 0 || two_m % 2 != 0) throw DimensionError("interleave_permutation: size must be even");
    const int m = two_m / 2;
    RMatrix E = RMatrix::Zero(two_m, two_m);
    for (int j = 0; j < m; ++j) {
        E(2 * j, j) = 1.0;
        E(2 * j + 1, m + j) = 1.0;
    }
    return E;
}

CMatrix factor_unitary_symmetric(const CMatrix& A, const Tolerance& tol) {
    require_square_even(A, "factor_unitary_symmetric", false);
    require(std::max(set_residual(A, SetTag::unitary), set_residual(A, SetTag::symmetric)), tol.atol,
            "factor_unitary_symmetric: input not unitary symmetric");
    const CMatrix U = normal_basis_T_even(A, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
    const CMatrix V = U.transpose();
    require(max_abs(V.transpose() * V - A), 1e-9, "factor_unitary_symmetric: reconstruction failed");
    return V;
}

TakagiResult takagi(const CMatrix& A, bool symplectic, const Tolerance& tol) {
    require_square_even(A, "takagi", symplectic);
    const double scale = scale_of(A);
    require(set_residual(A, SetTag::symmetric), tol.atol * scale, "takagi: input not symmetric");
    TakagiResult out;
    out.symplectic = symplectic;
    const Eigen::Index n = A.rows();
    if (symplectic) {
        require(set_residual(A, SetTag::symplectic), tol.atol * scale, "takagi: input not symplectic");
        const double ures = set_residual(A, SetTag::unitary);
        if (ures > 1e-9) {
            throw StructureError("takagi: symplectic branch supports unitary input only", ures);
        }
        const CMatrix V = factor_symplectic_symmetric(A, tol);
        out.U = V.transpose();
        out.lambda = RVector::Ones(n);
        return out;
    }
    RVector sigma;
    CMatrix W;
    gram_eig_descending(A, false, sigma, W);
    const CMatrix L = W.transpose() * A * W;
    const Clusters cl = cluster_descending(sigma, 1e-8 * scale);
    CMatrix V = CMatrix::Zero(n, n);
    RVector lam(n);
    for (const auto& [b, e] : cl.ranges) {
        const Eigen::Index len = e - b;
        const double s = sigma.segment(b, len).mean();
        lam.segment(b, len).setConstant(s);
        if (s <= 1e-14 * scale) {
            V.block(b, b, len, len).setIdentity();
            continue;
        }
        if (len == 1) {
            V(b, b) = half_phase(L(b, b));
            continue;
        }
        CMatrix Uc = L.block(b, b, len, len) / s;
        Uc = polar_unitary(0.5 * (Uc + Uc.transpose()), Tolerance{tol.atol, 1e-3});
        Uc = 0.5 * (Uc + Uc.transpose());
        V.block(b, b, len, len) = factor_unitary_symmetric(Uc, Tolerance{1e-8, tol.gap_min});
    }
    out.U = W.conjugate() * V.transpose();
    out.lambda = lam;
    const double rec = max_abs(out.U * lam.cast<cplx>().asDiagonal() * out.U.transpose() - A);
    require(rec, 1e-9 * scale, "takagi: reconstruction failed");
    return out;
}

HuaResult hua(const CMatrix& A, const Tolerance& tol) {
    require_square_even(A, "hua", true);
    const double scale = scale_of(A);
    require(set_residual(A, SetTag::antisymmetric), tol.atol * scale, "hua: input not antisymmetric");
    const bool real = A.imag().cwiseAbs().maxCoeff() <= tol.atol;
    const Eigen::Index n = A.rows();
    RVector sigma;
    CMatrix W;
    gram_eig_descending(A, real, sigma, W);
    if (sigma(n - 1) < tol.gap_min) throw StructureError("hua: input is degenerate", sigma(n - 1));
    const CMatrix L = W.transpose() * A * W;
    const Clusters cl = cluster_descending(sigma, 1e-8 * scale);
    CMatrix blocks = CMatrix::Zero(n, n);
    RVector D(n / 2);
    for (const auto& [b, e] : cl.ranges) {
        const Eigen::Index len = e - b;
        if (len % 2 != 0) throw StructureError("hua: singular value with odd multiplicity", double(len));
        const double s = sigma.segment(b, len).mean();
        D.segment(b / 2, len / 2).setConstant(s);
        CMatrix Bc = L.block(b, b, len, len) / s;
        Bc = 0.5 * (Bc - Bc.transpose());
        Bc = polar_unitary(Bc, Tolerance{tol.atol, 1e-3});
        Bc = 0.5 * (Bc - Bc.transpose());
        if (real) Bc = CMatrix(Bc.real().cast<cplx>());
        const CMatrix Vc = factor_skew_unitary(Bc, Tolerance{1e-8, tol.gap_min});
        const CMatrix E = interleave_permutation(static_cast<int>(len)).cast<cplx>();
        blocks.block(b, b, len, len) = (E * Vc).transpose();
    }
    HuaResult out;
    out.U = W.conjugate() * blocks;
    if (real) out.U = CMatrix(out.U.real().cast<cplx>());
    out.D = D;
    CMatrix M = CMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n / 2; ++i) {
        M(2 * i, 2 * i + 1) = D(i);
        M(2 * i + 1, 2 * i) = -D(i);
    }
    require(max_abs(out.U * M * out.U.transpose() - A), 1e-9 * scale, "hua: reconstruction failed");
    return out;
}

CMatrix factor_skew_unitary(const CMatrix& A, const Tolerance& tol) {
    require_square_even(A, "factor_skew_unitary", true);
    require(std::max(set_residual(A, SetTag::unitary), set_residual(A, SetTag::antisymmetric)), tol.atol,
            "factor_skew_unitary: input not unitary antisymmetric");
    const CMatrix U = normal_basis_T_odd(A, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
    const CMatrix V = U.transpose();
    const CMatrix J = symplectic_J(static_cast<int>(A.rows()));
    require(max_abs(V.transpose() * J * V - A), 1e-9, "factor_skew_unitary: reconstruction failed");
    return V;
}

SkewOrthogonalResult factor_skew_orthogonal(const CMatrix& A, SkewForm form, const Tolerance& tol) {
    require_square_even(A, "factor_skew_orthogonal", true);
    const double res = std::max({set_residual(A, SetTag::orthogonal), set_residual(A, SetTag::antisymmetric)});
    require(res, tol.atol, "factor_skew_orthogonal: input not real orthogonal antisymmetric");
    const int two_m = static_cast<int>(A.rows());
    const int m = two_m / 2;
    const CMatrix Ar = A.real().cast<cplx>();
    const CMatrix U = normal_basis_T_odd(Ar, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
    const RMatrix Wm = U.real().transpose();
    SkewOrthogonalResult out;
    const cplx pf = pfaffian(Ar, PfaffianMethod::automatic, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
    if (std::abs(std::abs(pf) - 1.0) > 1e-8) throw StructureError("factor_skew_orthogonal: |Pf(A)| != 1", std::abs(pf));
    out.pf = pf.real() > 0.0 ? 1 : -1;
    if (form == SkewForm::J_form) {
        out.V = Wm;
        out.Lambda = symplectic_J(two_m).real();
    } else {
        RMatrix V = interleave_permutation(two_m) * Wm;
        RMatrix Lambda = kron_identity_J2(m);
        if (V.determinant() < 0.0) {
            V.row(two_m - 1) *= -1.0;
            Lambda(two_m - 2, two_m - 1) = -1.0;
            Lambda(two_m - 1, two_m - 2) = 1.0;
        }
        const int lam_pf = Lambda(two_m - 2, two_m - 1) > 0.0 ? 1 : -1;
        if (lam_pf != out.pf) throw StructureError("factor_skew_orthogonal: Pfaffian sign mismatch", double(lam_pf));
        out.V = V;
        out.Lambda = Lambda;
    }
    const double rec = (out.V.transpose() * out.Lambda * out.V - A.real()).cwiseAbs().maxCoeff();
    require(rec, 1e-9, "factor_skew_orthogonal: reconstruction failed");
    return out;
}

SignatureResult factor_signature(const CMatrix& A, const Tolerance& tol) {
    require_square_even(A, "factor_signature", false);
    const double res = std::max(set_residual(A, SetTag::orthogonal), set_residual(A, SetTag::symmetric));
    require(res, tol.atol, "factor_signature: input not real orthogonal symmetric");
    const RMatrix Ar = A.real();
    const Eigen::Index n = Ar.rows();
    Eigen::SelfAdjointEigenSolver<RMatrix> es(0.5 * (Ar + Ar.transpose()));
    // Ascending: -1 eigenvalues first. Reorder to +1 first.
    int j = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (es.eigenvalues()(i) > 0.0) ++j;
    }
    RMatrix O(n, n);
    O.leftCols(j) = es.eigenvectors().rightCols(j);
    O.rightCols(n - j) = es.eigenvectors().leftCols(n - j);
    if (O.determinant() < 0.0) O.col(0) *= -1.0;
    SignatureResult out;
    out.V = O.transpose();
    out.j = j;
    RVector d = RVector::Constant(n, -1.0);
    d.head(j).setOnes();
    require((out.V.transpose() * d.asDiagonal() * out.V - Ar).cwiseAbs().maxCoeff(), 1e-9,
            "factor_signature: reconstruction failed");
    return out;
}

CMatrix factor_symplectic_symmetric(const CMatrix& A, const Tolerance& tol) {
    require_square_even(A, "factor_symplectic_symmetric", true);
    const double res = std::max(set_residual(A, SetTag::compact_symplectic), set_residual(A, SetTag::symmetric));
    require(res, tol.atol, "factor_symplectic_symmetric: input not in Sp(M) ∩ symmetric");
    const Eigen::Index n2 = A.rows();
    const Eigen::Index M = n2 / 2;
    const RMatrix Jr = symplectic_J(static_cast<int>(n2)).real();
    RMatrix O;
    RVector theta;
    symmetric_unitary_spectrum(A, O, theta);

    // Group eigenvectors by phase; pair each phase theta with -theta through J.
    std::vector<bool> used(static_cast<std::size_t>(n2), false);
    std::vector<RVector> firsts;
    std::vector<double> phases;
    const double ctol = 1e-6;
    auto same_phase = [&](double a, double b) {
        return std::abs(std::remainder(a - b, 2.0 * kPi)) < ctol;
    };
    for (Eigen::Index i = 0; i < n2; ++i) {
        if (used[static_cast<std::size_t>(i)]) continue;
        const double th = theta(i);
        std::vector<Eigen::Index> cl;
        for (Eigen::Index q = i; q < n2; ++q) {
            if (!used[static_cast<std::size_t>(q)] && same_phase(theta(q), th)) cl.push_back(q);
        }
        const bool self_paired = same_phase(th, -th);
        if (self_paired) {
            // J acts on this eigenspace; build (o, J o) pairs.
            RMatrix E(n2, static_cast<Eigen::Index>(cl.size()));
            for (std::size_t c = 0; c < cl.size(); ++c) E.col(static_cast<Eigen::Index>(c)) = O.col(cl[c]);
            std::vector<RVector> span;
            for (Eigen::Index c = 0; c < E.cols(); ++c) {
                RVector v = E.col(c);
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& s : span) v -= s * s.dot(v);
                if (v.norm() < 0.5) continue;
                v.normalize();
                RVector w = Jr * v;
                for (int pass = 0; pass < 2; ++pass) {
                    for (const auto& s : span) w -= s * s.dot(w);
                    w -= v * v.dot(w);
                }
                w.normalize();
                span.push_back(v);
                span.push_back(w);
                firsts.push_back(v);
                phases.push_back(th);
            }
            for (Eigen::Index q : cl) used[static_cast<std::size_t>(q)] = true;
        } else {
            // Partner cluster at -theta.
            std::vector<Eigen::Index> partner;
            for (Eigen::Index q = 0; q < n2; ++q) {
                if (!used[static_cast<std::size_t>(q)] && same_phase(theta(q), -th)) partner.push_back(q);
            }
            if (partner.size() != cl.size()) {
                throw StructureError("factor_symplectic_symmetric: unpaired eigenvalue phase", th);
            }
            std::vector<RVector> local;
            for (Eigen::Index q : cl) {
                RVector v = O.col(q);
                for (int pass = 0; pass < 2; ++pass)
                    for (const auto& s : local) v -= s * s.dot(v);
                v.normalize();
                local.push_back(v);
                firsts.push_back(v);
                phases.push_back(th);
            }
            for (Eigen::Index q : cl) used[static_cast<std::size_t>(q)] = true;
            for (Eigen::Index q : partner) used[static_cast<std::size_t>(q)] = true;
        }
    }
    if (static_cast<Eigen::Index>(firsts.size()) != M) {
        throw StructureError("factor_symplectic_symmetric: pairing failed", double(firsts.size()));
    }
    RMatrix Ob(n2, n2);
    CVector half(n2);
    for (Eigen::Index i = 0; i < M; ++i) {
        Ob.col(i) = firsts[static_cast<std::size_t>(i)];
        Ob.col(M + i) = -(Jr * firsts[static_cast<std::size_t>(i)]);
        half(i) = std::exp(cplx(0.0, 0.5 * phases[static_cast<std::size_t>(i)]));
        half(M + i) = std::exp(cplx(0.0, -0.5 * phases[static_cast<std::size_t>(i)]));
    }
    const CMatrix V = half.asDiagonal() * Ob.transpose().cast<cplx>();
    require(max_abs(V.transpose() * V - A), 1e-9, "factor_symplectic_symmetric: reconstruction failed");
    require(set_residual(V, SetTag::compact_symplectic), 1e-9, "factor_symplectic_symmetric: V not symplectic");
    return V;
}

CMatrix sp_cap_o_to_u(const CMatrix& U, const Tolerance& tol) {
    require_square_even(U, "sp_cap_o_to_u", true);
    const Eigen::Index m = U.rows() / 2;
    const double res = std::max(set_residual(U, SetTag::orthogonal), set_residual(U, SetTag::symplectic));
    require(res, tol.atol, "sp_cap_o_to_u: input not in Sp ∩ O");
    const RMatrix R = U.real();
    const RMatrix A = R.topLeftCorner(m, m);
    const RMatrix B = R.topRightCorner(m, m);
    const double blk = std::max((R.bottomLeftCorner(m, m) + B).cwiseAbs().maxCoeff(),
                                (R.bottomRightCorner(m, m) - A).cwiseAbs().maxCoeff());
    require(blk, tol.atol, "sp_cap_o_to_u: block structure violated");
    CMatrix V(m, m);
    V.real() = A;
    V.imag() = B;
    return V;
}

CMatrix u_to_sp_cap_o(const CMatrix& V) {
    const Eigen::Index m = V.rows();
    RMatrix R(2 * m, 2 * m);
    R << V.real(), V.imag(), -V.imag(), V.real();
    return R.cast<cplx>();
}

}  // namespace tenfold
