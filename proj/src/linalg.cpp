#include "tenfold/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

namespace tenfold {

namespace {

void require_square(const CMatrix& A, const char* what) {
    if (A.rows() != A.cols() || A.rows() == 0) {
        throw DimensionError(std::string(what) + ": matrix must be square and nonempty");
    }
}

double wrap_angle(double a) {
    // Map into (-pi, pi].
    double r = std::remainder(a, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

cplx pfaffian_matchings(const CMatrix& A, std::vector<int>& idx) {
    if (idx.empty()) return cplx(1.0, 0.0);
    const int i0 = idx.front();
    cplx sum(0.0, 0.0);
    for (std::size_t p = 1; p < idx.size(); ++p) {
        const int j = idx[p];
        if (A(i0, j) == cplx(0.0, 0.0)) continue;
        std::vector<int> rest;
        rest.reserve(idx.size() - 2);
        for (std::size_t q = 1; q < idx.size(); ++q) {
            if (q != p) rest.push_back(idx[q]);
        }
        const double sign = (p % 2 == 1) ? 1.0 : -1.0;
        sum += sign * A(i0, j) * pfaffian_matchings(A, rest);
    }
    return sum;
}

cplx pfaffian_parlett_reid(CMatrix A) {
    const Eigen::Index n = A.rows();
    cplx pf(1.0, 0.0);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp = k + 1;
        double best = std::abs(A(k + 1, k));
        for (Eigen::Index r = k + 2; r < n; ++r) {
            if (std::abs(A(r, k)) > best) {
                best = std::abs(A(r, k));
                kp = r;
            }
        }
        if (kp != k + 1) {
            A.row(k + 1).swap(A.row(kp));
            A.col(k + 1).swap(A.col(kp));
            pf = -pf;
        }
        if (A(k + 1, k) == cplx(0.0, 0.0)) return cplx(0.0, 0.0);
        pf *= A(k, k + 1);
        if (k + 2 < n) {
            const Eigen::Index rem = n - k - 2;
            CVector tau = A.row(k).segment(k + 2, rem).transpose() / A(k, k + 1);
            CVector col = A.col(k + 1).segment(k + 2, rem);
            A.block(k + 2, k + 2, rem, rem) += tau * col.transpose() - col * tau.transpose();
        }
    }
    return pf;
}

}  // namespace

CMatrix symplectic_J(int two_m) {
    if (two_m <= 0 || two_m % 2 != 0) throw DimensionError("symplectic_J: size must be even");
    const int m = two_m / 2;
    CMatrix J = CMatrix::Zero(two_m, two_m);
    J.block(0, m, m, m) = CMatrix::Identity(m, m);
    J.block(m, 0, m, m) = -CMatrix::Identity(m, m);
    return J;
}

double max_abs(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    return A.cwiseAbs().maxCoeff();
}

double op_norm(const CMatrix& A) {
    if (A.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(A.adjoint() * A, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

bool is_real(const CMatrix& A, double atol) { return max_abs(CMatrix(A.imag().cast<cplx>())) <= atol; }

double set_residual(const CMatrix& A, SetTag tag, int rank) {
    require_square(A, "is_in_set");
    const Eigen::Index n = A.rows();
    const CMatrix I = CMatrix::Identity(n, n);
    auto real_part_residual = [&]() { return A.imag().cwiseAbs().maxCoeff(); };
    switch (tag) {
        case SetTag::unitary:
            return max_abs(A.adjoint() * A - I);
        case SetTag::orthogonal:
            return std::max(real_part_residual(), max_abs(A.transpose() * A - I));
        case SetTag::hermitian:
            return max_abs(A - A.adjoint());
        case SetTag::skew_hermitian:
            return max_abs(A + A.adjoint());
        case SetTag::symmetric:
            return max_abs(A - A.transpose());
        case SetTag::antisymmetric:
            return max_abs(A + A.transpose());
        case SetTag::symplectic: {
            if (n % 2 != 0) throw DimensionError("symplectic set needs even size");
            const CMatrix J = symplectic_J(static_cast<int>(n));
            return max_abs(A.transpose() * J * A - J);
        }
        case SetTag::compact_symplectic: {
            if (n % 2 != 0) throw DimensionError("symplectic set needs even size");
            const CMatrix J = symplectic_J(static_cast<int>(n));
            return std::max(max_abs(A.adjoint() * A - I), max_abs(A.transpose() * J * A - J));
        }
        case SetTag::special_orthogonal: {
            const double orth = std::max(real_part_residual(), max_abs(A.transpose() * A - I));
            return std::max(orth, std::abs(A.real().determinant() - 1.0));
        }
        case SetTag::projection: {
            if (rank < 0 || rank > n) throw DimensionError("projection set needs a rank in [0, N]");
            const double idem = max_abs(A * A - A);
            const double herm = max_abs(A - A.adjoint());
            const double tr = std::abs(A.trace() - cplx(rank, 0.0));
            return std::max({idem, herm, tr});
        }
    }
    return 0.0;
}

bool is_in_set(const CMatrix& A, SetTag tag, const Tolerance& tol, int rank) {
    return set_residual(A, tag, rank) <= tol.atol;
}

EigResult hermitian_eig(const CMatrix& H, const Tolerance& tol) {
    require_square(H, "hermitian_eig");
    const double res = max_abs(H - H.adjoint());
    if (res > tol.atol * std::max(1.0, max_abs(H))) {
        throw StructureError("hermitian_eig: input is not hermitian", res);
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
    return {es.eigenvalues(), es.eigenvectors()};
}

CMatrix polar_unitary(const CMatrix& A, const Tolerance& tol) {
    require_square(A, "polar_unitary");
    Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double smin = svd.singularValues().minCoeff();
    if (smin < tol.gap_min) {
        throw StructureError("polar_unitary: smallest singular value below gap_min", smin);
    }
    return svd.matrixU() * svd.matrixV().adjoint();
}

UnitaryEig unitary_eig(const CMatrix& U) {
    require_square(U, "unitary_eig");
    Eigen::ComplexSchur<CMatrix> schur(U);
    return {schur.matrixT().diagonal(), schur.matrixU()};
}

CMatrix expm_skew(const CMatrix& X) {
    require_square(X, "expm_skew");
    const CMatrix H = cplx(0.0, -0.5) * (X - X.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (H + H.adjoint()));
    CVector ph(H.rows());
    for (Eigen::Index i = 0; i < ph.size(); ++i) {
        ph(i) = std::exp(cplx(0.0, es.eigenvalues()(i)));
    }
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix expm(const CMatrix& X) {
    require_square(X, "expm");
    return X.exp();
}

CMatrix principal_log_unitary(const CMatrix& U, double cut, const Tolerance& tol) {
    require_square(U, "principal_log_unitary");
    const double ures = set_residual(U, SetTag::unitary);
    if (ures > std::max(tol.atol, 1e-9)) {
        throw StructureError("principal_log_unitary: input is not unitary", ures);
    }
    const UnitaryEig eig = unitary_eig(U);
    const Eigen::Index n = U.rows();
    CVector logs(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double phi = std::arg(eig.values(i));
        const double rel = wrap_angle(phi - cut);  // in (-pi, pi], zero on the cut
        if (std::abs(rel) < tol.gap_min) {
            throw BranchCutError("eigenvalue on cut", phi);
        }
        // Phase in the window (cut - 2pi, cut).
        const double theta = (rel < 0.0) ? cut + rel : cut + rel - 2.0 * kPi;
        logs(i) = cplx(0.0, theta);
    }
    CMatrix L = eig.vectors * logs.asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (L - L.adjoint());
}

double widest_gap_cut(const CMatrix& U) {
    const UnitaryEig eig = unitary_eig(U);
    std::vector<double> ph;
    ph.reserve(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) ph.push_back(std::arg(eig.values(i)));
    std::sort(ph.begin(), ph.end());
    double best_gap = -1.0;
    double best_mid = kPi;
    for (std::size_t i = 0; i < ph.size(); ++i) {
        const double a = ph[i];
        const double b = (i + 1 < ph.size()) ? ph[i + 1] : ph[0] + 2.0 * kPi;
        if (b - a > best_gap) {
            best_gap = b - a;
            best_mid = wrap_angle(0.5 * (a + b));
        }
    }
    return best_mid;
}

CMatrix log_unitary(const CMatrix& U, const Tolerance& tol) {
    try {
        return principal_log_unitary(U, kPi, tol);
    } catch (const BranchCutError&) {
        return principal_log_unitary(U, widest_gap_cut(U), tol);
    }
}

RMatrix real_skew_log_so(const CMatrix& Rc, const Tolerance& tol) {
    require_square(Rc, "real_skew_log_so");
    const double imag_res = Rc.imag().cwiseAbs().maxCoeff();
    if (imag_res > tol.atol) throw StructureError("real_skew_log_so: complex residue", imag_res);
    const RMatrix R = Rc.real();
    const Eigen::Index n = R.rows();
    const double orth = (R.transpose() * R - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (orth > std::max(tol.atol, 1e-9)) throw StructureError("real_skew_log_so: not orthogonal", orth);
    if (R.determinant() < 0.0) throw StructureError("real_skew_log_so: det = -1", R.determinant());

    Eigen::RealSchur<RMatrix> rs(R);
    const RMatrix& T = rs.matrixT();
    const RMatrix& Z = rs.matrixU();
    RMatrix L = RMatrix::Zero(n, n);
    std::vector<Eigen::Index> negatives;
    for (Eigen::Index i = 0; i < n;) {
        if (i + 1 < n && std::abs(T(i + 1, i)) > 1e-13) {
            const double c = 0.5 * (T(i, i) + T(i + 1, i + 1));
            const double s = 0.5 * (T(i + 1, i) - T(i, i + 1));
            const double th = std::atan2(s, c);
            L(i, i + 1) = -th;
            L(i + 1, i) = th;
            i += 2;
        } else {
            if (T(i, i) < 0.0) negatives.push_back(i);
            i += 1;
        }
    }
    if (negatives.size() % 2 != 0) throw StructureError("real_skew_log_so: det = -1", -1.0);
    for (std::size_t p = 0; p + 1 < negatives.size(); p += 2) {
        L(negatives[p], negatives[p + 1]) = -kPi;
        L(negatives[p + 1], negatives[p]) = kPi;
    }
    RMatrix X = Z * L * Z.transpose();
    X = 0.5 * (X - X.transpose());
    const double res = (X.exp() - R).cwiseAbs().maxCoeff();
    if (res > 1e-9) throw StructureError("real_skew_log_so: exp round-trip failed", res);
    return X;
}

SymplecticLog symplectic_log(const CMatrix& U, const Tolerance& tol) {
    require_square(U, "symplectic_log");
    const Eigen::Index n2 = U.rows();
    if (n2 % 2 != 0) throw DimensionError("symplectic_log: size must be even");
    const double sres = set_residual(U, SetTag::compact_symplectic);
    if (sres > std::max(tol.atol, 1e-9)) {
        throw StructureError("symplectic_log: input not in Sp(M)", sres);
    }
    const CMatrix J = symplectic_J(static_cast<int>(n2));
    const UnitaryEig eig = unitary_eig(U);
    CMatrix X = CMatrix::Zero(n2, n2);
    std::vector<Eigen::Index> minus_one;
    for (Eigen::Index i = 0; i < n2; ++i) {
        const cplx lam = eig.values(i);
        if (std::abs(lam + 1.0) < 1e-6) {
            minus_one.push_back(i);
            continue;
        }
        const CVector z = eig.vectors.col(i);
        X += z * cplx(0.0, std::arg(lam)) * z.adjoint();
    }
    if (!minus_one.empty()) {
        // Quaternionic basis (psi, J conj psi) of the -1 eigenspace.
        CMatrix E(n2, static_cast<Eigen::Index>(minus_one.size()));
        for (std::size_t c = 0; c < minus_one.size(); ++c) E.col(c) = eig.vectors.col(minus_one[c]);
        E = orthonormalize(E);
        const CMatrix PE = E * E.adjoint();
        CMatrix rem = PE;
        CMatrix H = CMatrix::Zero(n2, n2);
        std::vector<CVector> basis;
        while (static_cast<Eigen::Index>(basis.size()) < E.cols()) {
            Eigen::Index best = 0;
            double bestn = -1.0;
            for (Eigen::Index j = 0; j < n2; ++j) {
                const double nn = rem.col(j).norm();
                if (nn > bestn) {
                    bestn = nn;
                    best = j;
                }
            }
            if (bestn < 1e-8) break;
            CVector psi = rem.col(best) / bestn;
            CVector phi = PE * (J * psi.conjugate());
            phi -= psi * (psi.adjoint() * phi)(0);
            for (const auto& b : basis) phi -= b * (b.adjoint() * phi)(0);
            const double pn = phi.norm();
            if (pn < 1e-8) break;
            phi /= pn;
            H += psi * psi.adjoint() - phi * phi.adjoint();
            basis.push_back(psi);
            basis.push_back(phi);
            rem -= psi * psi.adjoint() + phi * phi.adjoint();
            rem = rem * PE;
        }
        X += cplx(0.0, kPi) * H;
    }
    X = 0.5 * (X - X.adjoint());
    X = 0.5 * (X + J.transpose() * X.conjugate() * J);
    SymplecticLog out;
    out.X = X;
    const double alg = std::max(max_abs(X + X.adjoint()), max_abs(X.transpose() * J + J * X));
    out.residual = std::max(max_abs(expm_skew(X) - U), alg);
    out.needs_subdivision = out.residual > 1e-9;
    return out;
}

cplx pfaffian(const CMatrix& A, PfaffianMethod method, const Tolerance& tol) {
    if (A.rows() != A.cols()) throw DimensionError("pfaffian: matrix must be square");
    const Eigen::Index n = A.rows();
    if (n % 2 != 0) throw DimensionError("pfaffian: odd dimension");
    if (n == 0) return cplx(1.0, 0.0);
    const double res = max_abs(A + A.transpose());
    if (res > tol.atol * std::max(1.0, max_abs(A))) {
        throw StructureError("pfaffian: input is not antisymmetric", res);
    }
    const CMatrix S = 0.5 * (A - A.transpose());
    if (method == PfaffianMethod::automatic) {
        method = (n <= 8) ? PfaffianMethod::combinatorial : PfaffianMethod::elimination;
    }
    if (method == PfaffianMethod::combinatorial) {
        if (n > 8) throw DimensionError("pfaffian: combinatorial method limited to size <= 8");
        std::vector<int> idx(static_cast<std::size_t>(n));
        std::iota(idx.begin(), idx.end(), 0);
        return pfaffian_matchings(S, idx);
    }
    return pfaffian_parlett_reid(S);
}

CMatrix orthonormalize(const CMatrix& A) {
    CMatrix Q = A;
    for (int pass = 0; pass < 2; ++pass) {
        for (Eigen::Index j = 0; j < Q.cols(); ++j) {
            for (Eigen::Index i = 0; i < j; ++i) {
                Q.col(j) -= Q.col(i) * (Q.col(i).adjoint() * Q.col(j))(0);
            }
            const double nn = Q.col(j).norm();
            if (nn < 1e-14) throw StructureError("orthonormalize: rank deficient", nn);
            Q.col(j) /= nn;
        }
    }
    return Q;
}

CMatrix retract_projection(const CMatrix& X, int rank, double gap_min, double* gap_out) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (X + X.adjoint()));
    const RVector& ev = es.eigenvalues();
    const Eigen::Index N = X.rows();
    const Eigen::Index neg = N - rank;
    double gap = ev.cwiseAbs().minCoeff();
    if (gap_out) *gap_out = gap;
    if (rank < 0 || rank > N) throw DimensionError("retract_projection: bad rank");
    const bool rank_ok = (neg == 0 || ev(neg - 1) < 0.0) && (neg == N || ev(neg) > 0.0);
    if (!rank_ok) throw FillFailed("retraction rank mismatch", gap);
    if (gap < gap_min) throw FillFailed("retraction gap below gap_min", gap);
    const CMatrix V = es.eigenvectors().rightCols(rank);
    return V * V.adjoint();
}

}  // namespace tenfold
