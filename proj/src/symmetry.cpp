#include "tenfold/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tenfold {

namespace {

CMatrix conj_action(const CMatrix& M, const CMatrix& P) { return M * P.conjugate() * M.adjoint(); }

std::vector<CartanClass> build_registry() {
    using IG = IndexGroup;
    return {
        {ClassLabel::A, "A", 0, 0, false, "-", "-", IG::trivial, IG::trivial},
        {ClassLabel::AIII, "AIII", 0, 0, true, "-", "N=2n", IG::trivial, IG::Z},
        {ClassLabel::AI, "AI", 1, 0, false, "-", "-", IG::trivial, IG::trivial},
        {ClassLabel::BDI, "BDI", 1, 1, true, "-", "N=2n", IG::Z2, IG::Z2xZ},
        {ClassLabel::D, "D", 0, 1, false, "-", "N=2n", IG::Z2, IG::Z2xZ2},
        {ClassLabel::DIII, "DIII", -1, 1, true, "n=2m", "N=4m", IG::trivial, IG::Z2},
        {ClassLabel::AII, "AII", -1, 0, false, "n=2m", "N=2M", IG::trivial, IG::trivial},
        {ClassLabel::CII, "CII", -1, -1, true, "n=2m", "N=4m", IG::trivial, IG::Z},
        {ClassLabel::C, "C", 0, -1, false, "-", "N=2n", IG::trivial, IG::trivial},
        {ClassLabel::CI, "CI", 1, -1, true, "-", "N=2n", IG::trivial, IG::trivial},
    };
}

CMatrix block_diag(const CMatrix& a, const CMatrix& b) {
    CMatrix M = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
    M.topLeftCorner(a.rows(), a.cols()) = a;
    M.bottomRightCorner(b.rows(), b.cols()) = b;
    return M;
}

CMatrix block2(const CMatrix& a, const CMatrix& b, const CMatrix& c, const CMatrix& d) {
    const Eigen::Index n = a.rows();
    CMatrix M(2 * n, 2 * n);
    M << a, b, c, d;
    return M;
}

// Column of (I - Q Q^*) e_j with the largest norm, normalized.
CVector complement_seed(const std::vector<CVector>& basis, Eigen::Index N) {
    CMatrix R = CMatrix::Identity(N, N);
    for (const auto& b : basis) R -= b * b.adjoint();
    Eigen::Index best = 0;
    double bestn = -1.0;
    for (Eigen::Index j = 0; j < N; ++j) {
        const double nn = R.col(j).norm();
        if (nn > bestn + 1e-12) {
            bestn = nn;
            best = j;
        }
    }
    return R.col(best) / bestn;
}

void orthogonalize_against(CVector& v, const std::vector<CVector>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& b : basis) v -= b * (b.adjoint() * v)(0);
    }
}

void fixed_point_indices(const ProjectionFamily& f, std::vector<std::size_t>& out) {
    out.clear();
    if (f.d == 0) {
        for (std::size_t j = 0; j < f.size(); ++j) out.push_back(j);
    } else {
        out = {0, f.index_k0(), f.index_khalf()};
    }
}

}  // namespace

std::string to_string(ClassLabel label) { return cartan_class(label).name; }

std::string to_string(IndexGroup group) {
    switch (group) {
        case IndexGroup::trivial: return "0";
        case IndexGroup::Z: return "Z";
        case IndexGroup::Z2: return "Z2";
        case IndexGroup::Z2xZ: return "Z2xZ";
        case IndexGroup::Z2xZ2: return "Z2xZ2";
    }
    return "?";
}

ClassLabel parse_class_label(const std::string& name) {
    for (const auto& c : all_classes()) {
        if (c.name == name) return c.label;
    }
    throw std::invalid_argument("unknown class label: " + name);
}

IndexGroup CartanClass::index_group(int d) const {
    if (d == 0) return index0;
    if (d == 1) return index1;
    throw DimensionError("index_group: d must be 0 or 1");
}

std::string CartanClass::constraint_violation(int n, int N) const {
    if (N < 1) return "N must be positive";
    if (n < 0 || n > N) return "rank n must lie in [0, N]";
    switch (label) {
        case ClassLabel::A:
        case ClassLabel::AI:
            return "";
        case ClassLabel::AIII:
        case ClassLabel::BDI:
        case ClassLabel::D:
        case ClassLabel::C:
        case ClassLabel::CI:
            return N == 2 * n ? "" : name + " requires N = 2n";
        case ClassLabel::AII:
            if (n % 2 != 0) return "AII requires n = 2m";
            if (N % 2 != 0) return "AII requires N = 2M";
            return "";
        case ClassLabel::DIII:
        case ClassLabel::CII:
            if (n % 2 != 0) return name + " requires n = 2m";
            if (N != 2 * n) return name + " requires N = 4m";
            return "";
    }
    return "";
}

const std::vector<CartanClass>& all_classes() {
    static const std::vector<CartanClass> registry = build_registry();
    return registry;
}

const CartanClass& cartan_class(ClassLabel label) {
    for (const auto& c : all_classes()) {
        if (c.label == label) return c;
    }
    throw std::invalid_argument("unknown class");
}

const CartanClass& cartan_class(const std::string& name) { return cartan_class(parse_class_label(name)); }

SymmetryOps make_ops(int N, std::optional<CMatrix> T, std::optional<CMatrix> C, std::optional<CMatrix> S) {
    SymmetryOps ops;
    ops.N = N;
    ops.T = std::move(T);
    ops.C = std::move(C);
    if (ops.T && ops.C && !S) {
        ops.S = (*ops.T) * ops.C->conjugate();
    } else {
        ops.S = std::move(S);
    }
    return ops;
}

double check_ops(const SymmetryOps& ops, const CartanClass& cls, const Tolerance& tol) {
    const Eigen::Index N = ops.N;
    const CMatrix I = CMatrix::Identity(N, N);
    double worst = 0.0;
    auto need = [&](bool present, bool wanted, const char* name) {
        if (present != wanted) {
            throw StructureError(std::string("operator ") + name + (wanted ? " missing" : " not allowed") +
                                 " for class " + cls.name);
        }
    };
    need(ops.T.has_value(), cls.t_parity != 0, "T");
    need(ops.C.has_value(), cls.c_parity != 0, "C");
    need(ops.S.has_value(), cls.has_s, "S");
    auto check_anti = [&](const CMatrix& M, int eps, const char* name) {
        if (M.rows() != N || M.cols() != N) throw DimensionError(std::string(name) + " has wrong size");
        worst = std::max(worst, set_residual(M, SetTag::unitary));
        worst = std::max(worst, max_abs(M * M.conjugate() - double(eps) * I));
    };
    if (ops.T) check_anti(*ops.T, cls.t_parity, "T");
    if (ops.C) check_anti(*ops.C, cls.c_parity, "C");
    if (ops.S) {
        const CMatrix& S = *ops.S;
        if (S.rows() != N || S.cols() != N) throw DimensionError("S has wrong size");
        worst = std::max(worst, set_residual(S, SetTag::unitary));
        worst = std::max(worst, max_abs(S * S - I));
        if (ops.T && ops.C) {
            worst = std::max(worst, max_abs(S - (*ops.T) * ops.C->conjugate()));
            // TC = eps_T eps_C CT as anti-unitary maps.
            const CMatrix TC = (*ops.T) * ops.C->conjugate();
            const CMatrix CT = (*ops.C) * ops.T->conjugate();
            worst = std::max(worst, max_abs(TC - double(cls.t_parity * cls.c_parity) * CT));
        }
    }
    if (worst > tol.atol) throw StructureError("symmetry operators violate class relations", worst);
    return worst;
}

SymmetryOps normal_form_ops(ClassLabel label, int N) {
    const CartanClass& cls = cartan_class(label);
    SymmetryOps ops;
    ops.N = N;
    const CMatrix I = CMatrix::Identity(N, N);
    auto halfJ = [&]() { return symplectic_J(N / 2); };
    const int h = N / 2;
    const CMatrix Ih = CMatrix::Identity(h, h);
    const CMatrix Zh = CMatrix::Zero(h, h);
    switch (label) {
        case ClassLabel::A:
            break;
        case ClassLabel::AIII:
            ops.S = block_diag(Ih, -Ih);
            break;
        case ClassLabel::AI:
            ops.T = I;
            break;
        case ClassLabel::AII:
            ops.T = symplectic_J(N);
            break;
        case ClassLabel::D:
            ops.C = I;
            break;
        case ClassLabel::C:
            ops.C = symplectic_J(N);
            break;
        case ClassLabel::BDI:
            ops.T = I;
            ops.C = block_diag(Ih, -Ih);
            break;
        case ClassLabel::CI:
            ops.T = block2(Zh, Ih, Ih, Zh);
            ops.C = block2(Zh, -Ih, Ih, Zh);
            break;
        case ClassLabel::DIII: {
            const CMatrix J = halfJ();
            ops.T = block2(Zh, J, J, Zh);
            ops.C = block2(Zh, J, -J, Zh);
            break;
        }
        case ClassLabel::CII: {
            const CMatrix J = halfJ();
            ops.T = block_diag(-J, -J);
            ops.C = block_diag(J, -J);
            break;
        }
    }
    if (ops.T && ops.C) ops.S = (*ops.T) * ops.C->conjugate();
    (void)cls;
    return ops;
}

SymmetryOps transform_ops(const SymmetryOps& ops, const CMatrix& U) {
    SymmetryOps out;
    out.N = ops.N;
    if (ops.T) out.T = U * (*ops.T) * U.transpose();
    if (ops.C) out.C = U * (*ops.C) * U.transpose();
    if (ops.S) out.S = U * (*ops.S) * U.adjoint();
    return out;
}

SymmetryOps transport_ops(const SymmetryOps& ops, const CMatrix& B) { return transform_ops(ops, B.adjoint()); }

std::vector<double> k_grid(int g) {
    if (g < 1) throw GridError("k_grid: g must be positive");
    std::vector<double> k(static_cast<std::size_t>(2 * g + 1));
    for (int j = 0; j <= 2 * g; ++j) k[static_cast<std::size_t>(j)] = -0.5 + 0.5 * double(j) / double(g);
    k[static_cast<std::size_t>(g)] = 0.0;
    return k;
}

ProjectionFamily transform_family(const ProjectionFamily& f, const CMatrix& U) {
    ProjectionFamily out = f;
    for (auto& P : out.P) P = U * P * U.adjoint();
    return out;
}

ValidationReport validate_class(const ProjectionFamily& family, const SymmetryOps& ops, const CartanClass& cls,
                                const Tolerance& tol, double continuity_bound) {
    ValidationReport rep;
    const std::size_t L = family.size();
    if (L == 0) throw GridError("validate_class: empty family");
    if (family.d == 0 && L != 1) throw GridError("validate_class: d = 0 family must have one sample");
    if (family.d == 1) {
        if (L < 3 || L % 2 == 0 || family.k.size() != L) throw GridError("validate_class: grid must have 2g+1 points");
        for (std::size_t j = 0; j < L; ++j) {
            if (std::abs(family.k[j] + family.k[L - 1 - j]) > 1e-12) {
                throw GridError("validate_class: grid not symmetric under k -> -k");
            }
        }
    }
    auto fail = [&](const std::string& what) {
        rep.ok = false;
        rep.violations.push_back(what);
    };
    const std::string cv = cls.constraint_violation(family.n, family.N);
    if (!cv.empty()) fail("constraint: " + cv);
    if (ops.N != family.N) {
        fail("ops: dimension mismatch");
        return rep;
    }
    try {
        rep.residuals["ops"] = check_ops(ops, cls, tol);
    } catch (const StructureError& e) {
        rep.residuals["ops"] = e.residual();
        fail(std::string("ops: ") + e.what());
        return rep;
    }
    const Eigen::Index N = family.N;
    const CMatrix I = CMatrix::Identity(N, N);
    double proj = 0.0, rt = 0.0, rc = 0.0, rs = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        const CMatrix& P = family.P[j];
        if (P.rows() != N || P.cols() != N) {
            fail("projection: sample has wrong size");
            return rep;
        }
        proj = std::max(proj, set_residual(P, SetTag::projection, family.n));
        const CMatrix& Pm = family.P[family.mirror(j)];
        if (ops.T) rt = std::max(rt, max_abs(conj_action(*ops.T, P) - Pm));
        if (ops.C) rc = std::max(rc, max_abs(conj_action(*ops.C, P) - (I - Pm)));
        if (ops.S) rs = std::max(rs, max_abs((*ops.S) * P * ops.S->adjoint() - (I - P)));
    }
    rep.residuals["projection"] = proj;
    if (proj > tol.atol) fail("projection");
    if (ops.T) {
        rep.residuals["T"] = rt;
        if (rt > tol.atol) fail("T");
    }
    if (ops.C) {
        rep.residuals["C"] = rc;
        if (rc > tol.atol) fail("C");
    }
    if (ops.S) {
        rep.residuals["S"] = rs;
        if (rs > tol.atol) fail("S");
    }
    if (family.d == 1) {
        const double per = max_abs(family.P.front() - family.P.back());
        rep.residuals["periodicity"] = per;
        if (per > tol.atol) fail("periodicity");
        double jump = 0.0;
        for (std::size_t j = 0; j + 1 < L; ++j) jump = std::max(jump, op_norm(family.P[j + 1] - family.P[j]));
        rep.residuals["continuity"] = jump;
        if (jump > continuity_bound) fail("continuity");
    }
    return rep;
}

CMatrix normal_basis_T_even(const CMatrix& T, const Tolerance& tol) {
    const Eigen::Index N = T.rows();
    if (T.cols() != N || N == 0) throw DimensionError("normal_basis_T_even: T must be square");
    const double par = max_abs(T * T.conjugate() - CMatrix::Identity(N, N));
    if (par > tol.atol) throw StructureError("normal_basis_T_even: T conj(T) != I", par);
    std::vector<CVector> basis;
    while (static_cast<Eigen::Index>(basis.size()) < N) {
        const CVector psi = complement_seed(basis, N);
        const CVector Tpsi = T * psi.conjugate();
        const CVector a = psi + Tpsi;
        const CVector b = cplx(0.0, 1.0) * (psi - Tpsi);
        CVector phi = (a.norm() >= b.norm()) ? a : b;
        orthogonalize_against(phi, basis);
        phi /= phi.norm();
        basis.push_back(phi);
    }
    CMatrix B(N, N);
    for (Eigen::Index j = 0; j < N; ++j) B.col(j) = basis[static_cast<std::size_t>(j)];
    const double res = max_abs(B.adjoint() * T * B.conjugate() - CMatrix::Identity(N, N));
    if (res > 1e-8) throw StructureError("normal_basis_T_even: construction failed", res);
    return B;
}

CMatrix normal_basis_T_odd(const CMatrix& T, const Tolerance& tol) {
    const Eigen::Index N = T.rows();
    if (T.cols() != N || N == 0) throw DimensionError("normal_basis_T_odd: T must be square");
    if (N % 2 != 0) throw DimensionError("normal_basis_T_odd: dimension must be even");
    const double par = max_abs(T * T.conjugate() + CMatrix::Identity(N, N));
    if (par > tol.atol) throw StructureError("normal_basis_T_odd: T conj(T) != -I", par);
    std::vector<CVector> all, first, second;
    while (static_cast<Eigen::Index>(all.size()) < N) {
        CVector psi = complement_seed(all, N);
        orthogonalize_against(psi, all);
        psi /= psi.norm();
        CVector phi = -(T * psi.conjugate());
        all.push_back(psi);
        orthogonalize_against(phi, all);
        phi /= phi.norm();
        all.push_back(phi);
        first.push_back(psi);
        second.push_back(phi);
    }
    const Eigen::Index M = N / 2;
    CMatrix B(N, N);
    for (Eigen::Index j = 0; j < M; ++j) {
        B.col(j) = first[static_cast<std::size_t>(j)];
        B.col(M + j) = second[static_cast<std::size_t>(j)];
    }
    const double res = max_abs(B.adjoint() * T * B.conjugate() - symplectic_J(static_cast<int>(N)));
    if (res > 1e-8) throw StructureError("normal_basis_T_odd: construction failed", res);
    return B;
}

CMatrix chiral_basis(const CMatrix& S, const Tolerance& tol) {
    const Eigen::Index N = S.rows();
    if (N % 2 != 0) throw DimensionError("chiral_basis: Tr(S) = 0 needs even N");
    const double inv = max_abs(S * S - CMatrix::Identity(N, N));
    if (inv > tol.atol) throw StructureError("chiral_basis: S^2 != I", inv);
    const double tr = std::abs(S.trace());
    if (tr > 1e-8) throw StructureError("chiral_basis: Tr(S) != 0", tr);
    const EigResult e = hermitian_eig(S, tol);
    const Eigen::Index n = N / 2;
    CMatrix B(N, N);
    B.leftCols(n) = e.vectors.rightCols(n);
    B.rightCols(n) = e.vectors.leftCols(n);
    return B;
}

CMatrix class_basis(ClassLabel label, const SymmetryOps& ops, const Tolerance& tol) {
    const CartanClass& cls = cartan_class(label);
    if (label != ClassLabel::BDI && label != ClassLabel::CI && label != ClassLabel::DIII &&
        label != ClassLabel::CII) {
        throw std::invalid_argument("class_basis: class must be BDI, CI, DIII or CII");
    }
    check_ops(ops, cls, tol);
    const int N = ops.N;
    if (N % 2 != 0) throw DimensionError("class_basis: N must be even");
    if ((label == ClassLabel::DIII || label == ClassLabel::CII) && N % 4 != 0) {
        throw DimensionError(cls.name + " requires N to be a multiple of 4");
    }
    const CMatrix Sb = chiral_basis(*ops.S, tol);
    const int n = N / 2;
    const CMatrix V = Sb.leftCols(n);
    const CMatrix W = Sb.rightCols(n);
    const CMatrix& T = *ops.T;
    CMatrix B(N, N);
    switch (label) {
        case ClassLabel::BDI: {
            const CMatrix bv = normal_basis_T_even(V.adjoint() * T * V.conjugate(), Tolerance{1e-8, tol.gap_min});
            const CMatrix bw = normal_basis_T_even(W.adjoint() * T * W.conjugate(), Tolerance{1e-8, tol.gap_min});
            B << V * bv, W * bw;
            break;
        }
        case ClassLabel::CII: {
            const CMatrix bv = normal_basis_T_odd(V.adjoint() * T * V.conjugate(), Tolerance{1e-8, tol.gap_min});
            const CMatrix bw = normal_basis_T_odd(W.adjoint() * T * W.conjugate(), Tolerance{1e-8, tol.gap_min});
            B << cplx(0.0, 1.0) * V * bv, cplx(0.0, 1.0) * W * bw;
            break;
        }
        case ClassLabel::CI:
            B << V, T * V.conjugate();
            break;
        case ClassLabel::DIII:
            B << V, -(T * V.conjugate() * symplectic_J(n));
            break;
        default:
            break;
    }
    const SymmetryOps nf = normal_form_ops(label, N);
    const SymmetryOps tr = transport_ops(ops, B);
    const double res = std::max(max_abs(*tr.T - *nf.T), max_abs(*tr.C - *nf.C));
    if (res > 1e-8) throw StructureError("class_basis: transported operators differ from normal form", res);
    return B;
}

CMatrix normal_basis(ClassLabel label, const SymmetryOps& ops, const Tolerance& tol) {
    const int N = ops.N;
    switch (label) {
        case ClassLabel::A:
            return CMatrix::Identity(N, N);
        case ClassLabel::AIII:
            return chiral_basis(*ops.S, tol);
        case ClassLabel::AI:
            return normal_basis_T_even(*ops.T, tol);
        case ClassLabel::AII:
            return normal_basis_T_odd(*ops.T, tol);
        case ClassLabel::D:
            return normal_basis_T_even(*ops.C, tol);
        case ClassLabel::C:
            return normal_basis_T_odd(*ops.C, tol);
        default:
            return class_basis(label, ops, tol);
    }
}

CMatrix chiral_projection(const CMatrix& Q) {
    const Eigen::Index n = Q.rows();
    const CMatrix I = CMatrix::Identity(n, n);
    return 0.5 * block2(I, Q, Q.adjoint(), I);
}

ChiralData chiral_reduce(const ProjectionFamily& family, const CMatrix& B, const Tolerance& tol) {
    const Eigen::Index N = family.N;
    if (N % 2 != 0) throw DimensionError("chiral_reduce: N must be even");
    const Eigen::Index n = N / 2;
    ChiralData out;
    out.B = B;
    const CMatrix half = 0.5 * CMatrix::Identity(n, n);
    for (const auto& P : family.P) {
        const CMatrix Pb = B.adjoint() * P * B;
        const double diag = std::max(max_abs(Pb.topLeftCorner(n, n) - half), max_abs(Pb.bottomRightCorner(n, n) - half));
        if (diag > tol.atol) throw StructureError("chiral_reduce: S-symmetry residual exceeds atol", diag);
        const CMatrix Q = 2.0 * Pb.topRightCorner(n, n);
        const double ures = set_residual(Q, SetTag::unitary);
        if (ures > 10.0 * tol.atol) throw StructureError("chiral_reduce: Q not unitary", ures);
        out.Q.push_back(Q);
    }
    return out;
}

ChiralData chiral_reduce(const ProjectionFamily& family, const SymmetryOps& ops, ClassLabel label,
                         const Tolerance& tol) {
    if (!ops.S) throw StructureError("chiral_reduce: no chiral operator");
    return chiral_reduce(family, normal_basis(label, ops, tol), tol);
}

ProjectionFamily chiral_expand(const ChiralData& data, const std::vector<double>& k, int d) {
    ProjectionFamily f;
    f.d = d;
    f.k = k;
    const Eigen::Index n = data.Q.empty() ? 0 : data.Q.front().rows();
    f.N = static_cast<int>(2 * n);
    f.n = static_cast<int>(n);
    for (const auto& Q : data.Q) f.P.push_back(data.B * chiral_projection(Q) * data.B.adjoint());
    return f;
}

ReducedFamily reduce_D(const ProjectionFamily& family, const SymmetryOps& ops, const Tolerance& tol) {
    if (!ops.C || ops.T || ops.S) throw StructureError("reduce_D: operators are not those of class D");
    const double par = max_abs((*ops.C) * ops.C->conjugate() - CMatrix::Identity(ops.N, ops.N));
    if (par > tol.atol) throw StructureError("reduce_D: C^2 != +I", par);
    ReducedFamily r;
    r.B = normal_basis_T_even(*ops.C, tol);
    const Eigen::Index N = family.N;
    const CMatrix I = CMatrix::Identity(N, N);
    for (const auto& P : family.P) {
        r.A.push_back(cplx(0.0, -1.0) * (2.0 * r.B.adjoint() * P * r.B - I));
    }
    std::vector<std::size_t> fixed;
    fixed_point_indices(family, fixed);
    for (std::size_t j : fixed) {
        const CMatrix& A = r.A[j];
        const double im = A.imag().cwiseAbs().maxCoeff();
        if (im > tol.atol) throw StructureError("reduce_D: imaginary residue at a fixed point", im);
        const double st = std::max(set_residual(A, SetTag::antisymmetric), set_residual(A, SetTag::unitary));
        if (st > tol.atol * 10.0) throw StructureError("reduce_D: A not orthogonal antisymmetric", st);
        r.A[j] = CMatrix(A.real().cast<cplx>());
    }
    return r;
}

ProjectionFamily expand_D(const ReducedFamily& r, const std::vector<double>& k, int d) {
    ProjectionFamily f;
    f.d = d;
    f.k = k;
    const Eigen::Index N = r.B.rows();
    f.N = static_cast<int>(N);
    f.n = static_cast<int>(N / 2);
    const CMatrix I = CMatrix::Identity(N, N);
    for (const auto& A : r.A) f.P.push_back(r.B * (0.5 * (I + cplx(0.0, 1.0) * A)) * r.B.adjoint());
    return f;
}

ReducedFamily reduce_C(const ProjectionFamily& family, const SymmetryOps& ops, const Tolerance& tol) {
    if (!ops.C || ops.T || ops.S) throw StructureError("reduce_C: operators are not those of class C");
    const double par = max_abs((*ops.C) * ops.C->conjugate() + CMatrix::Identity(ops.N, ops.N));
    if (par > tol.atol) throw StructureError("reduce_C: C^2 != -I", par);
    ReducedFamily r;
    r.B = normal_basis_T_odd(*ops.C, tol);
    const Eigen::Index N = family.N;
    const CMatrix I = CMatrix::Identity(N, N);
    const CMatrix J = symplectic_J(static_cast<int>(N));
    for (const auto& P : family.P) {
        r.A.push_back(cplx(0.0, 1.0) * J * (2.0 * r.B.adjoint() * P * r.B - I));
    }
    std::vector<std::size_t> fixed;
    fixed_point_indices(family, fixed);
    for (std::size_t j : fixed) {
        const CMatrix& A = r.A[j];
        const double st = std::max({set_residual(A, SetTag::symmetric), set_residual(A, SetTag::compact_symplectic)});
        if (st > tol.atol * 10.0) throw StructureError("reduce_C: A not in Sp(n) ∩ symmetric", st);
    }
    return r;
}

ProjectionFamily expand_C(const ReducedFamily& r, const std::vector<double>& k, int d) {
    ProjectionFamily f;
    f.d = d;
    f.k = k;
    const Eigen::Index N = r.B.rows();
    f.N = static_cast<int>(N);
    f.n = static_cast<int>(N / 2);
    const CMatrix I = CMatrix::Identity(N, N);
    const CMatrix J = symplectic_J(static_cast<int>(N));
    for (const auto& A : r.A) f.P.push_back(r.B * (0.5 * (I + cplx(0.0, 1.0) * J * A)) * r.B.adjoint());
    return f;
}

CMatrix chiral_reflect(ClassLabel label, const CMatrix& Q) {
    switch (label) {
        case ClassLabel::BDI:
            return Q.conjugate();
        case ClassLabel::CI:
            return Q.transpose();
        case ClassLabel::DIII: {
            const CMatrix J = symplectic_J(static_cast<int>(Q.rows()));
            return -(J * Q.transpose() * J);
        }
        case ClassLabel::CII: {
            const CMatrix J = symplectic_J(static_cast<int>(Q.rows()));
            return J * Q.conjugate() * J.transpose();
        }
        default:
            throw std::invalid_argument("chiral_reflect: class has no reality condition");
    }
}

double chiral_constraint_residual(ClassLabel label, const std::vector<CMatrix>& Q) {
    if (label == ClassLabel::AIII || Q.empty()) return 0.0;
    const std::size_t L = Q.size();
    double worst = 0.0;
    for (std::size_t j = 0; j < L; ++j) {
        worst = std::max(worst, max_abs(chiral_reflect(label, Q[j]) - Q[L - 1 - j]));
    }
    std::vector<std::size_t> fixed;
    if (L == 1) {
        fixed = {0};
    } else {
        fixed = {(L - 1) / 2, L - 1};
    }
    for (std::size_t j : fixed) {
        const CMatrix& q = Q[j];
        double r = 0.0;
        switch (label) {
            case ClassLabel::BDI:
                r = set_residual(q, SetTag::orthogonal);
                break;
            case ClassLabel::CI:
                r = std::max(set_residual(q, SetTag::symmetric), set_residual(q, SetTag::unitary));
                break;
            case ClassLabel::DIII: {
                const CMatrix J = symplectic_J(static_cast<int>(q.rows()));
                r = std::max(set_residual(CMatrix(q * J), SetTag::antisymmetric), set_residual(q, SetTag::unitary));
                break;
            }
            case ClassLabel::CII:
                r = set_residual(q, SetTag::compact_symplectic);
                break;
            default:
                break;
        }
        worst = std::max(worst, r);
    }
    return worst;
}

}  // namespace tenfold
