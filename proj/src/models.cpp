#include "tenfold/models.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "tenfold/factorizations.hpp"
#include "tenfold/indices.hpp"
#include "tenfold/random.hpp"

namespace tenfold {

namespace {

const CMatrix& sigma_x() {
    static const CMatrix m = (CMatrix(2, 2) << 0, 1, 1, 0).finished();
    return m;
}
const CMatrix& sigma_y() {
    static const CMatrix m = (CMatrix(2, 2) << 0, cplx(0, -1), cplx(0, 1), 0).finished();
    return m;
}
const CMatrix& sigma_z() {
    static const CMatrix m = (CMatrix(2, 2) << 1, 0, 0, -1).finished();
    return m;
}

void require_valid(const ProjectionFamily& f, const SymmetryOps& ops, ClassLabel label, const Tolerance& tol,
                   const char* what) {
    const ValidationReport rep = validate_class(f, ops, cartan_class(label), tol);
    if (!rep.ok) throw StructureError(std::string(what) + ": generated family fails validation: " + rep.violations.front());
}

CMatrix reference_projection(int N, int n) {
    CMatrix D = CMatrix::Zero(N, N);
    for (int i = 0; i < n; ++i) D(i, i) = 1.0;
    return D;
}

CMatrix quaternionic_reference(int N, int n) {
    CMatrix D = CMatrix::Zero(N, N);
    for (int i = 0; i < n / 2; ++i) {
        D(i, i) = 1.0;
        D(N / 2 + i, N / 2 + i) = 1.0;
    }
    return D;
}

CMatrix random_sp(int two_m, Rng& rng) {
    return expm_skew(random_sp_algebra(two_m, rng, 2.0)) * expm_skew(random_sp_algebra(two_m, rng, 2.0));
}

CMatrix random_orthogonal(int n, int det, Rng& rng) {
    CMatrix R = random_special_orthogonal(n, rng);
    if (det < 0) R.col(0) *= -1.0;
    return R;
}

CMatrix traceless_skew(int n, Rng& rng, double norm) {
    CMatrix X = cplx(0.0, 1.0) * random_hermitian(n, rng);
    X -= (X.trace() / static_cast<double>(n)) * CMatrix::Identity(n, n);
    const double nx = op_norm(X);
    if (nx > 0.0) X *= norm / nx;
    return X;
}

CMatrix range_first_basis(const CMatrix& P, int n) {
    const EigResult e = hermitian_eig(0.5 * (P + P.adjoint()));
    const Eigen::Index N = P.rows();
    CMatrix U(N, N);
    U.leftCols(n) = e.vectors.rightCols(n);
    U.rightCols(N - n) = e.vectors.leftCols(N - n);
    return U;
}

// Bump exp(sum_m sin(2π m k) Y_m), the identity at k = 0 and k = 1/2.
struct Bump {
    std::vector<CMatrix> Y;
    CMatrix at(double k) const {
        CMatrix X = CMatrix::Zero(Y.front().rows(), Y.front().cols());
        for (std::size_t m = 0; m < Y.size(); ++m) X += std::sin(2.0 * kPi * double(m + 1) * k) * Y[m];
        return expm_skew(X);
    }
};

Bump make_bump(int n, const RandomOptions& opts, Rng& rng) {
    Bump b;
    for (int m = 1; m <= std::max(1, opts.modes); ++m) b.Y.push_back(traceless_skew(n, rng, opts.amplitude / m));
    return b;
}

// Periodic exp(sum_m cos(2π m k) Y_m + sin(2π m k) Z_m).
struct Loop {
    std::vector<CMatrix> Y, Z;
    CMatrix at(double k) const {
        CMatrix X = CMatrix::Zero(Y.front().rows(), Y.front().cols());
        for (std::size_t m = 0; m < Y.size(); ++m) {
            const double a = 2.0 * kPi * double(m + 1) * k;
            X += std::cos(a) * Y[m] + std::sin(a) * Z[m];
        }
        return expm_skew(X);
    }
};

Loop make_loop(int n, const RandomOptions& opts, Rng& rng) {
    Loop l;
    for (int m = 1; m <= std::max(1, opts.modes); ++m) {
        l.Y.push_back(traceless_skew(n, rng, opts.amplitude / m));
        l.Z.push_back(traceless_skew(n, rng, opts.amplitude / m));
    }
    return l;
}

CMatrix phase_diag(int n, double phase) {
    CVector d = CVector::Ones(n);
    d(0) = std::exp(cplx(0.0, phase));
    return d.asDiagonal();
}

// Target realized by the raw construction; corrected afterwards for the basis scramble.
struct RawTarget {
    int a = 1;  // D: Pf(0); BDI: det Q(0); DIII: sign flip parity; AIII / CII: winding
    int b = 1;  // D: Pf(1/2); BDI: W^{1/2}
};

std::vector<int> expected_value(ClassLabel label, int d, const RawTarget& t) {
    switch (label) {
        case ClassLabel::D:
            return d == 0 ? std::vector<int>{t.a} : std::vector<int>{t.a, t.b};
        case ClassLabel::BDI:
            return d == 0 ? std::vector<int>{t.a} : std::vector<int>{t.a, t.b};
        case ClassLabel::AIII:
        case ClassLabel::CII:
        case ClassLabel::DIII:
            return d == 0 ? std::vector<int>{} : std::vector<int>{t.a};
        default:
            return {};
    }
}

RawTarget target_from(ClassLabel label, int d, const std::vector<int>& v) {
    const std::size_t want = expected_value(label, d, RawTarget{}).size();
    if (v.size() != want) throw std::invalid_argument("random_in_class: target has the wrong number of entries");
    RawTarget t;
    if (want >= 1) t.a = v[0];
    if (want >= 2) t.b = v[1];
    auto is_sign = [](int x) { return x == 1 || x == -1; };
    switch (label) {
        case ClassLabel::D:
            if (!is_sign(t.a) || (d == 1 && !is_sign(t.b))) throw std::invalid_argument("random_in_class: D targets are ±1");
            break;
        case ClassLabel::BDI:
            if (!is_sign(t.a)) throw std::invalid_argument("random_in_class: BDI det target is ±1");
            break;
        case ClassLabel::DIII:
            if (d == 1 && !is_sign(t.a)) throw std::invalid_argument("random_in_class: DIII target is ±1");
            break;
        case ClassLabel::CII:
            if (d == 1 && t.a % 2 != 0) throw std::invalid_argument("random_in_class: CII winding is even");
            break;
        default:
            break;
    }
    return t;
}

RawTarget random_target(ClassLabel label, Rng& rng) {
    std::uniform_int_distribution<int> sign(0, 1);
    std::uniform_int_distribution<int> w(-1, 1);
    RawTarget t;
    switch (label) {
        case ClassLabel::D:
            t.a = sign(rng) ? 1 : -1;
            t.b = sign(rng) ? 1 : -1;
            break;
        case ClassLabel::BDI:
            t.a = sign(rng) ? 1 : -1;
            t.b = w(rng);
            break;
        case ClassLabel::DIII:
            t.a = sign(rng) ? 1 : -1;
            break;
        case ClassLabel::AIII:
            t.a = w(rng);
            break;
        case ClassLabel::CII:
            t.a = 2 * w(rng);
            break;
        default:
            break;
    }
    return t;
}

CMatrix reflect_nonchiral(ClassLabel label, const SymmetryOps& nf, const CMatrix& P) {
    if (label == ClassLabel::AI || label == ClassLabel::AII) return *nf.T * P.conjugate() * nf.T->adjoint();
    const Eigen::Index N = P.rows();
    return *nf.C * (CMatrix::Identity(N, N) - P).conjugate() * nf.C->adjoint();
}

// Fixed-point projection of a non-chiral class in its normal form.
CMatrix nonchiral_fixed_point(ClassLabel label, int n, int N, int pf, Rng& rng) {
    const CMatrix I = CMatrix::Identity(N, N);
    switch (label) {
        case ClassLabel::A: {
            const CMatrix U = random_unitary(N, rng);
            return U * reference_projection(N, n) * U.adjoint();
        }
        case ClassLabel::AI: {
            const CMatrix R = random_special_orthogonal(N, rng);
            return R * reference_projection(N, n) * R.transpose();
        }
        case ClassLabel::AII: {
            const CMatrix U = random_sp(N, rng);
            return U * quaternionic_reference(N, n) * U.adjoint();
        }
        case ClassLabel::D: {
            const CMatrix V = random_special_orthogonal(N, rng);
            RMatrix L = kron_identity_J2(N / 2);
            if (pf < 0) {
                L(N - 2, N - 1) = -1.0;
                L(N - 1, N - 2) = 1.0;
            }
            const CMatrix A = V.transpose() * L.cast<cplx>() * V;
            return 0.5 * (I + cplx(0.0, 1.0) * A);
        }
        case ClassLabel::C: {
            const CMatrix V = random_sp(N, rng);
            const CMatrix J = symplectic_J(N);
            const CMatrix A = V.transpose() * V;
            CMatrix P = 0.5 * (I + cplx(0.0, 1.0) * J * A);
            return 0.5 * (P + P.adjoint());
        }
        default:
            throw std::invalid_argument("nonchiral_fixed_point: class must be non-chiral");
    }
}

std::vector<CMatrix> nonchiral_family(ClassLabel label, int n, int N, int d, const std::vector<double>& k,
                                      const RawTarget& t, const RandomOptions& opts, Rng& rng) {
    if (d == 0) return {nonchiral_fixed_point(label, n, N, t.a, rng)};
    const std::size_t L = k.size();
    std::vector<CMatrix> P(L);
    if (label == ClassLabel::A) {
        const CMatrix U = random_unitary(N, rng);
        const CMatrix Pb = U * reference_projection(N, n) * U.adjoint();
        const Loop loop = make_loop(N, opts, rng);
        for (std::size_t j = 0; j < L; ++j) {
            const CMatrix W = loop.at(k[j]);
            P[j] = W * Pb * W.adjoint();
        }
        P.back() = P.front();
        return P;
    }
    const CMatrix P0 = nonchiral_fixed_point(label, n, N, t.a, rng);
    const CMatrix Ph = nonchiral_fixed_point(label, n, N, t.b, rng);
    const CMatrix W = range_first_basis(Ph, n) * range_first_basis(P0, n).adjoint();
    CMatrix Lw = log_unitary(W);
    const RVector th = hermitian_eig(cplx(0.0, -0.5) * (Lw - Lw.adjoint())).values;
    Lw -= cplx(0.0, 0.5 * (th.maxCoeff() + th.minCoeff())) * CMatrix::Identity(N, N);
    const Bump bump = make_bump(N, opts, rng);
    const std::size_t g = (L - 1) / 2;
    const SymmetryOps nf = normal_form_ops(label, N);
    for (std::size_t j = g; j < L; ++j) {
        const CMatrix U = expm_skew(2.0 * k[j] * Lw) * bump.at(k[j]);
        CMatrix Pk = U * P0 * U.adjoint();
        P[j] = 0.5 * (Pk + Pk.adjoint());
    }
    P[g] = P0;
    P[L - 1] = Ph;
    for (std::size_t j = 0; j < g; ++j) P[j] = reflect_nonchiral(label, nf, P[L - 1 - j]);
    return P;
}

CMatrix chiral_fixed_point(ClassLabel label, int n, int det, Rng& rng) {
    switch (label) {
        case ClassLabel::AIII:
            return random_unitary(n, rng);
        case ClassLabel::BDI:
            return random_orthogonal(n, det, rng);
        case ClassLabel::CI: {
            const CMatrix V = random_unitary(n, rng);
            const CMatrix Q = V.transpose() * V;
            return 0.5 * (Q + Q.transpose());
        }
        case ClassLabel::DIII: {
            const CMatrix V = random_unitary(n, rng);
            const CMatrix J = symplectic_J(n);
            CMatrix A = V.transpose() * J * V;
            A = 0.5 * (A - A.transpose());
            return J * A;
        }
        case ClassLabel::CII:
            return random_sp(n, rng);
        default:
            throw std::invalid_argument("chiral_fixed_point: class must be chiral");
    }
}

std::vector<CMatrix> chiral_family(ClassLabel label, int n, int d, const std::vector<double>& k, const RawTarget& t,
                                   const RandomOptions& opts, Rng& rng) {
    if (d == 0) return {chiral_fixed_point(label, n, t.a, rng)};
    const std::size_t L = k.size();
    std::vector<CMatrix> Q(L);
    if (label == ClassLabel::AIII) {
        const CMatrix Qb = random_unitary(n, rng);
        const Loop loop = make_loop(n, opts, rng);
        for (std::size_t j = 0; j < L; ++j) Q[j] = phase_diag(n, 2.0 * kPi * t.a * (k[j] + 0.5)) * loop.at(k[j]) * Qb;
        Q.back() = Q.front();
        return Q;
    }
    const std::size_t g = (L - 1) / 2;
    const Bump bump = make_bump(n, opts, rng);
    std::function<CMatrix(double)> base;
    switch (label) {
        case ClassLabel::BDI: {
            const CMatrix Q0 = random_orthogonal(n, t.a, rng);
            const CMatrix Qh = random_orthogonal(n, t.a, rng);
            const CMatrix Ls = real_skew_log_so(CMatrix((Q0.transpose() * Qh).real().cast<cplx>())).cast<cplx>();
            const int w = t.b;
            base = [=](double x) {
                return CMatrix(CMatrix((Q0 * expm_skew(2.0 * x * Ls)).real().cast<cplx>()) * bump.at(x) *
                               phase_diag(n, 2.0 * kPi * w * x));
            };
            break;
        }
        case ClassLabel::CI: {
            const CMatrix V0 = random_unitary(n, rng);
            const CMatrix V1 = random_unitary(n, rng);
            const CMatrix Lv = log_unitary(V0.adjoint() * V1);
            base = [=](double x) {
                const CMatrix V = V0 * expm_skew(2.0 * x * Lv);
                return CMatrix(V.transpose() * V * bump.at(x));
            };
            break;
        }
        case ClassLabel::DIII: {
            const CMatrix V0 = random_unitary(n, rng);
            const CMatrix V1 = random_unitary(n, rng);
            const CMatrix Lv = log_unitary(V0.adjoint() * V1);
            const CMatrix J = symplectic_J(n);
            const int flip = t.a > 0 ? 0 : 1;
            base = [=](double x) {
                const CMatrix V = V0 * expm_skew(2.0 * x * Lv);
                return CMatrix(J * V.transpose() * J * V * bump.at(x) * phase_diag(n, 4.0 * kPi * flip * x));
            };
            break;
        }
        case ClassLabel::CII: {
            const CMatrix Q0 = random_sp(n, rng);
            CMatrix Qh = random_sp(n, rng);
            SymplecticLog sl = symplectic_log(Q0.adjoint() * Qh);
            for (int tries = 0; sl.needs_subdivision && tries < 8; ++tries) {
                Qh = random_sp(n, rng);
                sl = symplectic_log(Q0.adjoint() * Qh);
            }
            if (sl.needs_subdivision) throw BranchCutError("random_in_class: symplectic log failed", 0.0);
            const CMatrix X = sl.X;
            const int half = t.a / 2;
            base = [=](double x) {
                return CMatrix(Q0 * expm_skew(2.0 * x * X) * bump.at(x) * phase_diag(n, 4.0 * kPi * half * x));
            };
            break;
        }
        default:
            throw std::invalid_argument("chiral_family: unsupported class");
    }
    for (std::size_t j = g; j < L; ++j) Q[j] = base(k[j]);
    // Fixed points carry the reality condition exactly.
    auto clean = [&](CMatrix M) -> CMatrix {
        switch (label) {
            case ClassLabel::BDI: return M.real().cast<cplx>();
            case ClassLabel::CI: return 0.5 * (M + M.transpose());
            case ClassLabel::DIII: {
                const CMatrix J = symplectic_J(n);
                const CMatrix A = J.transpose() * M;
                return J * (0.5 * (A - A.transpose()));
            }
            default: return 0.5 * (M + chiral_reflect(label, M));
        }
    };
    Q[g] = clean(Q[g]);
    Q[L - 1] = clean(Q[L - 1]);
    for (std::size_t j = 0; j < g; ++j) Q[j] = chiral_reflect(label, Q[L - 1 - j]);
    return Q;
}

bool is_chiral(ClassLabel l) {
    return l == ClassLabel::AIII || l == ClassLabel::BDI || l == ClassLabel::CI || l == ClassLabel::DIII ||
           l == ClassLabel::CII;
}

}  // namespace

CMatrix fermi_projection(const CMatrix& H, double fermi_level, double gap_min, double k) {
    const double herm = set_residual(H, SetTag::hermitian);
    if (herm > 1e-9 * (1.0 + op_norm(H))) throw StructureError("fermi_projection: Hamiltonian not hermitian", herm);
    const EigResult e = hermitian_eig(0.5 * (H + H.adjoint()));
    double gap = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < e.values.size(); ++i) gap = std::min(gap, std::abs(e.values(i) - fermi_level));
    if (gap < gap_min) {
        std::ostringstream os;
        os << "gap closes at k = " << k << " (gap " << gap << ")";
        throw GapClosed(os.str(), k, gap);
    }
    const Eigen::Index N = H.rows();
    CMatrix P = CMatrix::Zero(N, N);
    for (Eigen::Index i = 0; i < N; ++i) {
        if (e.values(i) < fermi_level) P += e.vectors.col(i) * e.vectors.col(i).adjoint();
    }
    return 0.5 * (P + P.adjoint());
}

ProjectionFamily family_from_hamiltonians(const std::vector<CMatrix>& H, const std::vector<double>& k, int d,
                                          double fermi_level, double gap_min) {
    if (H.empty() || H.size() != k.size()) throw DimensionError("family_from_hamiltonians: sample count mismatch");
    ProjectionFamily f;
    f.d = d;
    f.k = k;
    f.N = static_cast<int>(H.front().rows());
    for (std::size_t j = 0; j < H.size(); ++j) f.P.push_back(fermi_projection(H[j], fermi_level, gap_min, k[j]));
    f.n = static_cast<int>(std::lround(f.P.front().trace().real()));
    for (const auto& P : f.P) {
        if (std::lround(P.trace().real()) != f.n) throw GapClosed("family_from_hamiltonians: rank changes along k", 0.0, 0.0);
    }
    return f;
}

CMatrix kitaev_hamiltonian(double t, double delta, double mu, double k) {
    const double a = -2.0 * t * std::cos(2.0 * kPi * k) - mu;
    const double b = 2.0 * delta * std::sin(2.0 * kPi * k);
    return a * sigma_z() + b * sigma_y();
}

ModelFamily kitaev_chain(double t, double delta, double mu, int g, const Tolerance& tol) {
    const std::vector<double> k = k_grid(g);
    std::vector<CMatrix> H;
    for (double x : k) H.push_back(kitaev_hamiltonian(t, delta, mu, x));
    ModelFamily m;
    m.label = ClassLabel::D;
    m.family = family_from_hamiltonians(H, k, 1, 0.0, tol.gap_min);
    m.ops = make_ops(2, std::nullopt, sigma_x());
    require_valid(m.family, m.ops, m.label, tol, "kitaev_chain");
    return m;
}

CMatrix ssh_hamiltonian(double t1, double t2, double k) {
    const cplx q = t1 + t2 * std::exp(cplx(0.0, -2.0 * kPi * k));
    CMatrix H = CMatrix::Zero(2, 2);
    H(0, 1) = q;
    H(1, 0) = std::conj(q);
    return H;
}

ModelFamily ssh(double t1, double t2, int g, const Tolerance& tol) {
    const std::vector<double> k = k_grid(g);
    std::vector<CMatrix> H;
    for (double x : k) H.push_back(ssh_hamiltonian(t1, t2, x));
    ModelFamily m;
    m.label = ClassLabel::AIII;
    m.family = family_from_hamiltonians(H, k, 1, 0.0, tol.gap_min);
    m.ops = make_ops(2, std::nullopt, std::nullopt, sigma_z());
    require_valid(m.family, m.ops, m.label, tol, "ssh");
    return m;
}

ModelFamily random_in_class(ClassLabel label, int n, int N, std::uint64_t seed, const RandomOptions& opts,
                            const Tolerance& tol) {
    const CartanClass& cls = cartan_class(label);
    const std::string cv = cls.constraint_violation(n, N);
    if (!cv.empty()) throw DimensionError("random_in_class: " + cv);
    if (opts.d != 0 && opts.d != 1) throw DimensionError("random_in_class: d must be 0 or 1");
    if (opts.d == 1 && opts.g < 1) throw GridError("random_in_class: g must be positive");
    const std::vector<double> k = opts.d == 0 ? std::vector<double>{0.0} : k_grid(opts.g);

    RawTarget raw;
    std::vector<int> wanted;
    if (opts.target) {
        raw = target_from(label, opts.d, *opts.target);
        wanted = *opts.target;
    } else {
        Rng trng(seed ^ 0x9e3779b97f4a7c15ULL);
        raw = random_target(label, trng);
        wanted = expected_value(label, opts.d, raw);
    }

    const SymmetryOps nf = normal_form_ops(label, N);
    CMatrix U = CMatrix::Identity(N, N);
    if (opts.scramble) {
        Rng orng(opts.ops_seed ? *opts.ops_seed : seed + 0x5851f42d4c957f2dULL);
        U = random_unitary(N, orng);
    }
    ModelFamily m;
    m.label = label;
    m.ops = transform_ops(nf, U);

    auto build = [&](const RawTarget& t) {
        Rng rng(seed);
        ProjectionFamily f;
        f.d = opts.d;
        f.N = N;
        f.n = n;
        f.k = k;
        if (is_chiral(label)) {
            for (const CMatrix& Q : chiral_family(label, n, opts.d, k, t, opts, rng)) {
                f.P.push_back(chiral_projection(Q));
            }
        } else {
            f.P = nonchiral_family(label, n, N, opts.d, k, t, opts, rng);
        }
        for (auto& P : f.P) {
            P = U * P * U.adjoint();
            P = 0.5 * (P + P.adjoint());
        }
        return f;
    };

    m.family = build(raw);
    if (cls.index_group(opts.d) != IndexGroup::trivial) {
        ClassIndex idx = index(m.family, m.ops, cls, tol);
        if (idx.value != wanted) {
            // The scramble can flip fixed-point signs that depend on the normal basis.
            RawTarget fixed = raw;
            if (label == ClassLabel::D) {
                fixed.a = -raw.a;
                fixed.b = -raw.b;
            } else if (label == ClassLabel::BDI) {
                fixed.a = -raw.a;
            } else if (label == ClassLabel::DIII) {
                fixed.a = -raw.a;
            }
            m.family = build(fixed);
            idx = index(m.family, m.ops, cls, tol);
            if (idx.value != wanted) throw StructureError("random_in_class: failed to realize the index target");
        }
    }
    require_valid(m.family, m.ops, label, tol, "random_in_class");
    return m;
}

ModelFamily generate(const ModelSpec& spec, const Tolerance& tol) {
    auto param = [&](const std::string& key, double def) {
        const auto it = spec.params.find(key);
        return it == spec.params.end() ? def : it->second;
    };
    if (spec.name == "kitaev-chain") {
        return kitaev_chain(param("t", 1.0), param("delta", 1.0), param("mu", 1.0), spec.g, tol);
    }
    if (spec.name == "ssh") return ssh(param("t1", 1.0), param("t2", 2.0), spec.g, tol);
    if (spec.name == "random-class") {
        RandomOptions o;
        o.d = static_cast<int>(param("d", 1));
        o.g = spec.g;
        if (spec.params.count("ops_seed")) o.ops_seed = static_cast<std::uint64_t>(param("ops_seed", 0));
        const int n = static_cast<int>(param("n", 2));
        const int N = static_cast<int>(param("N", 2 * n));
        return random_in_class(parse_class_label(spec.class_name), n, N, spec.seed, o, tol);
    }
    throw std::invalid_argument("generate: unknown model '" + spec.name + "'");
}

}  // namespace tenfold
