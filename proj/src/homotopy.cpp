#include "tenfold/homotopy.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "tenfold/factorizations.hpp"
#include "tenfold/random.hpp"

namespace tenfold {

namespace {

constexpr double kEndpointTol = 1e-8;
constexpr int kMaxSubdivisions = 8;
constexpr int kMaxRotations = 8;

using Node = std::pair<int, int>;  // (ik, is)

// ---------------------------------------------------------------- paths in groups

struct PiecewiseLog {
    std::vector<CMatrix> nodes;
    std::vector<CMatrix> logs;

    CMatrix eval(double s) const {
        if (s >= 1.0) return nodes.back();
        const std::size_t m = logs.size();
        const double x = std::max(0.0, s) * static_cast<double>(m);
        const std::size_t i = std::min(static_cast<std::size_t>(x), m - 1);
        return nodes[i] * expm_skew((x - static_cast<double>(i)) * logs[i]);
    }
};

std::optional<CMatrix> try_sp_log(const CMatrix& U, const Tolerance& tol) {
    try {
        const SymplecticLog sl = symplectic_log(U, tol);
        if (sl.needs_subdivision) return std::nullopt;
        return sl.X;
    } catch (const Error&) {
        return std::nullopt;
    }
}

// Path from U0 to U1 inside Sp(M), subdividing through random midpoints when the log is ill-conditioned.
PiecewiseLog sp_path(const CMatrix& U0, const CMatrix& U1, const Tolerance& tol, Rng& rng) {
    const Tolerance lt{std::max(tol.atol, 1e-9), tol.gap_min};
    if (auto X = try_sp_log(U0.adjoint() * U1, lt)) return {{U0, U1}, {*X}};
    const int n = static_cast<int>(U0.rows());
    for (int level = 0; level < kMaxSubdivisions; ++level) {
        const CMatrix Y = random_sp_algebra(n, rng, 1.0);
        const CMatrix M = U0 * expm_skew(Y);
        if (auto X = try_sp_log(M.adjoint() * U1, lt)) return {{U0, M, U1}, {Y, *X}};
    }
    throw BranchCutError("sp_path: symplectic logarithm failed after subdivision", 0.0);
}

PiecewiseLog unitary_path(const CMatrix& U0, const CMatrix& U1, const Tolerance& tol) {
    return {{U0, U1}, {log_unitary(U0.adjoint() * U1, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min})}};
}

PiecewiseLog so_path(const CMatrix& R0, const CMatrix& R1, const Tolerance& tol) {
    const RMatrix L = real_skew_log_so(CMatrix((R0.adjoint() * R1).real().cast<cplx>()),
                                       Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
    return {{R0, R1}, {L.cast<cplx>()}};
}

CMatrix real_part(const CMatrix& M) { return M.real().cast<cplx>(); }

// Eigenbasis of a projection with the range first.
CMatrix range_first_basis(const CMatrix& P, int n) {
    const EigResult e = hermitian_eig(0.5 * (P + P.adjoint()));
    const Eigen::Index N = P.rows();
    CMatrix U(N, N);
    U.leftCols(n) = e.vectors.rightCols(n);
    U.rightCols(N - n) = e.vectors.leftCols(N - n);
    return U;
}

RMatrix range_first_basis_real(const CMatrix& P, int n) {
    const RMatrix R = 0.5 * (P.real() + P.real().transpose());
    Eigen::SelfAdjointEigenSolver<RMatrix> es(R);
    const Eigen::Index N = P.rows();
    RMatrix U(N, N);
    U.leftCols(n) = es.eigenvectors().rightCols(n);
    U.rightCols(N - n) = es.eigenvectors().leftCols(N - n);
    if (U.determinant() < 0.0) U.col(0) *= -1.0;
    return U;
}

// Basis in Sp(M) whose first m and (M+1..M+m)-th columns span the range of a T = J symmetric projection.
CMatrix quaternionic_basis(const CMatrix& P, int n, const Tolerance& tol) {
    const Eigen::Index N = P.rows();
    const Eigen::Index M = N / 2;
    const Eigen::Index m = n / 2;
    const CMatrix J = symplectic_J(static_cast<int>(N));
    const CMatrix E = range_first_basis(P, n);
    const Tolerance t{1e-8, tol.gap_min};
    auto frame = [&](const CMatrix& R) {
        const CMatrix TR = R.adjoint() * J * R.conjugate();
        return CMatrix(R * normal_basis_T_odd(TR, t));
    };
    const CMatrix F = frame(E.leftCols(n));
    const CMatrix G = frame(E.rightCols(N - n));
    CMatrix U(N, N);
    U.middleCols(0, m) = F.leftCols(m);
    U.middleCols(m, M - m) = G.leftCols(M - m);
    U.middleCols(M, m) = F.rightCols(m);
    U.middleCols(M + m, M - m) = G.rightCols(M - m);
    return U;
}

std::string sign_string(int s) { return s > 0 ? "+1" : "-1"; }

void finish_path(std::vector<CMatrix>& path, const CMatrix& target, const char* what) {
    const double err = max_abs(path.back() - target);
    if (err > kEndpointTol) throw StructureError(what, err);
    path.back() = target;
}

// Fixed-point path of projections in the normal basis of a non-chiral class.
std::vector<CMatrix> nonchiral_path(ClassLabel label, const CMatrix& P0, const CMatrix& P1, int n,
                                    const std::vector<double>& s, const Tolerance& tol, Rng& rng) {
    const Eigen::Index N = P0.rows();
    const CMatrix I = CMatrix::Identity(N, N);
    std::function<CMatrix(double)> W;
    switch (label) {
        case ClassLabel::A: {
            const CMatrix Wf = range_first_basis(P1, n) * range_first_basis(P0, n).adjoint();
            CMatrix L = log_unitary(Wf, Tolerance{std::max(tol.atol, 1e-9), tol.gap_min});
            const RVector th = hermitian_eig(cplx(0.0, -0.5) * (L - L.adjoint())).values;
            L -= cplx(0.0, 0.5 * (th.maxCoeff() + th.minCoeff())) * I;
            W = [L](double x) { return expm_skew(x * L); };
            break;
        }
        case ClassLabel::AI: {
            const RMatrix Wf = range_first_basis_real(P1, n) * range_first_basis_real(P0, n).transpose();
            const PiecewiseLog p = so_path(I, Wf.cast<cplx>(), tol);
            W = [p](double x) { return real_part(p.eval(x)); };
            break;
        }
        case ClassLabel::AII: {
            const CMatrix Wf = quaternionic_basis(P1, n, tol) * quaternionic_basis(P0, n, tol).adjoint();
            const PiecewiseLog p = sp_path(I, Wf, tol, rng);
            W = [p](double x) { return p.eval(x); };
            break;
        }
        case ClassLabel::D: {
            const Tolerance ft{std::max(tol.atol, 1e-9), tol.gap_min};
            const CMatrix A0 = real_part(cplx(0.0, -1.0) * (2.0 * P0 - I));
            const CMatrix A1 = real_part(cplx(0.0, -1.0) * (2.0 * P1 - I));
            const SkewOrthogonalResult f0 = factor_skew_orthogonal(0.5 * (A0 - A0.transpose()), SkewForm::pfaffian_form, ft);
            const SkewOrthogonalResult f1 = factor_skew_orthogonal(0.5 * (A1 - A1.transpose()), SkewForm::pfaffian_form, ft);
            if (f0.pf != f1.pf) {
                throw NotConnected("class D: Pfaffians differ at a fixed point", sign_string(f0.pf), sign_string(f1.pf));
            }
            const RMatrix Wf = f1.V.transpose() * f0.V;
            const PiecewiseLog p = so_path(I, Wf.cast<cplx>(), tol);
            W = [p](double x) { return real_part(p.eval(x)); };
            break;
        }
        case ClassLabel::C: {
            const Tolerance ft{std::max(tol.atol, 1e-9), tol.gap_min};
            const CMatrix J = symplectic_J(static_cast<int>(N));
            CMatrix A0 = cplx(0.0, 1.0) * J * (2.0 * P0 - I);
            CMatrix A1 = cplx(0.0, 1.0) * J * (2.0 * P1 - I);
            A0 = 0.5 * (A0 + A0.transpose());
            A1 = 0.5 * (A1 + A1.transpose());
            const CMatrix V0 = factor_symplectic_symmetric(A0, ft);
            const CMatrix V1 = factor_symplectic_symmetric(A1, ft);
            const PiecewiseLog p = sp_path(I, V1.adjoint() * V0, tol, rng);
            W = [p](double x) { return p.eval(x); };
            break;
        }
        default:
            throw std::invalid_argument("nonchiral_path: class must be A, AI, AII, D or C");
    }
    std::vector<CMatrix> out;
    out.reserve(s.size());
    for (double x : s) {
        const CMatrix Ws = W(x);
        CMatrix Ps = Ws * P0 * Ws.adjoint();
        out.push_back(0.5 * (Ps + Ps.adjoint()));
    }
    out.front() = P0;
    finish_path(out, P1, "nonchiral_path: endpoint mismatch");
    return out;
}

struct ChiralPath {
    std::vector<CMatrix> Q;
    std::vector<CMatrix> V;  // CI: Q = V^T V; DIII: Q = J V^T J V
};

ChiralPath chiral_path(ClassLabel label, const CMatrix& Q0, const CMatrix& Q1, const std::vector<double>& s,
                       const Tolerance& tol, Rng& rng) {
    const Eigen::Index n = Q0.rows();
    const Tolerance ft{std::max(tol.atol, 1e-9), tol.gap_min};
    ChiralPath out;
    switch (label) {
        case ClassLabel::AIII: {
            const PiecewiseLog p = unitary_path(Q0, Q1, tol);
            for (double x : s) out.Q.push_back(p.eval(x));
            break;
        }
        case ClassLabel::BDI: {
            const double d0 = Q0.determinant().real();
            const double d1 = Q1.determinant().real();
            if ((d0 > 0.0) != (d1 > 0.0)) {
                throw NotConnected("class BDI: det Q differs at a fixed point", sign_string(d0 > 0 ? 1 : -1),
                                   sign_string(d1 > 0 ? 1 : -1));
            }
            const PiecewiseLog p = so_path(real_part(Q0), real_part(Q1), tol);
            for (double x : s) out.Q.push_back(real_part(p.eval(x)));
            break;
        }
        case ClassLabel::CI: {
            const CMatrix V0 = factor_unitary_symmetric(0.5 * (Q0 + Q0.transpose()), ft);
            const CMatrix V1 = factor_unitary_symmetric(0.5 * (Q1 + Q1.transpose()), ft);
            const PiecewiseLog p = unitary_path(V0, V1, tol);
            for (double x : s) {
                const CMatrix V = p.eval(x);
                out.V.push_back(V);
                const CMatrix Q = V.transpose() * V;
                out.Q.push_back(0.5 * (Q + Q.transpose()));
            }
            break;
        }
        case ClassLabel::DIII: {
            const CMatrix J = symplectic_J(static_cast<int>(n));
            CMatrix A0 = J.transpose() * Q0;
            CMatrix A1 = J.transpose() * Q1;
            const CMatrix V0 = factor_skew_unitary(0.5 * (A0 - A0.transpose()), ft);
            const CMatrix V1 = factor_skew_unitary(0.5 * (A1 - A1.transpose()), ft);
            const PiecewiseLog p = unitary_path(V0, V1, tol);
            for (double x : s) {
                const CMatrix V = p.eval(x);
                out.V.push_back(V);
                CMatrix A = V.transpose() * J * V;
                A = 0.5 * (A - A.transpose());
                out.Q.push_back(J * A);
            }
            break;
        }
        case ClassLabel::CII: {
            const PiecewiseLog p = sp_path(Q0, Q1, tol, rng);
            for (double x : s) out.Q.push_back(p.eval(x));
            break;
        }
        default:
            throw std::invalid_argument("chiral_path: class must be chiral");
    }
    out.Q.front() = Q0;
    finish_path(out.Q, Q1, "chiral_path: endpoint mismatch");
    return out;
}

// ---------------------------------------------------------------- lifted logarithms

constexpr double kClusterTol = 1e-6;

// Log of a unitary written as Z diag(i theta) Z^*, with theta an arbitrary lift of the phases.
struct LiftedLog {
    CMatrix Z;
    std::vector<double> theta;

    CMatrix exp_scaled(double s) const {
        CVector d(static_cast<Eigen::Index>(theta.size()));
        for (std::size_t j = 0; j < theta.size(); ++j) d(static_cast<Eigen::Index>(j)) = std::exp(cplx(0.0, s * theta[j]));
        return Z * d.asDiagonal() * Z.adjoint();
    }
};

std::vector<double> phases(const CVector& v) {
    std::vector<double> out;
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(std::arg(v(i)));
    return out;
}

double lift_near(double phi, double target) { return phi + 2.0 * kPi * std::round((target - phi) / (2.0 * kPi)); }

std::vector<std::vector<int>> phase_clusters(const std::vector<double>& phi) {
    const int n = static_cast<int>(phi.size());
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    std::vector<std::vector<int>> out;
    for (int a = 0; a < n; ++a) {
        if (owner[static_cast<std::size_t>(a)] >= 0) continue;
        owner[static_cast<std::size_t>(a)] = static_cast<int>(out.size());
        out.push_back({a});
        for (int b = a + 1; b < n; ++b) {
            if (owner[static_cast<std::size_t>(b)] < 0 &&
                std::abs(std::remainder(phi[static_cast<std::size_t>(a)] - phi[static_cast<std::size_t>(b)], 2.0 * kPi)) <
                    kClusterTol) {
                owner[static_cast<std::size_t>(b)] = owner[static_cast<std::size_t>(a)];
                out.back().push_back(b);
            }
        }
    }
    return out;
}

// Logs of U[0], U[1], ... whose eigenphase lifts vary continuously, starting at the principal branch.
std::vector<LiftedLog> lifted_logs(const std::vector<CMatrix>& U) {
    std::vector<LiftedLog> out;
    const UnitaryEig e0 = unitary_eig(U.front());
    out.push_back({e0.vectors, phases(e0.values)});
    const std::size_t n = out.front().theta.size();
    for (std::size_t j = 1; j < U.size(); ++j) {
        const UnitaryEig e = unitary_eig(U[j]);
        const std::vector<double> phi = phases(e.values);
        const LiftedLog& prev = out.back();
        std::vector<std::tuple<double, std::size_t, std::size_t>> cand;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                cand.emplace_back(std::abs(std::remainder(phi[b] - prev.theta[a], 2.0 * kPi)), a, b);
        std::sort(cand.begin(), cand.end());
        std::vector<int> match(n, -1);
        std::vector<bool> used(n, false);
        for (const auto& [dist, a, b] : cand) {
            if (used[a] || match[b] >= 0) continue;
            used[a] = true;
            match[b] = static_cast<int>(a);
        }
        LiftedLog cur{e.vectors, std::vector<double>(n)};
        for (std::size_t b = 0; b < n; ++b) cur.theta[b] = lift_near(phi[b], prev.theta[static_cast<std::size_t>(match[b])]);
        // Inside a degenerate eigenspace carrying distinct lifts the basis is taken from the previous sample.
        for (const auto& cl : phase_clusters(phi)) {
            if (cl.size() < 2) continue;
            double lo = cur.theta[static_cast<std::size_t>(cl.front())];
            double hi = lo;
            for (int b : cl) {
                lo = std::min(lo, cur.theta[static_cast<std::size_t>(b)]);
                hi = std::max(hi, cur.theta[static_cast<std::size_t>(b)]);
            }
            if (hi - lo < kPi) continue;
            const Eigen::Index m = static_cast<Eigen::Index>(cl.size());
            CMatrix Zc(static_cast<Eigen::Index>(n), m);
            CMatrix Vp(static_cast<Eigen::Index>(n), m);
            for (Eigen::Index c = 0; c < m; ++c) {
                Zc.col(c) = cur.Z.col(cl[static_cast<std::size_t>(c)]);
                Vp.col(c) = prev.Z.col(match[static_cast<std::size_t>(cl[static_cast<std::size_t>(c)])]);
            }
            Eigen::JacobiSVD<CMatrix> svd(Zc.adjoint() * Vp, Eigen::ComputeFullU | Eigen::ComputeFullV);
            const CMatrix W = Zc * svd.matrixU() * svd.matrixV().adjoint();
            for (Eigen::Index c = 0; c < m; ++c) cur.Z.col(cl[static_cast<std::size_t>(c)]) = W.col(c);
        }
        out.push_back(std::move(cur));
    }
    return out;
}

// Integer r_j such that the phases phi_j + 2 pi r_j give a log generating a path inside the fixed-point set.
std::vector<int> fixed_point_offsets(ClassLabel label, const std::vector<double>& phi, const std::vector<int>& lift) {
    const std::size_t n = phi.size();
    std::vector<int> r(n, 0);
    switch (label) {
        case ClassLabel::AIII:
            break;
        case ClassLabel::CI:
            r = lift;
            break;
        case ClassLabel::BDI:
        case ClassLabel::CII: {
            std::vector<bool> done(n, false);
            std::vector<std::size_t> minus_one;
            for (std::size_t a = 0; a < n; ++a) {
                if (done[a]) continue;
                if (std::abs(std::sin(phi[a])) < kClusterTol) {
                    done[a] = true;
                    if (std::cos(phi[a]) < 0.0) minus_one.push_back(a);
                    continue;
                }
                std::size_t best = n;
                double bd = 0.0;
                for (std::size_t b = 0; b < n; ++b) {
                    if (b == a || done[b] || std::abs(std::sin(phi[b])) < kClusterTol) continue;
                    const double dist = std::abs(std::remainder(phi[a] + phi[b], 2.0 * kPi));
                    if (best == n || dist < bd) {
                        best = b;
                        bd = dist;
                    }
                }
                if (best == n || bd > 1e-4) throw StructureError("fixed_point_offsets: spectrum is not closed under conjugation", bd);
                done[a] = done[best] = true;
                r[a] = lift[a];
                r[best] = -lift[a];
            }
            if (minus_one.size() % 2 != 0) throw StructureError("fixed_point_offsets: odd multiplicity of eigenvalue -1", 1.0);
            for (std::size_t i = 0; i < minus_one.size(); ++i) {
                const std::size_t a = minus_one[i];
                const double target = i % 2 == 0 ? kPi : -kPi;
                r[a] = static_cast<int>(std::lround((target - phi[a]) / (2.0 * kPi)));
            }
            break;
        }
        case ClassLabel::DIII: {
            int total = 0;
            std::vector<std::vector<int>> odd;
            for (const auto& cl : phase_clusters(phi)) {
                int sum = 0;
                for (int b : cl) sum += lift[static_cast<std::size_t>(b)];
                const int m = static_cast<int>(cl.size());
                const int base = static_cast<int>(std::floor(static_cast<double>(sum) / m));
                for (int b : cl) r[static_cast<std::size_t>(b)] = base;
                total += sum - m * base;
                if (sum - m * base != 0) odd.push_back(cl);
            }
            for (const auto& cl : odd) {
                const int m = static_cast<int>(cl.size());
                if (total < m) continue;
                for (int b : cl) r[static_cast<std::size_t>(b)] += 1;
                total -= m;
            }
            if (total != 0) throw StructureError("fixed_point_offsets: lifts split a Kramers pair an odd number of times", total);
            break;
        }
        default:
            throw std::invalid_argument("fixed_point_offsets: class must be chiral");
    }
    return r;
}

// Loop exp(-2 pi i s H) with H = Z diag(h) Z^*, sum h = 0, contracted through rotations of eigenvector pairs.
class LoopContraction {
public:
    LoopContraction(const CMatrix& Z, std::vector<int> h) : n_(Z.rows()) {
        for (;;) {
            auto p = std::find_if(h.begin(), h.end(), [](int x) { return x > 0; });
            auto q = std::find_if(h.begin(), h.end(), [](int x) { return x < 0; });
            if (p == h.end() || q == h.end()) break;
            CMatrix B(n_, 2);
            B.col(0) = Z.col(q - h.begin());
            B.col(1) = Z.col(p - h.begin());
            pairs_.push_back(std::move(B));
            --*p;
            ++*q;
        }
        if (std::any_of(h.begin(), h.end(), [](int x) { return x != 0; }))
            throw StructureError("LoopContraction: loop has nonzero winding", 1.0);
    }

    int stages() const { return static_cast<int>(pairs_.size()); }

    // rho = 0 gives the loop itself, rho = 1 the constant loop.
    CMatrix at(double rho, double s) const {
        CMatrix out = CMatrix::Identity(n_, n_);
        const double T = static_cast<double>(pairs_.size());
        for (std::size_t t = 0; t < pairs_.size(); ++t) {
            const double u = std::clamp(rho * T - static_cast<double>(t), 0.0, 1.0);
            const cplx a = std::exp(cplx(0.0, kPi * s));
            Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
            D(0, 0) = a;
            D(1, 1) = std::conj(a);
            const double c = std::cos(0.5 * kPi * u);
            const double sn = std::sin(0.5 * kPi * u);
            Eigen::Matrix2cd R;
            R << c, -sn, sn, c;
            const Eigen::Matrix2cd M = D * R * D * R.adjoint() - Eigen::Matrix2cd::Identity();
            const CMatrix& B = pairs_[t];
            out = out * (CMatrix::Identity(n_, n_) + B * M * B.adjoint());
        }
        return out;
    }

private:
    Eigen::Index n_;
    std::vector<CMatrix> pairs_;
};

CMatrix fixed_point_clean(ClassLabel label, const CMatrix& Q) {
    if (label == ClassLabel::AIII) return Q;
    return 0.5 * (Q + chiral_reflect(label, Q));
}

struct LogFill {
    GridFill fill;
    int twist = 0;  // det winding of the right fixed-point path relative to the principal geodesic
};

// Q(k, s) = Q0(k) exp(s l(k)) C(k, s), with l a continuous log of Q0^* Q1 and C contracting the
// mismatch between l at the last column and the fixed-point log used there.
LogFill log_fill(ClassLabel label, const std::vector<CMatrix>& Q0, const std::vector<CMatrix>& Q1,
                 const std::vector<double>& s) {
    const std::size_t K = Q0.size();
    std::vector<CMatrix> delta(K);
    for (std::size_t j = 0; j < K; ++j) delta[j] = Q0[j].adjoint() * Q1[j];
    const std::vector<LiftedLog> ell = lifted_logs(delta);
    const LiftedLog& end = ell.back();
    const std::size_t n = end.theta.size();
    std::vector<double> phi(n);
    std::vector<int> lift(n);
    for (std::size_t j = 0; j < n; ++j) {
        phi[j] = std::remainder(end.theta[j], 2.0 * kPi);
        lift[j] = static_cast<int>(std::lround((end.theta[j] - phi[j]) / (2.0 * kPi)));
    }
    const std::vector<int> r = fixed_point_offsets(label, phi, lift);
    std::vector<int> h(n);
    LogFill out;
    LiftedLog right{end.Z, std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j) {
        h[j] = lift[j] - r[j];
        right.theta[j] = phi[j] + 2.0 * kPi * r[j];
        out.twist += r[j];
    }
    const LoopContraction corr(end.Z, h);
    GridFill& g = out.fill;
    g.K = static_cast<int>(K);
    g.S = static_cast<int>(s.size());
    g.nodes.resize(K * s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = 0; j < K; ++j) {
            CMatrix Q;
            if (i == 0) {
                Q = Q0[j];
            } else if (i + 1 == s.size()) {
                Q = Q1[j];
            } else if (j + 1 == K) {
                Q = fixed_point_clean(label, Q0[j] * right.exp_scaled(s[i]));
            } else {
                const double rho = 1.0 - static_cast<double>(j) / static_cast<double>(K - 1);
                Q = Q0[j] * ell[j].exp_scaled(s[i]) * corr.at(rho, s[i]);
                if (j == 0) Q = fixed_point_clean(label, Q);
            }
            g.nodes[i * K + j] = std::move(Q);
        }
    }
    g.report.converged = true;
    g.report.iterations = corr.stages();
    g.report.method = "lifted-log";
    return out;
}

// ---------------------------------------------------------------- square fills

std::vector<Node> boundary_loop(int K, int S) {
    std::vector<Node> loop;
    for (int is = 0; is < S; ++is) loop.emplace_back(0, is);
    for (int ik = 1; ik < K; ++ik) loop.emplace_back(ik, S - 1);
    for (int is = S - 2; is >= 0; --is) loop.emplace_back(K - 1, is);
    for (int ik = K - 2; ik >= 1; --ik) loop.emplace_back(ik, 0);
    return loop;
}

const CMatrix& boundary_at(const SquareBoundary& b, int ik, int is) {
    if (is == 0) return b.bottom[static_cast<std::size_t>(ik)];
    if (is == b.S() - 1) return b.top[static_cast<std::size_t>(ik)];
    if (ik == 0) return b.left[static_cast<std::size_t>(is)];
    return b.right[static_cast<std::size_t>(is)];
}

void check_boundary_shape(const SquareBoundary& b, const char* what) {
    const int K = b.K();
    const int S = b.S();
    if (K < 2 || S < 2 || static_cast<int>(b.top.size()) != K || static_cast<int>(b.right.size()) != S) {
        throw DimensionError(std::string(what) + ": inconsistent boundary sizes");
    }
    const double corner = std::max({max_abs(b.bottom.front() - b.left.front()), max_abs(b.bottom.back() - b.right.front()),
                                    max_abs(b.top.front() - b.left.back()), max_abs(b.top.back() - b.right.back())});
    if (corner > kEndpointTol) throw StructureError(std::string(what) + ": boundary corners disagree", corner);
}

void check_loop_continuity(const SquareBoundary& b, double bound, const char* what) {
    const std::vector<Node> loop = boundary_loop(b.K(), b.S());
    double worst = 0.0;
    for (std::size_t t = 0; t < loop.size(); ++t) {
        const Node& a = loop[t];
        const Node& c = loop[(t + 1) % loop.size()];
        worst = std::max(worst, op_norm(boundary_at(b, a.first, a.second) - boundary_at(b, c.first, c.second)));
    }
    if (worst > bound) throw StructureError(std::string(what) + ": boundary loop violates the continuity bound", worst);
}

// Discrete harmonic extension with clamped boundary, solved directly.
void harmonic_extend(std::vector<CMatrix>& nodes, int K, int S, double hk, double hs) {
    const int Ki = K - 2;
    const int Si = S - 2;
    if (Ki <= 0 || Si <= 0) return;
    const Eigen::Index r = nodes.front().rows();
    const Eigen::Index c = nodes.front().cols();
    const Eigen::Index rc = r * c;
    const double wk = 1.0 / (hk * hk);
    const double ws = 1.0 / (hs * hs);
    auto id = [&](int ik, int is) { return static_cast<Eigen::Index>((is - 1) * Ki + (ik - 1)); };
    auto interior = [&](int ik, int is) { return ik >= 1 && ik <= K - 2 && is >= 1 && is <= S - 2; };
    const Eigen::Index m = static_cast<Eigen::Index>(Ki) * Si;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(5 * m));
    RMatrix rhs = RMatrix::Zero(m, 2 * rc);
    for (int is = 1; is <= S - 2; ++is) {
        for (int ik = 1; ik <= K - 2; ++ik) {
            const Eigen::Index row = id(ik, is);
            trips.emplace_back(row, row, 2.0 * wk + 2.0 * ws);
            const std::pair<Node, double> nbs[4] = {
                {{ik - 1, is}, wk}, {{ik + 1, is}, wk}, {{ik, is - 1}, ws}, {{ik, is + 1}, ws}};
            for (const auto& [nb, w] : nbs) {
                if (interior(nb.first, nb.second)) {
                    trips.emplace_back(row, id(nb.first, nb.second), -w);
                } else {
                    const CMatrix& M = nodes[static_cast<std::size_t>(nb.second * K + nb.first)];
                    const Eigen::Map<const CVector> v(M.data(), rc);
                    rhs.row(row).head(rc) += w * v.real().transpose();
                    rhs.row(row).tail(rc) += w * v.imag().transpose();
                }
            }
        }
    }
    Eigen::SparseMatrix<double> A(m, m);
    A.setFromTriplets(trips.begin(), trips.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(A);
    if (solver.info() != Eigen::Success) throw FillFailed("harmonic_extend: factorization failed", 0.0);
    const RMatrix x = solver.solve(rhs);
    for (int is = 1; is <= S - 2; ++is) {
        for (int ik = 1; ik <= K - 2; ++ik) {
            const Eigen::Index row = id(ik, is);
            CMatrix M(r, c);
            Eigen::Map<CVector> v(M.data(), rc);
            v.real() = x.row(row).head(rc).transpose();
            v.imag() = x.row(row).tail(rc).transpose();
            nodes[static_cast<std::size_t>(is * K + ik)] = M;
        }
    }
}

// Closest isometry U V^* to F, with its smallest singular value.
CMatrix thin_polar(const CMatrix& F, double* smin) {
    Eigen::JacobiSVD<CMatrix> svd(F, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (smin) *smin = svd.singularValues().minCoeff();
    return svd.matrixU() * svd.matrixV().adjoint();
}

void grid_steps(const std::vector<CMatrix>& nodes, int K, int S, double& dk, double& ds) {
    dk = 0.0;
    ds = 0.0;
    for (int is = 0; is < S; ++is) {
        for (int ik = 0; ik < K; ++ik) {
            const CMatrix& a = nodes[static_cast<std::size_t>(is * K + ik)];
            if (ik + 1 < K) dk = std::max(dk, op_norm(a - nodes[static_cast<std::size_t>(is * K + ik + 1)]));
            if (is + 1 < S) ds = std::max(ds, op_norm(a - nodes[static_cast<std::size_t>((is + 1) * K + ik)]));
        }
    }
}

void require_continuity(const GridFill& g, double bound, const char* what) {
    double dk = 0.0;
    double ds = 0.0;
    grid_steps(g.nodes, g.K, g.S, dk, ds);
    if (std::max(dk, ds) > bound) throw FillFailed(std::string(what) + ": continuity bound exceeded", g.report.min_gap);
}

GridFill init_grid(const SquareBoundary& b) {
    GridFill g;
    g.K = b.K();
    g.S = b.S();
    g.nodes.assign(static_cast<std::size_t>(g.K * g.S), CMatrix());
    for (int is = 0; is < g.S; ++is) {
        for (int ik = 0; ik < g.K; ++ik) {
            if (is == 0 || is == g.S - 1 || ik == 0 || ik == g.K - 1) {
                g.nodes[static_cast<std::size_t>(is * g.K + ik)] = boundary_at(b, ik, is);
            }
        }
    }
    return g;
}

bool is_interior(const GridFill& g, int ik, int is) { return ik > 0 && ik < g.K - 1 && is > 0 && is < g.S - 1; }

GridFill fill_by_frames(const SquareBoundary& b, int rank, const FillOptions& opts) {
    GridFill g = init_grid(b);
    const std::vector<Node> loop = boundary_loop(g.K, g.S);
    const std::size_t T = loop.size();
    std::vector<CMatrix> F(T);
    const CMatrix& P00 = boundary_at(b, 0, 0);
    F[0] = hermitian_eig(0.5 * (P00 + P00.adjoint())).vectors.rightCols(rank);
    for (std::size_t t = 1; t < T; ++t) {
        F[t] = thin_polar(boundary_at(b, loop[t].first, loop[t].second) * F[t - 1], nullptr);
    }
    const CMatrix closing = thin_polar(P00 * F[T - 1], nullptr);
    const CMatrix H = F[0].adjoint() * closing;
    const CMatrix Lh = log_unitary(polar_unitary(H, Tolerance{opts.tol.atol, 1e-3}), Tolerance{1e-8, opts.tol.gap_min});
    std::vector<CMatrix> frames(static_cast<std::size_t>(g.K * g.S), CMatrix::Zero(b.bottom.front().rows(), rank));
    for (std::size_t t = 0; t < T; ++t) {
        const double frac = static_cast<double>(t) / static_cast<double>(T);
        frames[static_cast<std::size_t>(loop[t].second * g.K + loop[t].first)] = F[t] * expm_skew(-frac * Lh);
    }
    harmonic_extend(frames, g.K, g.S, b.hk, b.hs);
    g.report.iterations = 1;
    for (int is = 1; is < g.S - 1; ++is) {
        for (int ik = 1; ik < g.K - 1; ++ik) {
            double smin = 0.0;
            const CMatrix U = thin_polar(frames[static_cast<std::size_t>(is * g.K + ik)], &smin);
            g.report.min_gap = std::min(g.report.min_gap, smin);
            g.nodes[static_cast<std::size_t>(is * g.K + ik)] = U * U.adjoint();
        }
    }
    if (g.report.min_gap < opts.tol.gap_min) throw FillFailed("fill_by_frames: degenerate frame", g.report.min_gap);
    g.report.method = "frames";
    require_continuity(g, opts.continuity_bound, "fill_by_frames");
    g.report.converged = true;
    return g;
}

GridFill fill_by_reflections(const SquareBoundary& b, int rank, const FillOptions& opts) {
    GridFill g = init_grid(b);
    std::vector<CMatrix> X(g.nodes.size());
    const Eigen::Index N = b.bottom.front().rows();
    const CMatrix I = CMatrix::Identity(N, N);
    for (std::size_t i = 0; i < X.size(); ++i) {
        if (g.nodes[i].size() > 0) X[i] = 2.0 * g.nodes[i] - I;
    }
    harmonic_extend(X, g.K, g.S, b.hk, b.hs);
    g.report.iterations = 1;
    for (int is = 1; is < g.S - 1; ++is) {
        for (int ik = 1; ik < g.K - 1; ++ik) {
            double gap = 0.0;
            const std::size_t i = static_cast<std::size_t>(is * g.K + ik);
            const CMatrix H = 0.5 * (X[i] + X[i].adjoint());
            g.nodes[i] = retract_projection(H, rank, opts.tol.gap_min, &gap);
            g.report.min_gap = std::min(g.report.min_gap, gap);
        }
    }
    g.report.method = "reflections";
    require_continuity(g, opts.continuity_bound, "fill_by_reflections");
    g.report.converged = true;
    return g;
}

enum class Gauge { none, left, right, bottom, top };

GridFill fill_unitary_gauged(const SquareBoundary& b, Gauge gauge, const FillOptions& opts) {
    GridFill g = init_grid(b);
    auto gauge_of = [&](int ik, int is) -> std::pair<CMatrix, bool> {
        switch (gauge) {
            case Gauge::left: return {b.left[static_cast<std::size_t>(is)], true};
            case Gauge::right: return {b.right[static_cast<std::size_t>(is)], true};
            case Gauge::bottom: return {b.bottom[static_cast<std::size_t>(ik)], false};
            case Gauge::top: return {b.top[static_cast<std::size_t>(ik)], false};
            default: return {CMatrix(), true};
        }
    };
    auto apply = [&](const CMatrix& M, int ik, int is, bool inverse) -> CMatrix {
        if (gauge == Gauge::none) return M;
        const auto [G, on_left] = gauge_of(ik, is);
        if (on_left) return inverse ? CMatrix(G * M) : CMatrix(G.adjoint() * M);
        return inverse ? CMatrix(M * G) : CMatrix(M * G.adjoint());
    };
    std::vector<CMatrix> X(g.nodes.size());
    for (int is = 0; is < g.S; ++is) {
        for (int ik = 0; ik < g.K; ++ik) {
            const std::size_t i = static_cast<std::size_t>(is * g.K + ik);
            if (!is_interior(g, ik, is)) X[i] = apply(g.nodes[i], ik, is, false);
        }
    }
    harmonic_extend(X, g.K, g.S, b.hk, b.hs);
    g.report.iterations = 1;
    for (int is = 1; is < g.S - 1; ++is) {
        for (int ik = 1; ik < g.K - 1; ++ik) {
            const std::size_t i = static_cast<std::size_t>(is * g.K + ik);
            double smin = 0.0;
            const CMatrix U = thin_polar(X[i], &smin);
            g.report.min_gap = std::min(g.report.min_gap, smin);
            g.nodes[i] = apply(U, ik, is, true);
        }
    }
    if (g.report.min_gap < opts.tol.gap_min) throw FillFailed("fill_unitary_square: singular harmonic node", g.report.min_gap);
    static const char* names[] = {"harmonic", "harmonic-left-frame", "harmonic-right-frame", "harmonic-bottom-frame",
                                  "harmonic-top-frame"};
    g.report.method = names[static_cast<int>(gauge)];
    require_continuity(g, opts.continuity_bound, "fill_unitary_square");
    g.report.converged = true;
    return g;
}

// Constant symmetry-preserving moves of a chiral family: Q W for BDI, CII, AIII and F(W) Q W for CI, DIII.
CMatrix act_constant(ClassLabel label, const CMatrix& W, const CMatrix& Q) {
    if (label == ClassLabel::CI || label == ClassLabel::DIII) return chiral_reflect(label, W) * Q * W;
    return Q * W;
}

CMatrix random_chiral_generator(ClassLabel label, int n, Rng& rng, double norm) {
    CMatrix X;
    if (label == ClassLabel::CII) return random_sp_algebra(n, rng, norm);
    X = cplx(0.0, 1.0) * random_hermitian(n, rng);
    if (label == ClassLabel::BDI) X = X.real().cast<cplx>();
    const double nx = op_norm(X);
    if (nx > 0.0) X *= norm / nx;
    return X;
}

// log_fill preceded, over the first half of s, by the constant move exp(t X).
LogFill rotated_log_fill(ClassLabel label, const std::vector<CMatrix>& Q0, const std::vector<CMatrix>& Q1,
                         const std::vector<double>& s, const CMatrix& X) {
    const std::size_t S = s.size();
    const std::size_t K = Q0.size();
    const std::size_t m = (S - 1) / 2;
    if (m == 0) throw GridError("rotated_log_fill: need at least three s samples");
    const CMatrix W = expm_skew(X);
    std::vector<CMatrix> mid(K);
    for (std::size_t j = 0; j < K; ++j) mid[j] = act_constant(label, W, Q0[j]);
    std::vector<double> tail;
    for (std::size_t i = m; i < S; ++i) tail.push_back((s[i] - s[m]) / (1.0 - s[m]));
    LogFill out = log_fill(label, mid, Q1, tail);
    GridFill& g = out.fill;
    std::vector<CMatrix> nodes(K * S);
    for (std::size_t i = 0; i < S; ++i) {
        if (i >= m) {
            for (std::size_t j = 0; j < K; ++j) nodes[i * K + j] = std::move(g.nodes[(i - m) * K + j]);
            continue;
        }
        const CMatrix Wt = expm_skew((s[i] / s[m]) * X);
        for (std::size_t j = 0; j < K; ++j) nodes[i * K + j] = fixed_point_clean(j == 0 || j + 1 == K ? label : ClassLabel::AIII,
                                                                                act_constant(label, Wt, Q0[j]));
    }
    g.nodes = std::move(nodes);
    g.S = static_cast<int>(S);
    g.report.method = "rotated-lifted-log";
    return out;
}

// ---------------------------------------------------------------- assembly

template <class Build>
Homotopy with_refinement(const HomotopyOptions& opts, Build build) {
    std::optional<FillFailed> last;
    for (int r = 0; r <= opts.max_refinements; ++r) {
        const int S = (opts.s_points - 1) * (1 << r) + 1;
        try {
            Homotopy h = build(s_grid(S));
            h.fill.refinements = r;
            double dk = 0.0;
            double ds = 0.0;
            for (std::size_t is = 0; is < h.P.size(); ++is) {
                for (std::size_t j = 0; j < h.P[is].size(); ++j) {
                    if (j + 1 < h.P[is].size()) dk = std::max(dk, op_norm(h.P[is][j] - h.P[is][j + 1]));
                    if (is + 1 < h.P.size()) ds = std::max(ds, op_norm(h.P[is][j] - h.P[is + 1][j]));
                }
            }
            if (std::max(dk, ds) <= opts.continuity_bound) return h;
            last.emplace("homotopy: continuity bound exceeded", h.fill.min_gap);
        } catch (const FillFailed& e) {
            last = e;
        }
    }
    throw FillFailed(std::string(last->what()) + " (after refinement)", last->min_gap());
}

int projection_rank(const CMatrix& P) { return static_cast<int>(std::lround(P.trace().real())); }

void check_pair(const ProjectionFamily& P0, const ProjectionFamily& P1, int d) {
    if (P0.d != d || P1.d != d) throw DimensionError("connect: families must have d = " + std::to_string(d));
    if (P0.N != P1.N || P0.size() != P1.size()) throw DimensionError("connect: families differ in N or grid");
    if (P0.n != P1.n) throw DimensionError("connect: rank mismatch");
    for (std::size_t j = 0; j < P0.k.size(); ++j) {
        if (std::abs(P0.k[j] - P1.k[j]) > 1e-12) throw GridError("connect: k grids differ");
    }
}

Homotopy make_homotopy(ClassLabel label, int d, int N, int n, const std::vector<double>& s,
                       const std::vector<double>& k) {
    Homotopy h;
    h.label = label;
    h.d = d;
    h.N = N;
    h.n = n;
    h.s = s;
    h.k = k;
    h.P.assign(s.size(), {});
    return h;
}

CMatrix reflect_nonchiral(ClassLabel label, const SymmetryOps& nf, const CMatrix& P) {
    const Eigen::Index N = P.rows();
    if (label == ClassLabel::AI || label == ClassLabel::AII) {
        return *nf.T * P.conjugate() * nf.T->adjoint();
    }
    return *nf.C * (CMatrix::Identity(N, N) - P).conjugate() * nf.C->adjoint();
}

bool is_chiral_label(ClassLabel l) {
    return l == ClassLabel::AIII || l == ClassLabel::BDI || l == ClassLabel::CI || l == ClassLabel::DIII ||
           l == ClassLabel::CII;
}

ProjectionFamily single(const CMatrix& P) {
    ProjectionFamily f;
    f.d = 0;
    f.N = static_cast<int>(P.rows());
    f.n = projection_rank(P);
    f.k = {0.0};
    f.P = {P};
    return f;
}

}  // namespace

// ---------------------------------------------------------------- public fills

int boundary_winding(const SquareBoundary& b, const Tolerance& tol) {
    const std::vector<Node> loop = boundary_loop(b.K(), b.S());
    std::vector<CMatrix> Q;
    Q.reserve(loop.size() + 1);
    for (const Node& nd : loop) Q.push_back(boundary_at(b, nd.first, nd.second));
    Q.push_back(Q.front());
    return winding(Q, tol);
}

GridFill fill_projection_square(const SquareBoundary& b, int rank, const FillOptions& opts) {
    check_boundary_shape(b, "fill_projection_square");
    const std::vector<Node> loop = boundary_loop(b.K(), b.S());
    for (const Node& nd : loop) {
        const CMatrix& P = boundary_at(b, nd.first, nd.second);
        const double res = set_residual(P, SetTag::projection, rank);
        if (res > std::max(opts.tol.atol, 1e-9)) {
            throw StructureError("fill_projection_square: boundary sample is not a rank-" + std::to_string(rank) +
                                     " projection",
                                 res);
        }
    }
    check_loop_continuity(b, opts.continuity_bound, "fill_projection_square");
    double gap = std::numeric_limits<double>::infinity();
    std::string reasons;
    for (auto method : {fill_by_frames, fill_by_reflections}) {
        try {
            return method(b, rank, opts);
        } catch (const FillFailed& e) {
            gap = std::min(gap, e.min_gap());
            reasons += std::string(reasons.empty() ? "" : "; ") + e.what();
        } catch (const StructureError& e) {
            reasons += std::string(reasons.empty() ? "" : "; ") + e.what();
        }
    }
    throw FillFailed("fill_projection_square: " + reasons, gap);
}

GridFill fill_unitary_square(const SquareBoundary& b, const FillOptions& opts) {
    check_boundary_shape(b, "fill_unitary_square");
    const std::vector<Node> loop = boundary_loop(b.K(), b.S());
    for (const Node& nd : loop) {
        const double res = set_residual(boundary_at(b, nd.first, nd.second), SetTag::unitary);
        if (res > std::max(opts.tol.atol, 1e-9)) throw StructureError("fill_unitary_square: boundary sample is not unitary", res);
    }
    check_loop_continuity(b, opts.continuity_bound, "fill_unitary_square");
    const int w = boundary_winding(b, opts.tol);
    if (w != 0) throw WindingObstruction(w);
    double gap = std::numeric_limits<double>::infinity();
    std::string reasons;
    for (Gauge gauge : {Gauge::none, Gauge::left, Gauge::right, Gauge::bottom, Gauge::top}) {
        try {
            return fill_unitary_gauged(b, gauge, opts);
        } catch (const FillFailed& e) {
            gap = std::min(gap, e.min_gap());
            reasons = e.what();
        } catch (const StructureError& e) {
            reasons = e.what();
        }
    }
    throw FillFailed("fill_unitary_square: all gauges failed; last: " + reasons, gap);
}

// ---------------------------------------------------------------- homotopies

std::vector<double> s_grid(int points) {
    if (points < 2) throw GridError("s_grid: need at least two points");
    std::vector<double> s(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) s[static_cast<std::size_t>(i)] = static_cast<double>(i) / (points - 1);
    return s;
}

ProjectionFamily Homotopy::slice(std::size_t is) const {
    ProjectionFamily f;
    f.d = d;
    f.N = N;
    f.n = n;
    f.k = k;
    f.P = P[is];
    return f;
}

Homotopy connect0(const CMatrix& P0, const CMatrix& P1, const SymmetryOps& ops, const CartanClass& cls,
                  const HomotopyOptions& opts) {
    if (P0.rows() != P1.rows() || P0.rows() != ops.N) throw DimensionError("connect0: dimension mismatch");
    const int N = ops.N;
    const int n = projection_rank(P0);
    if (projection_rank(P1) != n) throw DimensionError("connect0: rank mismatch");
    const ClassLabel label = cls.label;
    const CMatrix B = normal_basis(label, ops, opts.tol);
    Rng rng(opts.seed);
    return with_refinement(opts, [&](const std::vector<double>& s) {
        Homotopy h = make_homotopy(label, 0, N, n, s, {0.0});
        std::vector<CMatrix> path;
        if (is_chiral_label(label)) {
            const CMatrix Q0 = chiral_reduce(single(P0), B, opts.tol).Q.front();
            const CMatrix Q1 = chiral_reduce(single(P1), B, opts.tol).Q.front();
            for (const CMatrix& Q : chiral_path(label, Q0, Q1, s, opts.tol, rng).Q) {
                path.push_back(chiral_projection(Q));
            }
        } else {
            path = nonchiral_path(label, B.adjoint() * P0 * B, B.adjoint() * P1 * B, n, s, opts.tol, rng);
        }
        for (std::size_t i = 0; i < s.size(); ++i) h.P[i] = {B * path[i] * B.adjoint()};
        h.P.front() = {P0};
        h.P.back() = {P1};
        h.fill.converged = true;
        h.fill.method = "fixed-point path";
        return h;
    });
}

Homotopy connect1_A(const ProjectionFamily& P0, const ProjectionFamily& P1, const HomotopyOptions& opts) {
    check_pair(P0, P1, 1);
    const std::size_t L = P0.size();
    Rng rng(opts.seed);
    return with_refinement(opts, [&](const std::vector<double>& s) {
        Homotopy h = make_homotopy(ClassLabel::A, 1, P0.N, P0.n, s, P0.k);
        SquareBoundary b;
        b.bottom = P0.P;
        b.top = P1.P;
        b.left = nonchiral_path(ClassLabel::A, P0.P[L - 1], P1.P[L - 1], P0.n, s, opts.tol, rng);
        b.right = b.left;
        b.hk = 1.0 / static_cast<double>(L - 1);
        b.hs = 1.0 / static_cast<double>(s.size() - 1);
        const GridFill g = fill_projection_square(b, P0.n, FillOptions{opts.tol, opts.continuity_bound});
        for (std::size_t is = 0; is < s.size(); ++is) {
            for (std::size_t j = 0; j < L; ++j) h.P[is].push_back(g.at(static_cast<int>(j), static_cast<int>(is)));
        }
        h.P.front() = P0.P;
        h.P.back() = P1.P;
        h.fill = g.report;
        return h;
    });
}

Homotopy connect1_nonchiral(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                            const CartanClass& cls, const HomotopyOptions& opts) {
    const ClassLabel label = cls.label;
    if (label != ClassLabel::AI && label != ClassLabel::AII && label != ClassLabel::C && label != ClassLabel::D) {
        throw std::invalid_argument("connect1_nonchiral: class must be AI, AII, C or D");
    }
    check_pair(P0, P1, 1);
    if (label == ClassLabel::D) {
        const ClassIndex i0 = index(P0, ops, cls, opts.tol);
        const ClassIndex i1 = index(P1, ops, cls, opts.tol);
        if (!(i0 == i1)) throw NotConnected("class D: fixed-point Pfaffians differ", i0.to_string(), i1.to_string());
    }
    const std::size_t L = P0.size();
    const std::size_t g = static_cast<std::size_t>(P0.g());
    const CMatrix B = normal_basis(label, ops, opts.tol);
    const SymmetryOps nf = normal_form_ops(label, P0.N);
    std::vector<CMatrix> Pb0, Pb1;
    for (std::size_t j = 0; j < L; ++j) {
        Pb0.push_back(B.adjoint() * P0.P[j] * B);
        Pb1.push_back(B.adjoint() * P1.P[j] * B);
    }
    Rng rng(opts.seed);
    return with_refinement(opts, [&](const std::vector<double>& s) {
        Homotopy h = make_homotopy(label, 1, P0.N, P0.n, s, P0.k);
        SquareBoundary b;
        b.bottom.assign(Pb0.begin() + static_cast<std::ptrdiff_t>(g), Pb0.end());
        b.top.assign(Pb1.begin() + static_cast<std::ptrdiff_t>(g), Pb1.end());
        b.left = nonchiral_path(label, Pb0[g], Pb1[g], P0.n, s, opts.tol, rng);
        b.right = nonchiral_path(label, Pb0[L - 1], Pb1[L - 1], P0.n, s, opts.tol, rng);
        b.hk = 1.0 / static_cast<double>(L - 1);
        b.hs = 1.0 / static_cast<double>(s.size() - 1);
        const GridFill fill = fill_projection_square(b, P0.n, FillOptions{opts.tol, opts.continuity_bound});
        for (std::size_t is = 0; is < s.size(); ++is) {
            std::vector<CMatrix> row(L);
            for (std::size_t j = g; j < L; ++j) row[j] = fill.at(static_cast<int>(j - g), static_cast<int>(is));
            for (std::size_t j = 0; j < g; ++j) row[j] = reflect_nonchiral(label, nf, row[L - 1 - j]);
            for (auto& P : row) P = B * P * B.adjoint();
            h.P[is] = std::move(row);
        }
        h.P.front() = P0.P;
        h.P.back() = P1.P;
        h.fill = fill.report;
        return h;
    });
}

Homotopy connect1_chiral(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                         const CartanClass& cls, const HomotopyOptions& opts) {
    const ClassLabel label = cls.label;
    if (!is_chiral_label(label)) throw std::invalid_argument("connect1_chiral: class must be chiral");
    check_pair(P0, P1, 1);
    const ClassIndex i0 = index(P0, ops, cls, opts.tol);
    const ClassIndex i1 = index(P1, ops, cls, opts.tol);
    if (!(i0 == i1)) throw NotConnected("class " + cls.name + ": indices differ", i0.to_string(), i1.to_string());
    const std::size_t L = P0.size();
    const std::size_t g = static_cast<std::size_t>(P0.g());
    const CMatrix B = normal_basis(label, ops, opts.tol);
    const std::vector<CMatrix> Q0 = chiral_reduce(P0, B, opts.tol).Q;
    const std::vector<CMatrix> Q1 = chiral_reduce(P1, B, opts.tol).Q;
    const bool full = label == ClassLabel::AIII;
    const std::size_t j0 = full ? 0 : g;
    const std::vector<CMatrix> q0(Q0.begin() + static_cast<std::ptrdiff_t>(j0), Q0.end());
    const std::vector<CMatrix> q1(Q1.begin() + static_cast<std::ptrdiff_t>(j0), Q1.end());
    return with_refinement(opts, [&](const std::vector<double>& s) {
        Homotopy h = make_homotopy(label, 1, P0.N, P0.n, s, P0.k);
        Rng rng(opts.seed);
        LogFill lf = log_fill(label, q0, q1, s);
        for (int attempt = 0; attempt < kMaxRotations; ++attempt) {
            double dk = 0.0;
            double ds = 0.0;
            grid_steps(lf.fill.nodes, lf.fill.K, lf.fill.S, dk, ds);
            if (std::max(dk, ds) <= 2.0 * opts.continuity_bound) break;
            const CMatrix X = random_chiral_generator(label, P0.n, rng, 1.5);
            lf = rotated_log_fill(label, q0, q1, s, X);
            lf.fill.report.iterations = attempt + 1;
        }
        const GridFill& fill = lf.fill;
        for (std::size_t is = 0; is < s.size(); ++is) {
            std::vector<CMatrix> row(L);
            for (std::size_t j = j0; j < L; ++j) row[j] = fill.at(static_cast<int>(j - j0), static_cast<int>(is));
            if (full) row[0] = row[L - 1];
            for (std::size_t j = 0; j < j0; ++j) row[j] = chiral_reflect(label, row[L - 1 - j]);
            for (auto& Q : row) Q = B * chiral_projection(Q) * B.adjoint();
            h.P[is] = std::move(row);
        }
        h.P.front() = P0.P;
        h.P.back() = P1.P;
        h.fill = fill.report;
        h.cure_winding = lf.twist;
        return h;
    });
}

SquareBoundary chiral_boundary(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                               const CartanClass& cls, const HomotopyOptions& opts) {
    const ClassLabel label = cls.label;
    if (!is_chiral_label(label)) throw std::invalid_argument("chiral_boundary: class must be chiral");
    check_pair(P0, P1, 1);
    const std::size_t L = P0.size();
    const std::size_t g = static_cast<std::size_t>(P0.g());
    const CMatrix B = normal_basis(label, ops, opts.tol);
    const std::vector<CMatrix> Q0 = chiral_reduce(P0, B, opts.tol).Q;
    const std::vector<CMatrix> Q1 = chiral_reduce(P1, B, opts.tol).Q;
    const std::size_t j0 = label == ClassLabel::AIII ? 0 : g;
    const std::vector<double> s = s_grid(opts.s_points);
    Rng rng(opts.seed);
    SquareBoundary b;
    b.bottom.assign(Q0.begin() + static_cast<std::ptrdiff_t>(j0), Q0.end());
    b.top.assign(Q1.begin() + static_cast<std::ptrdiff_t>(j0), Q1.end());
    b.right = chiral_path(label, Q0[L - 1], Q1[L - 1], s, opts.tol, rng).Q;
    b.left = label == ClassLabel::AIII ? b.right : chiral_path(label, Q0[j0], Q1[j0], s, opts.tol, rng).Q;
    b.hk = 1.0 / static_cast<double>(L - 1);
    b.hs = 1.0 / static_cast<double>(s.size() - 1);
    return b;
}

Homotopy connect(const ProjectionFamily& P0, const ProjectionFamily& P1, const SymmetryOps& ops,
                 const CartanClass& cls, const HomotopyOptions& opts) {
    if (P0.d != P1.d) throw DimensionError("connect: families differ in d");
    if (P0.d == 0) return connect0(P0.P.front(), P1.P.front(), ops, cls, opts);
    if (P0.d != 1) throw DimensionError("connect: only d = 0 and d = 1 are supported");
    if (cls.label == ClassLabel::A) return connect1_A(P0, P1, opts);
    if (is_chiral_label(cls.label)) return connect1_chiral(P0, P1, ops, cls, opts);
    return connect1_nonchiral(P0, P1, ops, cls, opts);
}

HomotopyReport verify_homotopy(const Homotopy& h, const SymmetryOps& ops, const CartanClass& cls,
                               const ProjectionFamily* P0, const ProjectionFamily* P1, const HomotopyOptions& opts) {
    HomotopyReport rep;
    auto fail = [&](const std::string& what) {
        rep.ok = false;
        if (rep.violations.size() < 20) rep.violations.push_back(what);
    };
    if (h.P.size() != h.s.size() || h.P.empty()) {
        fail("shape: s grid and samples disagree");
        return rep;
    }
    std::optional<ClassIndex> first;
    for (std::size_t is = 0; is < h.P.size(); ++is) {
        const ProjectionFamily f = h.slice(is);
        try {
            const ValidationReport v = validate_class(f, ops, cls, opts.tol, opts.continuity_bound);
            if (!v.ok) {
                ++rep.failed_slices;
                fail("slice " + std::to_string(is) + ": " + v.violations.front());
                continue;
            }
            const ClassIndex idx = index(f, ops, cls, opts.tol);
            if (!first) {
                first = idx;
            } else if (!(idx == *first)) {
                fail("slice " + std::to_string(is) + ": index " + idx.to_string() + " differs from " + first->to_string());
            }
        } catch (const std::exception& e) {
            ++rep.failed_slices;
            fail("slice " + std::to_string(is) + ": " + e.what());
        }
    }
    for (std::size_t is = 0; is < h.P.size(); ++is) {
        for (std::size_t j = 0; j < h.P[is].size(); ++j) {
            if (j + 1 < h.P[is].size()) rep.max_step_k = std::max(rep.max_step_k, op_norm(h.P[is][j] - h.P[is][j + 1]));
            if (is + 1 < h.P.size()) rep.max_step_s = std::max(rep.max_step_s, op_norm(h.P[is][j] - h.P[is + 1][j]));
        }
    }
    if (rep.max_step_k > opts.continuity_bound) fail("continuity in k exceeds bound");
    if (rep.max_step_s > opts.continuity_bound) fail("continuity in s exceeds bound");
    auto endpoint = [&](const ProjectionFamily* f, std::size_t is) {
        if (!f) return;
        if (f->size() != h.P[is].size()) {
            fail("endpoint: grid size mismatch");
            return;
        }
        for (std::size_t j = 0; j < f->size(); ++j) rep.endpoint_error = std::max(rep.endpoint_error, max_abs(f->P[j] - h.P[is][j]));
    };
    endpoint(P0, 0);
    endpoint(P1, h.P.size() - 1);
    if (rep.endpoint_error > opts.tol.atol) fail("endpoints differ from the input families");
    return rep;
}

}  // namespace tenfold
