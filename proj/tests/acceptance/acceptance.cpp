#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tenfold/factorizations.hpp"
#include "tenfold/homotopy.hpp"
#include "tenfold/indices.hpp"
#include "tenfold/models.hpp"
#include "tenfold/random.hpp"

using namespace tenfold;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

void fail(Outcome& o, const std::string& why) {
    if (o.pass) o.detail = why;
    o.pass = false;
}

// ---------------------------------------------------------------- reference table

struct TableRow {
    const char* name;
    int T, C, S;
    const char* n_rule;  // "", "even"
    const char* N_rule;  // "", "2n", "even"
    const char* d0;
    const char* d1;
};

const std::vector<TableRow>& table1() {
    static const std::vector<TableRow> rows = {
        {"A", 0, 0, 0, "", "", "0", "0"},
        {"AIII", 0, 0, 1, "", "2n", "0", "Z"},
        {"AI", 1, 0, 0, "", "", "0", "0"},
        {"BDI", 1, 1, 1, "", "2n", "Z2", "Z2xZ"},
        {"D", 0, 1, 0, "", "2n", "Z2", "Z2xZ2"},
        {"DIII", -1, 1, 1, "even", "2n", "0", "Z2"},
        {"AII", -1, 0, 0, "even", "even", "0", "0"},
        {"CII", -1, -1, 1, "even", "2n", "0", "Z"},
        {"C", 0, -1, 0, "", "2n", "0", "0"},
        {"CI", 1, -1, 1, "", "2n", "0", "0"},
    };
    return rows;
}

bool table_admits(const TableRow& r, int n, int N) {
    if (n < 0 || n > N || N < 1) return false;
    if (std::string(r.n_rule) == "even" && n % 2 != 0) return false;
    if (std::string(r.N_rule) == "2n" && N != 2 * n) return false;
    if (std::string(r.N_rule) == "even" && N % 2 != 0) return false;
    return true;
}

bool value_in_group(const std::string& group, const std::vector<int>& v) {
    auto pm1 = [](int x) { return x == 1 || x == -1; };
    if (group == "0") return v.empty();
    if (group == "Z") return v.size() == 1;
    if (group == "Z2") return v.size() == 1 && pm1(v[0]);
    if (group == "Z2xZ") return v.size() == 2 && pm1(v[0]);
    if (group == "Z2xZ2") return v.size() == 2 && pm1(v[0]) && pm1(v[1]);
    return false;
}

std::vector<std::pair<int, int>> admissible_sizes(const CartanClass& cls, int Nmax) {
    std::vector<std::pair<int, int>> out;
    for (int N = 2; N <= Nmax; ++N)
        for (int n = 1; n < N; ++n)
            if (cls.admits(n, N)) out.emplace_back(n, N);
    return out;
}

Outcome criterion_table() {
    Outcome o;
    std::size_t checked = 0;
    for (const TableRow& row : table1()) {
        const CartanClass& cls = cartan_class(row.name);
        if (cls.t_parity != row.T || cls.c_parity != row.C || cls.has_s != (row.S == 1)) fail(o, std::string(row.name) + ": symmetry signs");
        if (to_string(cls.index_group(0)) != row.d0 || to_string(cls.index_group(1)) != row.d1) fail(o, std::string(row.name) + ": index groups");
        for (int N = 1; N <= 9; ++N) {
            for (int n = 0; n <= N; ++n) {
                const bool want = table_admits(row, n, N);
                if (cls.admits(n, N) != want) fail(o, std::string(row.name) + ": constraint mismatch");
                if (!want && n >= 1) {
                    bool rejected = false;
                    try {
                        random_in_class(cls.label, n, N, 1);
                    } catch (const std::exception&) {
                        rejected = true;
                    }
                    if (!rejected) fail(o, std::string(row.name) + ": accepted (" + std::to_string(n) + "," + std::to_string(N) + ")");
                    ++checked;
                }
            }
        }
        const auto sizes = admissible_sizes(cls, 8);
        for (int d : {0, 1}) {
            for (int seed = 0; seed < 6; ++seed) {
                const auto [n, N] = sizes[static_cast<std::size_t>(seed) % sizes.size()];
                RandomOptions ro;
                ro.d = d;
                ro.g = 32;
                const ModelFamily m = random_in_class(cls.label, n, N, 100 + static_cast<std::uint64_t>(seed), ro);
                const ClassIndex idx = index(m.family, m.ops, cls);
                const std::string want = d == 0 ? row.d0 : row.d1;
                if (to_string(idx.group) != want || !value_in_group(want, idx.value)) fail(o, idx.to_string());
                ++checked;
            }
        }
    }
    o.detail = o.pass ? std::to_string(checked) + " checks" : o.detail;
    return o;
}

// ---------------------------------------------------------------- factorizations

using Gen = std::mt19937_64;

CMatrix cgauss(int r, int c, Gen& g) {
    std::normal_distribution<double> nd;
    CMatrix M(r, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) M(i, j) = cplx(nd(g), nd(g));
    return M;
}

RMatrix rgauss(int r, int c, Gen& g) {
    std::normal_distribution<double> nd;
    RMatrix M(r, c);
    for (int j = 0; j < c; ++j)
        for (int i = 0; i < r; ++i) M(i, j) = nd(g);
    return M;
}

CMatrix haar_unitary(int n, Gen& g) {
    Eigen::HouseholderQR<CMatrix> qr(cgauss(n, n, g));
    CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        const cplx d = qr.matrixQR()(i, i);
        Q.col(i) *= d / std::abs(d);
    }
    return Q;
}

RMatrix haar_orthogonal(int n, Gen& g) {
    Eigen::HouseholderQR<RMatrix> qr(rgauss(n, n, g));
    RMatrix Q = qr.householderQ() * RMatrix::Identity(n, n);
    for (int i = 0; i < n; ++i)
        if (qr.matrixQR()(i, i) < 0) Q.col(i) *= -1.0;
    return Q;
}

CMatrix Jblock(int two_m) { return symplectic_J(two_m); }

CMatrix compact_symplectic(int two_m, Gen& g) { return expm_skew(random_sp_algebra(two_m, g, 2.0)); }

double unitarity(const CMatrix& U) { return max_abs(U.adjoint() * U - CMatrix::Identity(U.cols(), U.cols())); }

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

Outcome criterion_factorizations() {
    Outcome o;
    Gen g(2024);
    std::uniform_int_distribution<int> size(1, 12);
    std::uniform_int_distribution<int> half(1, 6);
    const double tol = 1e-9;
    std::map<std::string, double> worst;
    auto note = [&](const std::string& k, double e) {
        worst[k] = std::max(worst[k], e);
        if (!(e <= tol)) fail(o, k + " error " + std::to_string(e));
    };
    auto guard = [&](const std::string& k, const std::function<void()>& f) {
        try {
            f();
        } catch (const std::exception& e) {
            fail(o, k + " threw: " + e.what());
        }
    };
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        const int n = size(g);
        const int m = half(g);
        const int tm = 2 * m;
        guard("takagi", [&] {
            const CMatrix G = cgauss(n, n, g);
            const CMatrix A = G + G.transpose();
            const TakagiResult r = takagi(A);
            note("takagi", max_abs(r.U * r.lambda.cast<cplx>().asDiagonal() * r.U.transpose() - A) / std::max(1.0, max_abs(A)));
            note("takagi.unitary", unitarity(r.U));
            for (Eigen::Index i = 0; i + 1 < r.lambda.size(); ++i)
                if (r.lambda(i) < r.lambda(i + 1) - 1e-12 || r.lambda(i + 1) < 0) fail(o, "takagi ordering");
        });
        guard("hua", [&] {
            const CMatrix G = cgauss(tm, tm, g);
            const CMatrix A = G - G.transpose();
            const HuaResult r = hua(A);
            CMatrix B = CMatrix::Zero(tm, tm);
            for (int i = 0; i < m; ++i) {
                B(2 * i, 2 * i + 1) = r.D(i);
                B(2 * i + 1, 2 * i) = -r.D(i);
            }
            note("hua", max_abs(r.U * B * r.U.transpose() - A) / std::max(1.0, max_abs(A)));
            note("hua.unitary", unitarity(r.U));
        });
        guard("unitary_symmetric", [&] {
            const CMatrix W = haar_unitary(n, g);
            const CMatrix A = W.transpose() * W;
            const CMatrix V = factor_unitary_symmetric(A);
            note("unitary_symmetric", max_abs(V.transpose() * V - A));
            note("unitary_symmetric.unitary", unitarity(V));
        });
        guard("symplectic_symmetric", [&] {
            const CMatrix W = compact_symplectic(tm, g);
            const CMatrix A = W.transpose() * W;
            const CMatrix V = factor_symplectic_symmetric(A);
            const CMatrix J = Jblock(tm);
            note("symplectic_symmetric", max_abs(V.transpose() * V - A));
            note("symplectic_symmetric.unitary", unitarity(V));
            note("symplectic_symmetric.sp", max_abs(V.transpose() * J * V - J));
        });
        guard("signature", [&] {
            const RMatrix O = haar_orthogonal(n, g);
            std::uniform_int_distribution<int> jd(0, n);
            const int j = jd(g);
            RVector d = -RVector::Ones(n);
            d.head(j).setOnes();
            const RMatrix A = O.transpose() * d.asDiagonal() * O;
            const SignatureResult r = factor_signature(A.cast<cplx>());
            RVector e = -RVector::Ones(n);
            e.head(r.j).setOnes();
            if (r.j != j) fail(o, "signature: wrong j");
            note("signature", (r.V.transpose() * e.asDiagonal() * r.V - A).cwiseAbs().maxCoeff());
            note("signature.orthogonal", (r.V.transpose() * r.V - RMatrix::Identity(n, n)).cwiseAbs().maxCoeff());
            note("signature.det", std::abs(r.V.determinant() - 1.0));
        });
        guard("skew_unitary", [&] {
            const CMatrix W = haar_unitary(tm, g);
            const CMatrix J = Jblock(tm);
            const CMatrix A = W.transpose() * J * W;
            const CMatrix V = factor_skew_unitary(A);
            note("skew_unitary", max_abs(V.transpose() * J * V - A));
            note("skew_unitary.unitary", unitarity(V));
        });
        guard("skew_orthogonal", [&] {
            const RMatrix O = haar_orthogonal(tm, g);
            const RMatrix J = Jblock(tm).real();
            const RMatrix A = O.transpose() * J * O;
            const SkewOrthogonalResult a = factor_skew_orthogonal(A.cast<cplx>(), SkewForm::J_form);
            note("skew_orthogonal.J", (a.V.transpose() * J * a.V - A).cwiseAbs().maxCoeff());
            note("skew_orthogonal.J.orthogonal", (a.V.transpose() * a.V - RMatrix::Identity(tm, tm)).cwiseAbs().maxCoeff());
            const SkewOrthogonalResult b = factor_skew_orthogonal(A.cast<cplx>(), SkewForm::pfaffian_form);
            note("skew_orthogonal.pf", (b.V.transpose() * b.Lambda * b.V - A).cwiseAbs().maxCoeff());
            note("skew_orthogonal.pf.so", std::abs(b.V.determinant() - 1.0));
            const double pf = pfaffian(A.cast<cplx>()).real();
            if ((pf > 0 ? 1 : -1) != b.pf) fail(o, "skew_orthogonal: Pfaffian sign");
        });
        guard("pfaffian", [&] {
            const CMatrix G = cgauss(tm, tm, g);
            const CMatrix A = G - G.transpose();
            const cplx pf = pfaffian(A);
            const double e = rel_err(pf * pf, A.determinant());
            worst["pf^2=det"] = std::max(worst["pf^2=det"], e);
            if (!(e <= 1e-8)) fail(o, "Pf^2 != det");
            if (tm <= 8) {
                const double c = rel_err(pfaffian(A, PfaffianMethod::combinatorial), pfaffian(A, PfaffianMethod::elimination));
                worst["pf comb/elim"] = std::max(worst["pf comb/elim"], c);
                if (!(c <= 1e-9)) fail(o, "combinatorial vs elimination Pfaffian");
            }
        });
    }
    if (o.pass) {
        std::ostringstream os;
        os << trials << " inputs per kind; worst";
        double w = 0.0;
        for (const auto& [k, v] : worst) w = std::max(w, v);
        os << " " << w;
        o.detail = os.str();
    }
    return o;
}

// ---------------------------------------------------------------- model phase diagrams

int scalar_winding(const std::function<cplx(double)>& f, int samples) {
    double total = 0.0;
    cplx prev = f(-0.5);
    for (int i = 1; i <= samples; ++i) {
        const cplx cur = f(-0.5 + static_cast<double>(i) / samples);
        total += std::arg(cur / prev);
        prev = cur;
    }
    return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

Outcome criterion_models() {
    Outcome o;
    const int g = 128;
    int cases = 0;
    for (int i = -7; i <= 7; ++i) {
        const double mu = 0.5 * i;
        if (std::abs(std::abs(mu) - 2.0) < 1e-12) continue;
        // Closed form at the fixed points: H = a sigma_z with a(0) = -2 - mu, a(1/2) = 2 - mu.
        const int oracle = ((-2.0 - mu) * (2.0 - mu) < 0.0) ? -1 : 1;
        const ModelFamily m = kitaev_chain(1.0, 1.0, mu, g);
        const ClassIndex idx = index(m.family, m.ops, cartan_class(ClassLabel::D));
        if (!idx.strong || *idx.strong != oracle) fail(o, "kitaev mu=" + std::to_string(mu));
        if ((oracle == -1) != (std::abs(mu) < 2.0)) fail(o, "kitaev oracle");
        ++cases;
    }
    for (double t2 : {0.0, 0.25, 0.5, 0.75, 1.25, 1.5, 2.0, 2.5, 3.0}) {
        const double t1 = 1.0;
        const int oracle = scalar_winding([&](double k) { return cplx(t1) + t2 * std::exp(cplx(0.0, -2.0 * kPi * k)); }, 2 * g);
        const ModelFamily m = ssh(t1, t2, g);
        const ClassIndex idx = index(m.family, m.ops, cartan_class(ClassLabel::AIII));
        if (std::abs(idx.value.at(0)) != std::abs(oracle)) fail(o, "ssh t2=" + std::to_string(t2));
        if ((std::abs(oracle) == 1) != (t2 > t1)) fail(o, "ssh oracle");
        ++cases;
    }
    if (o.pass) o.detail = std::to_string(cases) + " parameter points, grid " + std::to_string(2 * g + 1);
    return o;
}

// ---------------------------------------------------------------- homotopies

std::vector<int> other_value(ClassLabel label, int d, const std::vector<int>& v, Gen& g) {
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<int> w = v;
    switch (label) {
        case ClassLabel::AIII: w[0] += coin(g) ? 1 : -1; break;
        case ClassLabel::CII: w[0] += coin(g) ? 2 : -2; break;
        case ClassLabel::DIII: w[0] = -w[0]; break;
        case ClassLabel::BDI:
            if (d == 0) {
                w[0] = -w[0];
            } else if (coin(g)) {
                w[0] = -w[0];
            } else {
                w[1] += coin(g) ? 1 : -1;
            }
            break;
        case ClassLabel::D:
            if (d == 0) {
                w[0] = -w[0];
            } else {
                const int which = std::uniform_int_distribution<int>(0, 2)(g);
                if (which != 1) w[0] = -w[0];
                if (which != 0) w[1] = -w[1];
            }
            break;
        default: break;
    }
    return w;
}

struct HomotopyStats {
    int pairs = 0;
    int connected = 0;
    int rejected = 0;
    int engineered = 0;
    int slices_checked = 0;
    int slice_mismatch = 0;
    std::vector<std::string> failures;
};

void homotopy_run(HomotopyStats& st, int pairs_per_case) {
    Gen g(77);
    for (const auto& cls : all_classes()) {
        const auto sizes = admissible_sizes(cls, 16);
        for (int d : {0, 1}) {
            for (int p = 0; p < pairs_per_case; ++p) {
                const auto [n, N] = sizes[static_cast<std::size_t>(p * 7 + d) % sizes.size()];
                const std::uint64_t seed = 10000 + static_cast<std::uint64_t>(p) * 4;
                RandomOptions ro;
                ro.d = d;
                ro.ops_seed = seed + 3;
                try {
                    const ModelFamily a = random_in_class(cls.label, n, N, seed, ro);
                    const ClassIndex ia = index(a.family, a.ops, cls);
                    RandomOptions rb = ro;
                    if (!ia.trivial()) rb.target = ia.value;
                    const ModelFamily b = random_in_class(cls.label, n, N, seed + 1, rb);
                    HomotopyOptions ho;
                    ho.seed = seed;
                    const Homotopy h = connect(a.family, b.family, a.ops, cls, ho);
                    const HomotopyReport rep = verify_homotopy(h, a.ops, cls, &a.family, &b.family, ho);
                    ++st.pairs;
                    const bool ok = rep.ok && rep.max_step_k <= 0.2 && rep.max_step_s <= 0.2 && rep.endpoint_error <= 1e-8;
                    if (ok) {
                        ++st.connected;
                    } else {
                        st.failures.push_back(cls.name + " d=" + std::to_string(d) + ": " +
                                              (rep.violations.empty() ? "bounds" : rep.violations.front()));
                    }
                    if (d == 1) {
                        for (int q = 1; q <= 9; ++q) {
                            const std::size_t is = static_cast<std::size_t>(std::lround(q * (h.s.size() - 1) / 10.0));
                            ++st.slices_checked;
                            if (!(index(h.slice(is), a.ops, cls) == ia)) ++st.slice_mismatch;
                        }
                    }
                    if (!ia.trivial()) {
                        RandomOptions rc = ro;
                        rc.target = other_value(cls.label, d, ia.value, g);
                        const ModelFamily c = random_in_class(cls.label, n, N, seed + 2, rc);
                        ++st.engineered;
                        if (index(c.family, c.ops, cls) == ia) {
                            st.failures.push_back(cls.name + ": engineered pair has equal index");
                            continue;
                        }
                        try {
                            connect(a.family, c.family, a.ops, cls, ho);
                            st.failures.push_back(cls.name + " d=" + std::to_string(d) + ": different indices connected");
                        } catch (const NotConnected&) {
                            ++st.rejected;
                        }
                    }
                } catch (const std::exception& e) {
                    ++st.pairs;
                    st.failures.push_back(cls.name + " d=" + std::to_string(d) + " (" + std::to_string(n) + "," +
                                          std::to_string(N) + "): " + e.what());
                }
            }
        }
    }
}

// ---------------------------------------------------------------- obstructions

SquareBoundary loop_boundary(int K, int S, int twist, Gen& g) {
    const int n = 1 + static_cast<int>(g() % 4);
    const CMatrix U0 = haar_unitary(n, g);
    CMatrix X1 = cgauss(n, n, g);
    X1 = 0.25 * (X1 - X1.adjoint()) / std::max(1.0, op_norm(X1));
    CMatrix X2 = cgauss(n, n, g);
    X2 = 0.25 * (X2 - X2.adjoint()) / std::max(1.0, op_norm(X2));
    const int L = 2 * (K - 1) + 2 * (S - 1);
    auto gamma = [&](int pos) {
        const double t = static_cast<double>(pos) / L;
        CVector d = CVector::Ones(n);
        d(0) = std::exp(cplx(0.0, 2.0 * kPi * twist * t));
        return CMatrix(U0 * expm_skew(std::sin(2 * kPi * t) * X1 + (1 - std::cos(2 * kPi * t)) * X2) * d.asDiagonal());
    };
    SquareBoundary b;
    b.left.resize(static_cast<std::size_t>(S));
    b.top.resize(static_cast<std::size_t>(K));
    b.right.resize(static_cast<std::size_t>(S));
    b.bottom.resize(static_cast<std::size_t>(K));
    int pos = 0;
    for (int is = 0; is < S; ++is) b.left[static_cast<std::size_t>(is)] = gamma(pos++);
    --pos;
    for (int ik = 0; ik < K; ++ik) b.top[static_cast<std::size_t>(ik)] = gamma(pos++);
    --pos;
    for (int is = S - 1; is >= 0; --is) b.right[static_cast<std::size_t>(is)] = gamma(pos++);
    --pos;
    for (int ik = K - 1; ik >= 0; --ik) b.bottom[static_cast<std::size_t>(ik)] = gamma(pos++);
    b.bottom[0] = b.left[0];
    b.hk = 1.0 / (K - 1);
    b.hs = 1.0 / (S - 1);
    return b;
}

Outcome criterion_obstructions() {
    Outcome o;
    Gen g(5150);
    int rejected = 0;
    int controls = 0;
    for (int t = 0; t < 100; ++t) {
        const SquareBoundary b = loop_boundary(33, 33, t % 2 ? 1 : -1, g);
        try {
            fill_unitary_square(b);
            fail(o, "winding-1 boundary was filled");
        } catch (const WindingObstruction& e) {
            if (std::abs(e.winding()) == 1) ++rejected;
        } catch (const std::exception& e) {
            fail(o, std::string("unexpected error: ") + e.what());
        }
    }
    for (int t = 0; t < 10; ++t) {
        try {
            fill_unitary_square(loop_boundary(33, 33, 0, g));
            ++controls;
        } catch (const std::exception&) {
        }
    }
    const CartanClass& diii = cartan_class(ClassLabel::DIII);
    int parity_ok = 0;
    int equal_pairs = 0;
    for (int t = 0; t < 50; ++t) {
        const int n = 2 * (1 + t % 3);
        RandomOptions ro;
        ro.d = 1;
        ro.ops_seed = 900 + static_cast<std::uint64_t>(t);
        const ModelFamily a = random_in_class(ClassLabel::DIII, n, 2 * n, 3 * static_cast<std::uint64_t>(t) + 1, ro);
        ro.target = std::vector<int>{(g() % 2) ? 1 : -1};
        const ModelFamily b = random_in_class(ClassLabel::DIII, n, 2 * n, 3 * static_cast<std::uint64_t>(t) + 2, ro);
        const bool equal = index(a.family, a.ops, diii) == index(b.family, b.ops, diii);
        equal_pairs += equal ? 1 : 0;
        const int w = boundary_winding(chiral_boundary(a.family, b.family, a.ops, diii));
        if ((w % 2 == 0) == equal) ++parity_ok;
    }
    if (rejected != 100) fail(o, "rejected " + std::to_string(rejected) + "/100");
    if (parity_ok != 50) fail(o, "DIII parity " + std::to_string(parity_ok) + "/50");
    if (o.pass) {
        o.detail = "winding-1 rejected 100/100 (winding-0 controls filled " + std::to_string(controls) +
                   "/10); DIII parity 50/50 (" + std::to_string(equal_pairs) + " equal-index pairs)";
    }
    return o;
}

// ---------------------------------------------------------------- grid refinement

Outcome criterion_refinement() {
    Outcome o;
    int families = 0;
    auto check = [&](const std::string& name, const std::function<ModelFamily(int)>& make, const CartanClass& cls) {
        std::vector<ClassIndex> idx;
        for (int g : {64, 128, 256}) {
            const ModelFamily m = make(g);
            idx.push_back(index(m.family, m.ops, cls));
        }
        if (!(idx[0] == idx[1]) || !(idx[1] == idx[2])) fail(o, name + ": " + idx[0].to_string() + " vs " + idx[2].to_string());
        ++families;
    };
    const CartanClass& D = cartan_class(ClassLabel::D);
    const CartanClass& AIII = cartan_class(ClassLabel::AIII);
    for (double mu : {-3.5, -2.5, -1.5, -0.5, 0.0, 0.5, 1.5, 2.5, 3.5})
        check("kitaev mu=" + std::to_string(mu), [&](int g) { return kitaev_chain(1.0, 1.0, mu, g); }, D);
    for (double t2 : {0.25, 0.5, 1.5, 2.0, 3.0})
        check("ssh t2=" + std::to_string(t2), [&](int g) { return ssh(1.0, t2, g); }, AIII);
    for (const auto& cls : all_classes()) {
        const auto sizes = admissible_sizes(cls, 8);
        for (int seed = 0; seed < 4; ++seed) {
            const auto [n, N] = sizes[static_cast<std::size_t>(seed * 3) % sizes.size()];
            check("random " + cls.name,
                  [&](int g) {
                      RandomOptions ro;
                      ro.d = 1;
                      ro.g = g;
                      return random_in_class(cls.label, n, N, 700 + static_cast<std::uint64_t>(seed), ro);
                  },
                  cls);
        }
    }
    if (o.pass) o.detail = std::to_string(families) + " families at 129/257/513 points";
    return o;
}

template <class F>
Outcome timed(F f, double& seconds) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = f();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
}

void report(int id, const char* name, const Outcome& o, double seconds) {
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << id << " " << name << ": " << o.detail << " [" << std::fixed
              << std::setprecision(1) << seconds << " s]" << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    int pairs = 100;
    if (argc > 1) pairs = std::max(1, std::atoi(argv[1]));
    bool all = true;
    double sec = 0.0;

    Outcome o = timed(criterion_table, sec);
    report(1, "table conformance", o, sec);
    all = all && o.pass;

    o = timed(criterion_factorizations, sec);
    report(2, "factorization suite", o, sec);
    all = all && o.pass;

    o = timed(criterion_models, sec);
    report(3, "model phase diagrams", o, sec);
    all = all && o.pass;

    HomotopyStats st;
    const auto t0 = std::chrono::steady_clock::now();
    std::string crash;
    try {
        homotopy_run(st, pairs);
    } catch (const std::exception& e) {
        crash = e.what();
    }
    sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome h;
    if (!crash.empty()) fail(h, crash);
    if (st.connected != st.pairs) fail(h, std::to_string(st.pairs - st.connected) + " failures, first: " + st.failures.front());
    if (st.rejected != st.engineered) fail(h, "different-index pairs rejected " + std::to_string(st.rejected) + "/" + std::to_string(st.engineered));
    if (h.pass) {
        h.detail = std::to_string(st.connected) + "/" + std::to_string(st.pairs) + " same-index pairs connected and verified; " +
                   std::to_string(st.rejected) + "/" + std::to_string(st.engineered) + " different-index pairs NotConnected";
    }
    report(4, "homotopy soundness and completeness", h, sec);
    all = all && h.pass;

    o = timed(criterion_obstructions, sec);
    report(5, "obstructions", o, sec);
    all = all && o.pass;

    Outcome s;
    if (st.slices_checked == 0 || st.slice_mismatch != 0) fail(s, std::to_string(st.slice_mismatch) + " slices changed index");
    if (s.pass) s.detail = std::to_string(st.slices_checked) + " interior slices, index constant";
    report(6, "index homotopy invariance", s, 0.0);
    all = all && s.pass;

    o = timed(criterion_refinement, sec);
    report(7, "grid refinement stability", o, sec);
    all = all && o.pass;

    return all ? 0 : 1;
}
