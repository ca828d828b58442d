#include "tenfold/indices.hpp"

#include <cmath>
#include <sstream>

namespace tenfold {

namespace {

constexpr double kIntegralityTol = 1e-6;

double sample_tol(const Tolerance& tol) { return std::max(tol.atol, 1e-8); }

int round_checked(double x, const char* what) {
    const double r = std::round(x);
    if (std::abs(x - r) > kIntegralityTol) throw StructureError(what, std::abs(x - r));
    return static_cast<int>(r);
}

int sign_of_unit(cplx z, const char* what) {
    const double s = z.real() > 0.0 ? 1.0 : -1.0;
    const double res = std::abs(z - s);
    if (res > kIntegralityTol) throw StructureError(what, res);
    return static_cast<int>(s);
}

cplx pf_sym(const CMatrix& A, const Tolerance& tol) {
    const CMatrix As = 0.5 * (A - A.transpose());
    return pfaffian(As, PfaffianMethod::automatic, tol);
}

std::vector<CMatrix> slice(const std::vector<CMatrix>& v, std::size_t b, std::size_t e) {
    return std::vector<CMatrix>(v.begin() + static_cast<std::ptrdiff_t>(b), v.begin() + static_cast<std::ptrdiff_t>(e));
}

}  // namespace

PhaseTrack phase_track(const std::vector<CMatrix>& samples, const Tolerance& tol) {
    PhaseTrack t;
    if (samples.empty()) return t;
    const double stol = sample_tol(tol);
    t.alpha.reserve(samples.size());
    cplx prev{};
    for (std::size_t j = 0; j < samples.size(); ++j) {
        const double ures = set_residual(samples[j], SetTag::unitary);
        if (ures > stol) throw StructureError("phase_track: sample is not unitary", ures);
        cplx z = samples[j].determinant();
        z /= std::abs(z);
        if (j == 0) {
            t.alpha.push_back(std::arg(z));
        } else {
            const double step = std::arg(z / prev);
            t.max_step = std::max(t.max_step, std::abs(step));
            if (std::abs(step) >= kMaxPhaseStep) throw GridError("phase_track: grid too coarse for phase tracking");
            t.alpha.push_back(t.alpha.back() + step);
        }
        prev = z;
    }
    return t;
}

int winding(const std::vector<CMatrix>& Q, const Tolerance& tol) {
    if (Q.size() < 2) throw GridError("winding: need at least two samples");
    std::vector<CMatrix> loop = Q;
    if (max_abs(Q.front() - Q.back()) > sample_tol(tol)) loop.push_back(Q.front());
    const PhaseTrack t = phase_track(loop, tol);
    return round_checked((t.alpha.back() - t.alpha.front()) / (2.0 * kPi), "winding: non-integral winding");
}

int semi_winding(const std::vector<CMatrix>& Q, const Tolerance& tol) {
    if (Q.size() < 2) throw GridError("semi_winding: need at least two samples");
    for (const CMatrix* M : {&Q.front(), &Q.back()}) {
        const cplx z = M->determinant();
        const double res = std::min(std::abs(z - 1.0), std::abs(z + 1.0));
        if (res > sample_tol(tol)) throw StructureError("semi_winding: endpoint determinant is not ±1", res);
    }
    const PhaseTrack t = phase_track(Q, tol);
    return round_checked((t.alpha.back() - t.alpha.front()) / kPi, "semi_winding: non-integral half winding");
}

int diii_sign_index(const std::vector<CMatrix>& A, const Tolerance& tol) {
    if (A.size() < 2) throw GridError("diii_sign_index: need at least two samples");
    const PhaseTrack t = phase_track(A, tol);
    auto factor = [&](std::size_t j) {
        const cplx pf = pf_sym(A[j], Tolerance{sample_tol(tol), tol.gap_min});
        const cplx q = std::exp(cplx(0.0, 0.5 * t.alpha[j])) / pf;
        return sign_of_unit(q, "diii_sign_index: quotient is not ±1");
    };
    return factor(0) * factor(A.size() - 1);
}

std::string ClassIndex::to_string() const {
    std::ostringstream os;
    os << tenfold::to_string(label) << " d=" << d << " " << tenfold::to_string(group) << ": ";
    if (value.empty()) {
        os << "0";
    } else if (value.size() == 1) {
        os << value[0];
    } else {
        os << "(" << value[0] << ", " << value[1] << ")";
    }
    if (weak && strong) os << " weak=" << *weak << " strong=" << *strong;
    return os.str();
}

ClassIndex index(const ProjectionFamily& family, const SymmetryOps& ops, const CartanClass& cls,
                 const Tolerance& tol) {
    ClassIndex out;
    out.label = cls.label;
    out.d = family.d;
    out.group = cls.index_group(family.d);
    if (out.group == IndexGroup::trivial) return out;
    if (family.d == 1 && family.size() < 3) throw GridError("index: grid must contain 0 and 1/2");
    const Tolerance stol{sample_tol(tol), tol.gap_min};
    const std::size_t j0 = family.index_k0();
    const std::size_t jh = family.index_khalf();

    switch (cls.label) {
        case ClassLabel::D: {
            const ReducedFamily r = reduce_D(family, ops, tol);
            if (family.d == 0) {
                out.value = {sign_of_unit(pf_sym(r.A[0], stol), "index: Pf(A) is not ±1")};
            } else {
                const int a = sign_of_unit(pf_sym(r.A[j0], stol), "index: Pf(A(0)) is not ±1");
                const int b = sign_of_unit(pf_sym(r.A[jh], stol), "index: Pf(A(1/2)) is not ±1");
                out.value = {a, b};
                out.weak = a;
                out.strong = a * b;
            }
            return out;
        }
        case ClassLabel::AIII:
        case ClassLabel::CII: {
            const ChiralData c = chiral_reduce(family, ops, cls.label, tol);
            out.value = {winding(c.Q, tol)};
            return out;
        }
        case ClassLabel::BDI: {
            const ChiralData c = chiral_reduce(family, ops, cls.label, tol);
            if (family.d == 0) {
                out.value = {round_checked(c.Q[0].determinant().real(), "index: det Q is not ±1")};
            } else {
                const int det0 = round_checked(c.Q[j0].determinant().real(), "index: det Q(0) is not ±1");
                const int deth = round_checked(c.Q[jh].determinant().real(), "index: det Q(1/2) is not ±1");
                const int w = semi_winding(slice(c.Q, j0, jh + 1), tol);
                if (deth != det0 * (w % 2 == 0 ? 1 : -1)) {
                    throw StructureError("index: BDI fixed-point determinants inconsistent with W^{1/2}", double(w));
                }
                out.value = {det0, w};
                out.weak = det0;
                out.strong = w;
                out.fixed_point_dets = std::make_pair(det0, deth);
            }
            return out;
        }
        case ClassLabel::DIII: {
            const ChiralData c = chiral_reduce(family, ops, cls.label, tol);
            const CMatrix Jt = symplectic_J(static_cast<int>(c.Q.front().rows())).transpose();
            std::vector<CMatrix> A;
            for (std::size_t j = j0; j <= jh; ++j) A.push_back(Jt * c.Q[j]);
            out.value = {diii_sign_index(A, tol)};
            return out;
        }
        default:
            break;
    }
    throw StructureError("index: no index rule for " + cls.name);
}

}  // namespace tenfold
