#include "doctest.h"

#include "tenfold/indices.hpp"
#include "tenfold/models.hpp"
#include "tenfold/random.hpp"

using namespace tenfold;

namespace {

std::vector<CMatrix> scalar_loop(int w, int samples) {
    std::vector<CMatrix> Q;
    for (int i = 0; i < samples; ++i) {
        CMatrix M(1, 1);
        M(0, 0) = std::exp(cplx(0.0, 2.0 * kPi * w * i / samples));
        Q.push_back(M);
    }
    return Q;
}

}  // namespace

TEST_CASE("winding of scalar loops") {
    for (int w = -3; w <= 3; ++w) CHECK(winding(scalar_loop(w, 64)) == w);
}

TEST_CASE("winding is additive under direct sums") {
    const auto a = scalar_loop(2, 64);
    const auto b = scalar_loop(-5, 64);
    std::vector<CMatrix> ab;
    for (std::size_t i = 0; i < a.size(); ++i) {
        CMatrix M = CMatrix::Zero(2, 2);
        M(0, 0) = a[i](0, 0);
        M(1, 1) = b[i](0, 0);
        ab.push_back(M);
    }
    CHECK(winding(ab) == -3);
}

TEST_CASE("winding rejects undersampled loops") {
    CHECK_THROWS_AS(winding(scalar_loop(3, 8)), GridError);
}

TEST_CASE("semi winding") {
    // det goes from 1 at k = 0 to -1 at k = 1/2 through e^{2 pi i k}.
    std::vector<CMatrix> Q;
    for (int i = 0; i <= 32; ++i) {
        CMatrix M = CMatrix::Identity(2, 2);
        M(0, 0) = std::exp(cplx(0.0, 2.0 * kPi * 0.5 * i / 32.0));
        Q.push_back(M);
    }
    CHECK(semi_winding(Q) == 1);
    for (auto& M : Q) M = M.conjugate().eval();
    CHECK(semi_winding(Q) == -1);
}

TEST_CASE("kitaev chain closed form") {
    const CartanClass& D = cartan_class(ClassLabel::D);
    for (double mu : {-3.0, -1.0, 0.0, 1.5, 2.5}) {
        const ModelFamily m = kitaev_chain(1.0, 1.0, mu, 64);
        const ClassIndex idx = index(m.family, m.ops, D);
        // a(0) = -2 - mu, a(1/2) = 2 - mu; the Pfaffian sign at each point is the sign of a.
        const int strong = ((-2.0 - mu) * (2.0 - mu) < 0.0) ? -1 : 1;
        REQUIRE(idx.strong);
        CHECK(*idx.strong == strong);
        CHECK(idx.group == IndexGroup::Z2xZ2);
        CHECK(idx.value[0] * idx.value[1] == strong);
    }
}

TEST_CASE("ssh winding") {
    const CartanClass& AIII = cartan_class(ClassLabel::AIII);
    CHECK(index(ssh(1.0, 2.0, 64).family, ssh(1.0, 2.0, 64).ops, AIII).value == std::vector<int>{-1});
    const ModelFamily triv = ssh(2.0, 1.0, 64);
    CHECK(index(triv.family, triv.ops, AIII).value == std::vector<int>{0});
}

TEST_CASE("targets are realized in every nontrivial class") {
    struct Case {
        ClassLabel label;
        int d, n;
        std::vector<int> target;
    };
    const std::vector<Case> cases = {
        {ClassLabel::BDI, 0, 2, {-1}},      {ClassLabel::D, 0, 2, {-1}},      {ClassLabel::AIII, 1, 2, {3}},
        {ClassLabel::BDI, 1, 2, {-1, 2}},   {ClassLabel::BDI, 1, 3, {1, -1}}, {ClassLabel::D, 1, 2, {1, -1}},
        {ClassLabel::D, 1, 1, {-1, -1}},    {ClassLabel::DIII, 1, 2, {-1}},   {ClassLabel::DIII, 1, 4, {1}},
        {ClassLabel::CII, 1, 2, {2}},       {ClassLabel::CII, 1, 4, {-4}},
    };
    for (const auto& c : cases) {
        RandomOptions ro;
        ro.d = c.d;
        ro.g = 64;
        ro.target = c.target;
        const ModelFamily m = random_in_class(c.label, c.n, 2 * c.n, 31, ro);
        const ClassIndex idx = index(m.family, m.ops, cartan_class(c.label));
        CHECK_MESSAGE(idx.value == c.target, idx.to_string());
    }
}

TEST_CASE("odd class CII targets are rejected") {
    RandomOptions ro;
    ro.target = std::vector<int>{1};
    CHECK_THROWS(random_in_class(ClassLabel::CII, 2, 4, 1, ro));
}

TEST_CASE("BDI detail fields") {
    RandomOptions ro;
    ro.g = 32;
    ro.target = std::vector<int>{-1, 1};
    const ModelFamily m = random_in_class(ClassLabel::BDI, 2, 4, 5, ro);
    const ClassIndex idx = index(m.family, m.ops, cartan_class(ClassLabel::BDI));
    REQUIRE(idx.fixed_point_dets);
    CHECK(idx.fixed_point_dets->first == -1);
    // det Q(1/2) = det Q(0) (-1)^W.
    CHECK(idx.fixed_point_dets->second == 1);
    CHECK(idx.weak == -1);
    CHECK(idx.strong == 1);
}

TEST_CASE("index is invariant under a basis change") {
    Rng rng(41);
    for (const auto& cls : all_classes()) {
        const int n = (cls.label == ClassLabel::DIII || cls.label == ClassLabel::CII || cls.label == ClassLabel::AII) ? 2 : 1;
        int N = 2 * n;
        if (cls.label == ClassLabel::A || cls.label == ClassLabel::AI) N = 3;
        RandomOptions ro;
        ro.g = 48;
        const ModelFamily m = random_in_class(cls.label, n, N, 12, ro);
        const CMatrix U = random_unitary(N, rng);
        const ClassIndex a = index(m.family, m.ops, cls);
        const ClassIndex b = index(transform_family(m.family, U), transform_ops(m.ops, U), cls);
        if (cls.label == ClassLabel::D || cls.label == ClassLabel::BDI) {
            CHECK(a.strong == b.strong);
        } else {
            CHECK_MESSAGE(a == b, cls.name);
        }
    }
}

TEST_CASE("trivial groups report empty values") {
    for (ClassLabel label : {ClassLabel::A, ClassLabel::AI, ClassLabel::AII, ClassLabel::C, ClassLabel::CI}) {
        const CartanClass& cls = cartan_class(label);
        RandomOptions ro;
        ro.g = 48;
        const int n = 2;
        const int N = label == ClassLabel::A || label == ClassLabel::AI || label == ClassLabel::AII ? 6 : 4;
        const ModelFamily m = random_in_class(label, n, N, 3, ro);
        const ClassIndex idx = index(m.family, m.ops, cls);
        CHECK(idx.trivial());
        CHECK(idx.value.empty());
    }
}
