#include "doctest.h"

#include "tenfold/models.hpp"
#include "tenfold/random.hpp"
#include "tenfold/symmetry.hpp"

using namespace tenfold;

TEST_CASE("registry has ten classes with distinct names") {
    const auto& all = all_classes();
    REQUIRE(all.size() == 10);
    for (const auto& c : all) {
        CHECK(parse_class_label(c.name) == c.label);
        CHECK(to_string(c.label) == c.name);
        CHECK(c.has_s == ((c.t_parity != 0 && c.c_parity != 0) || c.label == ClassLabel::AIII));
    }
    CHECK_THROWS(parse_class_label("E"));
}

TEST_CASE("dimension constraints") {
    const CartanClass& diii = cartan_class(ClassLabel::DIII);
    CHECK_FALSE(diii.admits(3, 6));
    CHECK_FALSE(diii.admits(2, 6));
    CHECK(diii.admits(2, 4));
    CHECK_FALSE(cartan_class(ClassLabel::AII).admits(1, 4));
    CHECK_FALSE(cartan_class(ClassLabel::AII).admits(2, 5));
    CHECK(cartan_class(ClassLabel::AII).admits(2, 6));
    CHECK_FALSE(cartan_class(ClassLabel::D).admits(1, 3));
    CHECK(cartan_class(ClassLabel::A).admits(2, 5));
    CHECK(cartan_class(ClassLabel::CII).constraint_violation(4, 8).empty());
    CHECK_FALSE(cartan_class(ClassLabel::CII).constraint_violation(3, 6).empty());
    CHECK_THROWS(random_in_class(ClassLabel::DIII, 3, 6, 1));
}

TEST_CASE("normal form operators satisfy the class relations") {
    for (const auto& c : all_classes()) {
        int n = 2;
        if (c.label == ClassLabel::A || c.label == ClassLabel::AI) n = 1;
        const int N = (c.label == ClassLabel::A || c.label == ClassLabel::AI) ? 3 : 4;
        REQUIRE(c.admits(n, N));
        const SymmetryOps ops = normal_form_ops(c.label, N);
        CHECK(check_ops(ops, c) < 1e-12);
        if (ops.T) CHECK(max_abs(*ops.T * ops.T->conjugate() - double(c.t_parity) * CMatrix::Identity(N, N)) < 1e-12);
        if (ops.C) CHECK(max_abs(*ops.C * ops.C->conjugate() - double(c.c_parity) * CMatrix::Identity(N, N)) < 1e-12);
        if (ops.S) CHECK(max_abs(*ops.S * *ops.S - CMatrix::Identity(N, N)) < 1e-12);
    }
}

TEST_CASE("normal basis recovers the normal form after a basis change") {
    Rng rng(21);
    for (const auto& c : all_classes()) {
        if (c.t_parity == 0 && c.c_parity == 0 && !c.has_s) continue;
        const int N = 4;
        const SymmetryOps ops = transform_ops(normal_form_ops(c.label, N), random_unitary(N, rng));
        const CMatrix B = normal_basis(c.label, ops);
        const SymmetryOps back = transport_ops(ops, B);
        const SymmetryOps want = normal_form_ops(c.label, N);
        if (want.T) CHECK(max_abs(*back.T - *want.T) < 1e-9);
        if (want.C) CHECK(max_abs(*back.C - *want.C) < 1e-9);
        if (want.S) CHECK(max_abs(*back.S - *want.S) < 1e-9);
    }
}

TEST_CASE("make_ops completes S") {
    const SymmetryOps d = normal_form_ops(ClassLabel::BDI, 4);
    const SymmetryOps o = make_ops(4, d.T, d.C);
    REQUIRE(o.S);
    CHECK(max_abs(*o.S - *d.T * d.C->conjugate()) < 1e-14);
}

TEST_CASE("validation of random families in every class") {
    for (const auto& c : all_classes()) {
        const int n = (c.label == ClassLabel::DIII || c.label == ClassLabel::CII || c.label == ClassLabel::AII) ? 2 : 1;
        int N = 2 * n;
        if (c.label == ClassLabel::A || c.label == ClassLabel::AI) N = 3;
        for (int d : {0, 1}) {
            RandomOptions ro;
            ro.d = d;
            ro.g = 32;
            const ModelFamily m = random_in_class(c.label, n, N, 9, ro);
            const ValidationReport r = validate_class(m.family, m.ops, c);
            CHECK_MESSAGE(r.ok, c.name);
        }
    }
}

TEST_CASE("validation reports a broken symmetry") {
    ModelFamily m = kitaev_chain(1.0, 1.0, 1.0, 32);
    const CartanClass& D = cartan_class(ClassLabel::D);
    REQUIRE(validate_class(m.family, m.ops, D).ok);
    CMatrix P = 0.5 * CMatrix::Identity(2, 2);
    P(0, 0) = 1.0;
    P(1, 1) = 0.0;
    m.family.P[3] = P;
    CHECK_FALSE(validate_class(m.family, m.ops, D).ok);
    m = kitaev_chain(1.0, 1.0, 1.0, 32);
    m.family.P[3] = CMatrix::Identity(2, 2);
    const ValidationReport r = validate_class(m.family, m.ops, D);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.violations.empty());
}

TEST_CASE("chiral reduction round trip and reflection") {
    for (ClassLabel label : {ClassLabel::AIII, ClassLabel::BDI, ClassLabel::CI, ClassLabel::DIII, ClassLabel::CII}) {
        const int n = 2;
        RandomOptions ro;
        ro.g = 32;
        const ModelFamily m = random_in_class(label, n, 2 * n, 4, ro);
        const ChiralData cd = chiral_reduce(m.family, m.ops, label);
        const ProjectionFamily back = chiral_expand(cd, m.family.k, 1);
        for (std::size_t j = 0; j < m.family.size(); ++j) CHECK(max_abs(back.P[j] - m.family.P[j]) < 1e-9);
        CHECK(chiral_constraint_residual(label, cd.Q) < 1e-9);
        if (label != ClassLabel::AIII) {
            for (std::size_t j = 0; j < cd.Q.size(); ++j)
                CHECK(max_abs(chiral_reflect(label, cd.Q[j]) - cd.Q[m.family.mirror(j)]) < 1e-9);
        }
    }
}

TEST_CASE("class D and C reductions") {
    const ModelFamily m = kitaev_chain(1.0, 0.7, 0.3, 32);
    const ReducedFamily r = reduce_D(m.family, m.ops);
    for (std::size_t j : {m.family.index_k0(), m.family.index_khalf()}) {
        CHECK(is_real(r.A[j], 1e-9));
        CHECK(max_abs(r.A[j] + r.A[j].transpose()) < 1e-9);
    }
    const ProjectionFamily back = expand_D(r, m.family.k, 1);
    for (std::size_t j = 0; j < m.family.size(); ++j) CHECK(max_abs(back.P[j] - m.family.P[j]) < 1e-9);

    RandomOptions ro;
    ro.g = 32;
    const ModelFamily c = random_in_class(ClassLabel::C, 2, 4, 8, ro);
    const ReducedFamily rc = reduce_C(c.family, c.ops);
    const ProjectionFamily cb = expand_C(rc, c.family.k, 1);
    for (std::size_t j = 0; j < c.family.size(); ++j) CHECK(max_abs(cb.P[j] - c.family.P[j]) < 1e-9);
}

TEST_CASE("k grid") {
    const auto k = k_grid(4);
    REQUIRE(k.size() == 9);
    CHECK(k.front() == doctest::Approx(-0.5));
    CHECK(k[4] == doctest::Approx(0.0));
    CHECK(k.back() == doctest::Approx(0.5));
}
