#include "doctest.h"

#include "tenfold/indices.hpp"
#include "tenfold/models.hpp"

using namespace tenfold;

TEST_CASE("kitaev hamiltonian closed form") {
    const double t = 0.8, delta = 0.6, mu = 0.3;
    for (double k : {-0.4, -0.1, 0.0, 0.25, 0.5}) {
        const CMatrix H = kitaev_hamiltonian(t, delta, mu, k);
        const double a = -2 * t * std::cos(2 * kPi * k) - mu;
        const double b = 2 * delta * std::sin(2 * kPi * k);
        const EigResult e = hermitian_eig(H);
        CHECK(e.values(0) == doctest::Approx(-std::hypot(a, b)));
        CHECK(e.values(1) == doctest::Approx(std::hypot(a, b)));
        CHECK(H(0, 0).real() == doctest::Approx(a));
        CHECK(std::abs(H(0, 1) - cplx(0.0, -b)) < 1e-12);
    }
}

TEST_CASE("kitaev particle-hole symmetry") {
    const ModelFamily m = kitaev_chain(1.0, 1.0, 1.0, 32);
    REQUIRE(m.ops.C);
    const CMatrix& C = *m.ops.C;
    for (double k : {0.1, 0.3, 0.45}) {
        const CMatrix H = kitaev_hamiltonian(1.0, 1.0, 1.0, k);
        CHECK(max_abs(C * H.conjugate() * C.adjoint() + kitaev_hamiltonian(1.0, 1.0, 1.0, -k)) < 1e-12);
    }
    CHECK(m.family.size() == 65);
    CHECK(m.family.n == 1);
}

TEST_CASE("gap closings are reported") {
    CHECK_THROWS_AS(kitaev_chain(1.0, 1.0, 2.0, 32), GapClosed);
    CHECK_THROWS_AS(kitaev_chain(1.0, 1.0, -2.0, 32), GapClosed);
    CHECK_THROWS_AS(ssh(1.0, 1.0, 32), GapClosed);
    try {
        kitaev_chain(1.0, 1.0, -2.0, 32);
    } catch (const GapClosed& e) {
        CHECK(e.k() == doctest::Approx(0.0));
        CHECK(e.gap() < 1e-6);
    }
}

TEST_CASE("ssh block and phase") {
    for (double k : {-0.3, 0.0, 0.2}) {
        const CMatrix H = ssh_hamiltonian(1.0, 2.0, k);
        const cplx q = 1.0 + 2.0 * std::exp(cplx(0.0, -2.0 * kPi * k));
        CHECK(std::abs(H(0, 0)) < 1e-14);
        CHECK(std::abs(H(1, 1)) < 1e-14);
        CHECK(std::abs(std::abs(H(0, 1)) - std::abs(q)) < 1e-12);
        CHECK(max_abs(H - H.adjoint()) < 1e-14);
    }
}

TEST_CASE("family from hamiltonians") {
    std::vector<CMatrix> H;
    const auto k = k_grid(32);
    for (double kk : k) H.push_back(kitaev_hamiltonian(1.0, 1.0, 0.5, kk));
    const ProjectionFamily f = family_from_hamiltonians(H, k, 1, 0.0, 1e-6);
    const ModelFamily m = kitaev_chain(1.0, 1.0, 0.5, 32);
    REQUIRE(f.size() == m.family.size());
    for (std::size_t j = 0; j < f.size(); ++j) CHECK(max_abs(f.P[j] - m.family.P[j]) < 1e-12);
    CHECK_THROWS_AS(family_from_hamiltonians(H, k_grid(8), 1, 0.0, 1e-6), DimensionError);
}

TEST_CASE("generation is deterministic") {
    ModelSpec spec;
    spec.name = "random-class";
    spec.class_name = "DIII";
    spec.params = {{"n", 2}, {"d", 1}};
    spec.g = 32;
    spec.seed = 99;
    const ModelFamily a = generate(spec);
    const ModelFamily b = generate(spec);
    for (std::size_t j = 0; j < a.family.size(); ++j) CHECK((a.family.P[j].array() == b.family.P[j].array()).all());
    CHECK((a.ops.T->array() == b.ops.T->array()).all());
    spec.seed = 100;
    const ModelFamily c = generate(spec);
    CHECK(max_abs(c.family.P[3] - a.family.P[3]) > 1e-6);
}

TEST_CASE("shared operator seed gives shared operators") {
    RandomOptions ro;
    ro.g = 32;
    ro.ops_seed = 5;
    const ModelFamily a = random_in_class(ClassLabel::CI, 2, 4, 1, ro);
    const ModelFamily b = random_in_class(ClassLabel::CI, 2, 4, 2, ro);
    CHECK(max_abs(*a.ops.T - *b.ops.T) < 1e-14);
    CHECK(max_abs(*a.ops.C - *b.ops.C) < 1e-14);
}

TEST_CASE("generate rejects unknown models") {
    ModelSpec spec;
    spec.name = "hofstadter";
    CHECK_THROWS_AS(generate(spec), std::invalid_argument);
}
