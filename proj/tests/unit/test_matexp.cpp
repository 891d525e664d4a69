#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "liewn/catalog.hpp"
#include "liewn/liealg.hpp"
#include "liewn/matexp.hpp"
#include "liewn/sun.hpp"
#include "support.hpp"

using namespace liewn;
using namespace liewn::testsupport;
using mexp::ExpClass;

namespace {

const sym::Expr s = sym::Symbol::lambda(1);

/// Transverse matrix of generator i of the algebra built from matrices.
SymMatrix ad(const lie::Algebra& a, std::size_t i) { return lie::transverse_matrix(a, i); }

bool has_eigenvalue(const mexp::Eigenvalues& ev, const sym::Coefficient& v, unsigned mult) {
    for (const auto& [x, m] : ev) {
        if (x == v) return m == mult;
    }
    return false;
}

}  // namespace

TEST_CASE("classification of the three-generator family") {
    const lie::Algebra t = catalog::table1();
    const ExpClass c1 = mexp::classify(ad(t, 1));
    CHECK(c1.tag == ExpClass::Tag::Nilpotent);
    CHECK(c1.degree == 3);
    CHECK(mexp::classify(ad(t, 2)).tag == ExpClass::Tag::Diagonal);
    const ExpClass c3 = mexp::classify(ad(t, 3));
    CHECK(c3.tag == ExpClass::Tag::Nilpotent);
    CHECK(c3.degree == 3);
}

TEST_CASE("Pauli adjoint is spectral with eigenvalues 0, i, -i") {
    const ExpClass c = mexp::classify(ad(catalog::su2_pauli(), 1));
    REQUIRE(c.tag == ExpClass::Tag::Spectral);
    CHECK(c.eigenvalues.size() == 3);
    CHECK(has_eigenvalue(c.eigenvalues, 0, 1));
    CHECK(has_eigenvalue(c.eigenvalues, sym::Coefficient::i(), 1));
    CHECK(has_eigenvalue(c.eigenvalues, -sym::Coefficient::i(), 1));
}

TEST_CASE("exact eigenvalues") {
    SymMatrix upper(3, 3);
    upper(1, 2) = 4;
    upper(2, 3) = -1;
    const mexp::Eigenvalues z = mexp::eigenvalues_exact(upper);
    REQUIRE(z.size() == 1);
    CHECK(z.front().first.is_zero());
    CHECK(z.front().second == 3);

    // ad of the third Gell-Mann matrix (times i/2 conventions aside): eigenvalues in {0, +-i, +-2i}
    const lie::Algebra gm = lie::from_matrix_generators(sun::gellmann_generators().mats);
    const mexp::Eigenvalues ev = mexp::eigenvalues_exact(ad(gm, 3));
    unsigned total = 0;
    for (const auto& [v, m] : ev) {
        total += m;
        const sym::Coefficient i = sym::Coefficient::i();
        const bool on_lattice = v.is_zero() || v == i || v == -i || v == i * 2 || v == -(i * 2) || v == 2 || v == -2 ||
                                v == 1 || v == -1;
        CHECK(on_lattice);
    }
    CHECK(total == 8);

    SymMatrix param(2, 2);
    param(1, 1) = P("upsilon");
    CHECK_THROWS_AS(mexp::eigenvalues_exact(param), UnsupportedForm);
}

TEST_CASE("exponentials of the three-generator transverse matrices") {
    const lie::Algebra t = catalog::table1();
    const SymMatrix b1 = mexp::sym_exp(ad(t, 1), sym::Symbol::lambda(1));
    CHECK(b1(1, 1) == P("1"));
    CHECK(b1(2, 1) == P("-upsilon*L1"));
    CHECK(b1(3, 1) == P("epsilon*upsilon*L1^2"));
    CHECK(b1(3, 2) == P("-2*epsilon*L1"));
    CHECK(b1(1, 2).is_zero());
    const SymMatrix b2 = mexp::sym_exp(ad(t, 2), sym::Symbol::lambda(2));
    CHECK(b2(1, 1) == P("exp(upsilon*L2)"));
    CHECK(b2(2, 2) == P("1"));
    CHECK(b2(3, 3) == P("exp(-upsilon*L2)"));
    CHECK(mexp::sym_exp(SymMatrix(3, 3), s) == SymMatrix::identity(3));
}

TEST_CASE("unsupported symbolic spectral matrices") {
    SymMatrix m(2, 2);
    m(1, 2) = P("upsilon");
    m(2, 1) = 1;
    const ExpClass c = mexp::classify(m);
    CHECK(c.tag == ExpClass::Tag::Unsupported);
    CHECK(!c.reason.empty());
    CHECK_THROWS_AS(mexp::sym_exp(m, s), UnsupportedForm);
}

TEST_CASE("property: exponentials are identity at 0, differentiate correctly and have det exp(s tr M)") {
    std::mt19937_64 rng(5);
    std::vector<SymMatrix> mats;
    for (std::size_t i = 1; i <= 3; ++i) mats.push_back(ad(catalog::su2_pauli(), i));
    for (std::size_t i = 1; i <= 8; ++i) mats.push_back(ad(catalog::su3_cwb(), i));
    for (std::size_t i = 1; i <= 8; i += 3) mats.push_back(ad(lie::from_matrix_generators(sun::gellmann_generators().mats), i));
    for (std::size_t i = 1; i <= 11; ++i) mats.push_back(ad(catalog::coupled_oscillators(), i));

    for (const SymMatrix& m : mats) {
        const SymMatrix e = mexp::sym_exp(m, s);
        const Eigen::MatrixXcd M = numeric(m, {});
        sym::NumericBindings at0{{sym::Symbol::lambda(1), 0.0}};
        CHECK((numeric(e, at0) - Eigen::MatrixXcd::Identity(M.rows(), M.cols())).norm() < 1e-14);

        for (int trial = 0; trial < 3; ++trial) {
            const cplx x = random_cplx(rng);
            const double h = 1e-5;
            auto E = [&](cplx v) { return numeric(e, {{sym::Symbol::lambda(1), v}}); };
            const Eigen::MatrixXcd d = (E(x + h) - E(x - h)) / (2 * h);
            CHECK((d - M * E(x)).norm() < 1e-8 * std::max(1.0, E(x).norm()));
            CHECK(std::abs(E(x).determinant() - std::exp(x * M.trace())) < 1e-10 * std::abs(std::exp(x * M.trace())));
            CHECK((E(x) - Eigen::MatrixXcd(x * M).exp()).norm() < 1e-10 * std::max(1.0, E(x).norm()));
        }
    }
}

TEST_CASE("property: semigroup law for spectral exponentials") {
    std::mt19937_64 rng(9);
    const lie::Algebra gm = lie::from_matrix_generators(sun::gellmann_generators().mats);
    for (std::size_t i : {1, 4, 8}) {
        const SymMatrix e = mexp::sym_exp(ad(gm, i), s);
        REQUIRE(mexp::classify(ad(gm, i)).tag == ExpClass::Tag::Spectral);
        auto E = [&](cplx v) { return numeric(e, {{sym::Symbol::lambda(1), v}}); };
        for (int trial = 0; trial < 5; ++trial) {
            const cplx a = random_cplx(rng), b = random_cplx(rng);
            CHECK((E(a + b) - E(a) * E(b)).norm() < 1e-10);
        }
    }
}
