#include <random>
#include <set>

#include "doctest.h"
#include "liewn/fixtures.hpp"
#include "liewn/propagate.hpp"
#include "liewn/sun.hpp"
#include "support.hpp"

using namespace liewn;
using namespace liewn::testsupport;
using Role = sun::GeneratorLabel::Role;

namespace {

CMatrix unit(std::size_t N, std::size_t r, std::size_t c) {
    CMatrix m(N, N);
    m.at(r - 1, c - 1) = 1;
    return m;
}

CMatrix cartan(std::size_t N, std::size_t j) {
    CMatrix m(N, N);
    m.at(j - 1, j - 1) = 1;
    m.at(j, j) = -1;
    return m;
}

}  // namespace

TEST_CASE("index maps are integral bijections onto the root ranges") {
    for (std::size_t N = 2; N <= 6; ++N) {
        CAPTURE(N);
        const std::size_t half = N * (N - 1) / 2;
        std::set<std::int64_t> pos, neg;
        for (std::size_t n = 1; n <= N; ++n) {
            for (std::size_t k = n + 1; k <= N; ++k) {
                const sym::Rational r = sun::f1(n, k, N);
                REQUIRE(r.is_integer());
                pos.insert(r.num());
            }
            for (std::size_t k = 1; k < n; ++k) {
                const sym::Rational r = sun::f2(n, k);
                REQUIRE(r.is_integer());
                neg.insert(r.num());
            }
        }
        CHECK(pos.size() == half);
        CHECK(*pos.begin() == 1);
        CHECK(*pos.rbegin() == static_cast<std::int64_t>(half));
        CHECK(neg.size() == half);
        CHECK(*neg.begin() == 1);
        CHECK(*neg.rbegin() == static_cast<std::int64_t>(half));
    }
}

TEST_CASE("Cartan-Weyl generator counts and ordering") {
    for (std::size_t N = 2; N <= 5; ++N) {
        CAPTURE(N);
        const sun::GeneratorSet g = sun::sun_generators(N);
        REQUIRE(g.order() == N * N - 1);
        std::size_t roots = 0, cartans = 0, lowers = 0;
        int phase = 0;
        for (std::size_t l = 0; l < g.order(); ++l) {
            const Role r = g.labels[l].role;
            const int p = r == Role::PositiveRoot ? 0 : r == Role::Cartan ? 1 : 2;
            CHECK(p >= phase);
            phase = p;
            roots += r == Role::PositiveRoot;
            cartans += r == Role::Cartan;
            lowers += r == Role::NegativeRoot;
            sym::Coefficient tr;
            for (std::size_t d = 0; d < N; ++d) tr = tr + g.mats[l].at(d, d);
            CHECK(tr.is_zero());
        }
        CHECK(cartans == N - 1);
        CHECK(roots == N * (N - 1) / 2);
        CHECK(lowers == N * (N - 1) / 2);
        CHECK(lie::validate(sun::algebra(g)).empty());
    }
    CHECK_THROWS_AS(sun::sun_generators(1), Error);
}

TEST_CASE("explicit Cartan-Weyl generators") {
    const sun::GeneratorSet s2 = sun::sun_generators(2);
    CHECK(s2.mats == std::vector<CMatrix>{unit(2, 1, 2), cartan(2, 1), unit(2, 2, 1)});

    const sun::GeneratorSet s3 = sun::sun_generators(3);
    const std::vector<CMatrix> want3{unit(3, 1, 2), unit(3, 1, 3), unit(3, 2, 3), cartan(3, 1),
                                     cartan(3, 2),  unit(3, 2, 1), unit(3, 3, 1), unit(3, 3, 2)};
    CHECK(s3.mats == want3);

    const sun::GeneratorSet s4 = sun::sun_generators(4);
    CHECK(s4.mats[0] == unit(4, 1, 2));
    CHECK(s4.mats[14] == unit(4, 4, 3));
    CHECK(s4.mats[5] == unit(4, 3, 4));
    CHECK(s4.mats[6] == cartan(4, 1));
}

TEST_CASE("Gell-Mann matrices") {
    const sun::GeneratorSet g = sun::gellmann_generators();
    REQUIRE(g.order() == 8);
    const sym::Coefficient r3 = sym::Coefficient::sqrt(3);
    CHECK(g.mats[7].at(0, 0) == r3.inverse());
    CHECK(g.mats[7].at(1, 1) == r3.inverse());
    CHECK(g.mats[7].at(2, 2) == sym::Coefficient(-2) * r3.inverse());
    for (const CMatrix& m : g.mats) {
        const Eigen::MatrixXcd x = numeric(m);
        CHECK((x - x.adjoint()).norm() < 1e-15);
        CHECK(std::abs(x.trace()) < 1e-15);
    }
}

TEST_CASE("explicit TEO for su(2)") {
    const SymMatrix u = sun::explicit_teo(sun::sun_generators(2));
    CHECK(u(1, 1) == P("exp(L2) + L1*L3*exp(-L2)"));
    CHECK(u(1, 2) == P("L1*exp(-L2)"));
    CHECK(u(2, 1) == P("L3*exp(-L2)"));
    CHECK(u(2, 2) == P("exp(-L2)"));
    CHECK(fixtures::compare_matrix(fixtures::su2_cwb_teo(), u).pass);

    sym::Substitution zero;
    for (std::uint32_t l = 1; l <= 3; ++l) zero[sym::Symbol::lambda(l)] = sym::Expr(0);
    SymMatrix id(2, 2);
    for (std::size_t r = 1; r <= 2; ++r) {
        for (std::size_t c = 1; c <= 2; ++c) id(r, c) = sym::substitute(u(r, c), zero);
    }
    CHECK(id == SymMatrix::identity(2));
}

TEST_CASE("explicit TEO for su(3) and su(4)") {
    const SymMatrix u3 = sun::explicit_teo(sun::sun_generators(3));
    CHECK(u3(3, 3) == P("exp(-L5)"));
    CHECK(fixtures::compare_matrix(fixtures::su3_cwb_teo(), u3).pass);
    CHECK(fixtures::compare_matrix(fixtures::su4_cwb_teo(), sun::explicit_teo(sun::sun_generators(4))).pass);
}

TEST_CASE("property: explicit TEO has unit determinant and matches the numeric product") {
    std::mt19937_64 rng(37);
    for (std::size_t N = 2; N <= 4; ++N) {
        CAPTURE(N);
        const sun::GeneratorSet g = sun::sun_generators(N);
        const SymMatrix u = sun::explicit_teo(g);
        const std::vector<prop::CMat> m = prop::numeric_generators(g);
        for (int trial = 0; trial < 10; ++trial) {
            const sym::NumericBindings b = random_bindings(rng, entries(u), 0.8);
            const Eigen::MatrixXcd x = numeric(u, b);
            CHECK(std::abs(x.determinant() - 1.0) < 1e-10);
            std::vector<cplx> lam(g.order());
            for (std::size_t l = 0; l < lam.size(); ++l) {
                const auto it = b.find(sym::Symbol::lambda(static_cast<std::uint32_t>(l + 1)));
                lam[l] = it == b.end() ? cplx(0) : it->second;
            }
            CHECK((x - prop::assemble_teo_numeric(m, lam)).norm() < 1e-10);
        }
    }
}
