#include <numbers>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "liewn/algebra_io.hpp"
#include "liewn/catalog.hpp"
#include "liewn/propagate.hpp"
#include "liewn/sun.hpp"
#include "liewn/weinorman.hpp"
#include "support.hpp"

using namespace liewn;
using namespace liewn::testsupport;
using prop::CMat;
using prop::EtaBinding;
using std::numbers::pi;

namespace {

const cplx I(0, 1);

const wn::ODESystem& su2_system() {
    static const wn::ODESystem s = wn::decoupled_odes(catalog::su2_cwb());
    return s;
}

CMat unitary_of(const sun::GeneratorSet& g, const prop::Trajectory& t) {
    return prop::assemble_teo_numeric(prop::numeric_generators(g), t.final_state());
}

/// exp(-i H t) for Hermitian H through its eigen decomposition.
CMat hermitian_propagator(const CMat& H, double t) {
    Eigen::SelfAdjointEigenSolver<CMat> es(H);
    const Eigen::VectorXcd phases = (-I * t * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

TEST_CASE("tapes evaluate like the expression evaluator") {
    std::mt19937_64 rng(41);
    const sym::Expr e = P("3*L1^2*exp(2*L2 - i*L3) + eta1*L1 - upsilon/2 + sqrt(2)*exp(-L2)");
    prop::SlotMap slots;
    std::uint32_t k = 0;
    for (const sym::Symbol& s : e.free_symbols()) slots[s] = k++;
    const prop::Tape tape = prop::compile(e, slots);
    for (int trial = 0; trial < 20; ++trial) {
        const sym::NumericBindings b = random_bindings(rng, {e});
        std::vector<cplx> v(slots.size());
        for (const auto& [s, idx] : slots) v[idx] = b.at(s);
        CHECK(std::abs(tape.eval(v) - sym::eval_numeric(e, b)) < 1e-12);
    }
    slots.erase(sym::Symbol::lambda(3));
    CHECK_THROWS_AS(prop::compile(e, slots), UnboundSymbol);
    CHECK(prop::compile(sym::Expr(0), {}).eval({}) == cplx(0));
}

TEST_CASE("numeric literals") {
    CHECK(std::abs(prop::parse_complex("1-2i") - cplx(1, -2)) < 1e-15);
    CHECK(std::abs(prop::parse_complex("ln2-i*pi") - cplx(std::log(2.0), -pi)) < 1e-15);
    CHECK(std::abs(prop::parse_complex("sqrt(2)/2") - std::sqrt(0.5)) < 1e-15);
    CHECK(std::abs(prop::parse_complex("exp(i*pi/4)") - std::polar(1.0, pi / 4)) < 1e-15);
    CHECK(std::abs(prop::parse_complex("2^3 - e") - (8 - std::numbers::e)) < 1e-15);
    CHECK(std::abs(prop::parse_complex("-(1+i)*cos(0)") - cplx(-1, -1)) < 1e-15);
    const std::vector<cplx> h = prop::parse_complex_list("-1, ln2-i*pi, -1");
    REQUIRE(h.size() == 3);
    CHECK(h[0] == cplx(-1));
    CHECK_THROWS_AS(prop::parse_complex("1 +"), ParseError);
    CHECK_THROWS_AS(prop::parse_complex("foo(1)"), ParseError);
    CHECK_THROWS_AS(prop::parse_complex("(1"), ParseError);
}

TEST_CASE("eta bindings") {
    const EtaBinding c = EtaBinding::parse("const:1, 2i, 0");
    CHECK(c.size() == 3);
    CHECK(c.is_constant());
    CHECK(c(1, 5.0) == cplx(0, 2));

    const EtaBinding j = EtaBinding::parse(R"({"eta": [
        2,
        [1, -1],
        "i*pi",
        {"type": "polynomial", "coefficients": [1, 0, [0, 3]]},
        {"type": "sinusoid", "amplitude": 2, "omega": 3, "phase": 0.5, "offset": [0, 1]},
        {"type": "tabulated", "t": [0, 1, 2, 3, 4], "values": [0, 1, 4, 9, 16]},
        {"type": "tabulated", "t": [0, 1], "values": [0, [2, 2]]}
    ]})");
    REQUIRE(j.size() == 7);
    CHECK(!j.is_constant());
    CHECK(j(0, 1.0) == cplx(2));
    CHECK(j(1, 1.0) == cplx(1, -1));
    CHECK(std::abs(j(2, 0.0) - cplx(0, pi)) < 1e-15);
    CHECK(std::abs(j(3, 2.0) - cplx(1, 12)) < 1e-14);
    CHECK(std::abs(j(4, 0.7) - (2.0 * std::sin(3 * 0.7 + 0.5) + I)) < 1e-14);
    for (int k = 0; k <= 4; ++k) CHECK(std::abs(j(5, k) - cplx(k * k)) < 1e-14);
    CHECK(std::abs(j(5, -1.0) - 0.0) < 1e-14);
    CHECK(std::abs(j(5, 9.0) - 16.0) < 1e-14);
    CHECK(std::abs(j(6, 0.25) - cplx(0.5, 0.5)) < 1e-14);

    std::vector<cplx> out(7);
    j.eval(2.0, out);
    CHECK(out[5] == j(5, 2.0));

    CHECK(EtaBinding::parse("[1, 2]").size() == 2);
}

TEST_CASE("eta binding schema errors") {
    auto pointer = [](const char* text) -> std::string {
        try {
            EtaBinding::parse(text);
        } catch (const io::SchemaError& e) {
            return e.pointer;
        }
        return "<no error>";
    };
    CHECK(pointer(R"({"eta": [1, {"type": "wave"}]})") == "/eta/1/type");
    CHECK(pointer(R"({"eta": [{"type": "sinusoid"}]})") == "/eta/0/amplitude");
    CHECK(pointer(R"({"eta": [{"type": "tabulated", "t": [0, 0], "values": [1, 2]}]})") == "/eta/0/t/1");
    CHECK(pointer(R"({"eta": [{"type": "tabulated", "t": [0, 1], "values": [1]}]})") == "/eta/0/values");
    CHECK(pointer(R"({"eta": ["1 +"]})") == "/eta/0");
    CHECK(pointer(R"({"eta": 3})") == "/eta");
    CHECK(pointer(R"({"x": 3})") == "/eta");
    CHECK(pointer("{ not json") == "");
    CHECK_THROWS_AS(EtaBinding::parse("/nonexistent/eta.json"), Error);
    CHECK_THROWS_AS(EtaBinding::parse("const:1,,2"), ParseError);
}

TEST_CASE("su(2) trajectories") {
    const double delta = 0.8;
    prop::IntegrateOptions opts;
    opts.samples = 11;
    const prop::Trajectory t = prop::integrate(su2_system(), EtaBinding::constant({0, delta, 0}), 0, pi / (4 * delta), opts);
    CHECK(t.grid.size() == 11);
    CHECK(std::abs(t.final_state()[0]) < 1e-14);
    CHECK(std::abs(t.final_state()[1] + I * pi / 4.0) < 1e-10);
    CHECK(std::abs(t.final_state()[2]) < 1e-14);
    CHECK(t.det.front() == cplx(1, 0));
    for (cplx z : t.states.front()) CHECK(z == cplx(0));

    // CWB Cartan diag(1,-1): L2 = -ln cos; the qubit basis diag(1/2,-1/2) doubles it
    const double eta = 1.1;
    const prop::Trajectory r = prop::integrate(su2_system(), EtaBinding::constant({eta, 0, eta}), 0, 1.2, opts);
    const wn::ODESystem qs = wn::decoupled_odes(sun::algebra(sun::qubit_generators()));
    const prop::Trajectory q = prop::integrate(qs, EtaBinding::constant({eta, 0, eta}), 0, 1.2, opts);
    for (std::size_t k = 0; k < r.grid.size(); ++k) {
        const double x = eta * r.grid[k];
        CHECK(std::abs(r.states[k][0] + I * std::tan(x)) < 1e-8);
        CHECK(std::abs(r.states[k][2] + I * std::tan(x)) < 1e-8);
        CHECK(std::abs(r.states[k][1] + std::log(std::cos(x))) < 1e-8);
        CHECK(std::abs(q.states[k][1] + 2.0 * std::log(std::cos(x))) < 1e-8);
        CHECK(std::abs(q.states[k][0] + I * std::tan(x)) < 1e-8);
    }

    const prop::Trajectory z = prop::integrate(su2_system(), EtaBinding::constant({0, 0, 0}), 0, 3, opts);
    for (const auto& s : z.states) {
        for (cplx v : s) CHECK(v == cplx(0));
    }
    CHECK(prop::residual_check(catalog::su2_cwb(), z, EtaBinding::constant({0, 0, 0})) == 0);
}

TEST_CASE("integration errors and events") {
    // L1 = -i tan(t) blows up at t = pi/2, where det xi = cos^2 t vanishes
    try {
        prop::integrate(su2_system(), EtaBinding::constant({1, 0, 1}), 0, 2.0);
        FAIL("expected an integration error");
    } catch (const prop::IntegrationError& e) {
        const prop::Trajectory& p = e.partial;
        REQUIRE(!p.grid.empty());
        CHECK(p.grid.back() < pi / 2);
        REQUIRE(!p.events.empty());
        CHECK(p.events.back().kind == prop::Event::Kind::StepFailure);
        bool warned = false;
        for (const auto& ev : p.events) warned |= ev.kind == prop::Event::Kind::SingularityWarning;
        CHECK(warned);
    }
    CHECK_THROWS_AS(prop::integrate(su2_system(), EtaBinding::constant({1, 0}), 0, 1), IndexError);
    CHECK_THROWS_AS(prop::integrate(su2_system(), EtaBinding::constant({1, 0, 1}), 1, 1), Error);

    prop::IntegrateOptions two;
    two.samples = 2;
    const prop::Trajectory t = prop::integrate(su2_system(), EtaBinding::constant({0, 1, 0}), 0, 1, two);
    CHECK_THROWS_AS(prop::residual_check(catalog::su2_cwb(), t, EtaBinding::constant({0, 1, 0})), Error);
}

TEST_CASE("trajectory JSON export") {
    prop::IntegrateOptions opts;
    opts.samples = 3;
    const prop::Trajectory t = prop::integrate(su2_system(), EtaBinding::constant({0.2, 0.1, 0.2}), 0, 1, opts);
    const nlohmann::json j = t.to_json();
    CHECK(j.at("grid").size() == 3);
    CHECK(j.at("lambdas").size() == 3);
    CHECK(j.at("lambdas")[0].size() == 3);
    CHECK(j.at("lambdas")[0][0] == nlohmann::json::array({0.0, 0.0}));
    CHECK(j.at("det")[0] == nlohmann::json::array({1.0, 0.0}));
    CHECK(j.at("events").is_array());
}

TEST_CASE("matrix oracles") {
    const std::vector<CMat> g = prop::numeric_generators(sun::sun_generators(2));
    CHECK((prop::direct_exponential(g, {0.3, 1, 0.2}, 0) - CMat::Identity(2, 2)).norm() < 1e-15);
    CHECK((prop::matrix_oracle(g, EtaBinding::constant({0, 0, 0}), 0, 2) - CMat::Identity(2, 2)).norm() < 1e-15);

    const double delta = 0.6;
    CMat tg(2, 2);
    tg << std::polar(1.0, -pi / 4), 0, 0, std::polar(1.0, pi / 4);
    CHECK((prop::direct_exponential(g, {0, delta, 0}, pi / (4 * delta)) - tg).norm() < 1e-14);

    const double eta = 0.9;
    const CMat x = prop::direct_exponential(g, {eta, 0, eta}, pi / (2 * eta));
    const prop::GateCheck xc = prop::verify_gate(x, prop::gate("x"), 1e-12);
    CHECK(xc.pass);

    // Rabi: H = (Omega/2)(E12 + E21) + Delta diag(1,-1)
    const double omega = 1.3;
    const std::vector<cplx> eh{omega / 2, delta, omega / 2};
    CMat H = CMat::Zero(2, 2);
    for (std::size_t l = 0; l < 3; ++l) H += eh[l] * g[l];
    for (double t : {0.4, 1.7, 3.0}) {
        const CMat closed = hermitian_propagator(H, t);
        CHECK((prop::direct_exponential(g, eh, t) - closed).norm() < 1e-12);
        CHECK((prop::matrix_oracle(g, EtaBinding::constant(eh), 0, t) - closed).norm() < 1e-9);
    }
}

TEST_CASE("numeric TEO assembly") {
    const sun::GeneratorSet q = sun::qubit_generators();
    const std::vector<CMat> g = prop::numeric_generators(q);
    CHECK((prop::assemble_teo_numeric(g, std::vector<cplx>(3)) - CMat::Identity(2, 2)).norm() < 1e-15);

    const std::vector<cplx> h{-1, std::log(2.0) - I * pi, -1};
    CMat want(2, 2);
    want << -1, -1, -1, 1;
    want /= std::sqrt(2.0);
    const CMat u = prop::qubit_gate_form(h);
    CHECK((u - want).norm() < 1e-14);
    const prop::GateCheck hc = prop::verify_gate(u, prop::gate("hadamard"), 1e-8);
    CHECK(hc.pass);
    CHECK(std::abs(hc.phase + 1.0) < 1e-14);

    // generic product against the matrix exponentials
    std::mt19937_64 rng(43);
    const sun::GeneratorSet s3 = sun::sun_generators(3);
    const std::vector<CMat> g3 = prop::numeric_generators(s3);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<cplx> lam(8);
        for (auto& v : lam) v = random_cplx(rng, 1.0);
        CMat prod = CMat::Identity(3, 3);
        for (std::size_t l = 0; l < 8; ++l) prod = prod * CMat(lam[l] * g3[l]).exp();
        CHECK((prop::assemble_teo_numeric(g3, lam) - prod).norm() < 1e-12);
    }
}

TEST_CASE("gate verification") {
    const CMat x = prop::gate("x");
    const prop::GateCheck c = prop::verify_gate(I * x, x, 1e-12);
    CHECK(c.pass);
    CHECK(std::abs(c.phase - I) < 1e-15);
    CHECK(c.residual < 1e-15);

    const prop::GateCheck wrong = prop::verify_gate(prop::gate("z"), x, 1e-8);
    CHECK(!wrong.pass);

    CHECK_THROWS_AS(prop::verify_gate(CMat::Identity(2, 2), prop::gate("cnot"), 1e-8), Error);
    CHECK_THROWS_AS(prop::gate("swap"), Error);
    CHECK(prop::gate("H").isApprox(prop::gate("hadamard")));
    CHECK((prop::gate("cnot") * prop::gate("cnot") - CMat::Identity(4, 4)).norm() < 1e-15);
}

TEST_CASE("T gate from a trajectory") {
    const double delta = 1.0;
    const wn::ODESystem qs = wn::decoupled_odes(sun::algebra(sun::qubit_generators()));
    const prop::Trajectory t = prop::integrate(qs, EtaBinding::constant({0, delta, 0}), 0, pi / (4 * delta));
    const prop::GateCheck c = prop::verify_gate(prop::qubit_gate_form(t.final_state()), prop::gate("t"), 1e-8);
    CHECK(c.pass);
    CHECK(std::abs(c.phase - std::polar(1.0, -pi / 4)) < 1e-8);
}

TEST_CASE("property: decoupled flow reproduces the matrix flow") {
    std::mt19937_64 rng(47);
    for (std::size_t N : {2, 3}) {
        CAPTURE(N);
        const sun::GeneratorSet g = sun::sun_generators(N);
        const wn::ODESystem sys = wn::decoupled_odes(sun::algebra(g));
        const std::vector<CMat> m = prop::numeric_generators(g);
        for (int trial = 0; trial < 5; ++trial) {
            std::vector<cplx> eta(g.order());
            for (auto& v : eta) v = random_cplx(rng, 0.5);
            const EtaBinding b = EtaBinding::constant(eta);
            const CMat u = unitary_of(g, prop::integrate(sys, b, 0, 1));
            CHECK((u - prop::matrix_oracle(m, b, 0, 1)).norm() < 1e-8);
            CHECK((u - prop::direct_exponential(m, eta, 1)).norm() < 1e-8);
        }
    }

    // time-dependent drive, compared only with the matrix ODE
    const sun::GeneratorSet g = sun::sun_generators(2);
    const EtaBinding drive(std::vector<prop::TimeFunction>{prop::Sinusoid{0.4, 2.0, 0.1, 0.0},
                                                           prop::Polynomial{{0.2, cplx(0, 0.3)}},
                                                           prop::Sinusoid{cplx(0, 0.3), 1.5, 0.0, 0.1}});
    const CMat u = unitary_of(g, prop::integrate(su2_system(), drive, 0, 1.5));
    CHECK((u - prop::matrix_oracle(prop::numeric_generators(g), drive, 0, 1.5)).norm() < 1e-8);
}

TEST_CASE("property: tighter tolerances reduce the cross-oracle error") {
    const sun::GeneratorSet g = sun::sun_generators(2);
    const std::vector<CMat> m = prop::numeric_generators(g);
    const std::vector<cplx> eta{0.7, cplx(0.3, 0.2), cplx(-0.4, 0.5)};
    const CMat exact = prop::direct_exponential(m, eta, 2);
    auto error = [&](double rtol) {
        prop::IntegrateOptions o;
        o.rtol = rtol;
        o.atol = rtol * 1e-2;
        o.samples = 2;
        return (unitary_of(g, prop::integrate(su2_system(), EtaBinding::constant(eta), 0, 2, o)) - exact).norm();
    };
    const double coarse = error(1e-5);
    const double fine = error(1e-9);
    CHECK(fine < coarse);
    CHECK(fine < 1e-7);
}

TEST_CASE("residual oracle on abstract algebras") {
    const lie::Algebra osc = catalog::coupled_oscillators();
    const wn::ODESystem sys = wn::decoupled_odes(osc);
    std::vector<prop::TimeFunction> fns;
    for (std::size_t l = 0; l < 11; ++l) {
        fns.emplace_back(prop::Sinusoid{cplx(0.1, 0.05 * static_cast<double>(l % 3)), 1.0 + 0.1 * static_cast<double>(l), 0.3,
                                        cplx(0.05, 0)});
    }
    const EtaBinding eta(fns);
    prop::IntegrateOptions opts;
    opts.samples = 401;
    const prop::Trajectory t = prop::integrate(sys, eta, 0, 1, opts);
    CHECK(prop::residual_check(osc, t, eta) < 1e-6);

    const prop::Trajectory s = prop::integrate(su2_system(), EtaBinding::constant({0.3, 0.2, -0.1}), 0, 1, opts);
    CHECK(prop::residual_check(catalog::su2_cwb(), s, EtaBinding::constant({0.3, 0.2, -0.1})) < 1e-6);
    // a wrong drive is detected
    CHECK(prop::residual_check(catalog::su2_cwb(), s, EtaBinding::constant({0.3, 0.25, -0.1})) > 1e-2);
}

TEST_CASE("property: Hermitian su(2) flows satisfy the unitarity constraints") {
    std::mt19937_64 rng(53);
    const wn::ODESystem qs = wn::decoupled_odes(sun::algebra(sun::qubit_generators()));
    for (int trial = 0; trial < 5; ++trial) {
        const cplx e1 = random_cplx(rng, 1.0);
        const double e2 = std::uniform_real_distribution<double>(-1, 1)(rng);
        prop::IntegrateOptions opts;
        opts.samples = 21;
        const prop::Trajectory t = prop::integrate(qs, EtaBinding::constant({e1, e2, std::conj(e1)}), 0, 1, opts);
        for (const auto& s : t.states) CHECK(wn::unitarity_check_su2(s[0], s[1], s[2], 1e-8).pass());
    }
}
