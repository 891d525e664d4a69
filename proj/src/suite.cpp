#include "liewn/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include "liewn/catalog.hpp"
#include "liewn/fixtures.hpp"
#include "liewn/propagate.hpp"
#include "liewn/sun.hpp"

namespace liewn::fixtures {

namespace {

using prop::cplx;

CheckResult from(const Comparison& c) { return {{}, c.pass, c.summary(), 0}; }

CheckResult system_check(const SystemFixture& f) {
    wn::ODESystem s = derive(f);
    return from(compare_system(f, s.rhs, s.coupling.det));
}

std::string fmt(double x) {
    std::ostringstream os;
    os << std::setprecision(3) << x;
    return os.str();
}

std::string fmt(cplx z) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return os.str();
}

CheckResult table1_b() {
    const wn::BCHMatrixSet b = wn::bch_matrices(catalog::table1());
    CheckResult r{{}, true, "match", 0};
    for (std::size_t k = 0; k < 3; ++k) {
        Comparison c = compare_matrix(table1_bch()[k], b[k + 1]);
        if (!c.pass) {
            r.pass = false;
            r.detail = "b" + std::to_string(k + 1) + ": " + c.summary();
        }
    }
    return r;
}

CheckResult pauli_inverse() {
    const wn::Inverse inv = wn::invert(wn::coupling_matrix(catalog::su2_pauli()).xi);
    return from(compare_matrix(pauli_xi_inverse(), inv.num, inv.den));
}

CheckResult pauli_det() {
    const sym::Expr det = wn::coupling_matrix(catalog::su2_pauli()).det;
    const sym::Expr want = expected_expr("(exp(i*Th2) + exp(-i*Th2))/2");
    const std::string tex = sym::latex(det);
    const bool pass = det == want && tex == "\\cos(\\Theta_{2})";
    return {{}, pass, pass ? "match, renders " + tex : "got " + sym::text(det) + ", renders " + tex, 0};
}

CheckResult su3_erratum() {
    const SystemFixture& f = su3_cwb_system();
    const wn::ODESystem derived = derive(f);
    wn::ODESystem printed = derived;
    printed.rhs[2] = expected_rhs({f.errata.front().printed});
    const prop::CompiledSystem good(derived, {}), bad(printed, {});
    const auto g = prop::numeric_generators(catalog::su3_cwb());
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.6, 0.6);
    double worst_good = 0, best_bad = 1e300;
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<cplx> lam(8), eta(8);
        for (auto& x : lam) x = {u(rng), u(rng)};
        for (auto& x : eta) x = {u(rng), u(rng)};
        worst_good = std::max(worst_good, prop::schrodinger_defect(g, good, lam, eta));
        best_bad = std::min(best_bad, prop::schrodinger_defect(g, bad, lam, eta));
    }
    const bool pass = worst_good <= 1e-7 && best_bad >= 1e-3;
    return {{}, pass, "derived defect " + fmt(worst_good) + ", printed equation 3 defect >= " + fmt(best_bad), 0};
}

CheckResult gellmann() {
    const wn::ODESystem s = wn::decoupled_odes(catalog::su3_gellmann());
    const bool pass = s.locally_valid && !s.coupling.det.is_unit() && s.order() == 8;
    return {{}, pass,
            std::string(pass ? "locally valid" : "expected a non-monomial determinant") + ", det has " +
                std::to_string(s.coupling.det.size()) + " terms",
            0};
}

CheckResult oscillator_similarity() {
    const lie::LieVector v = wn::similarity_transform(catalog::coupled_oscillators(), 2, 4);
    lie::LieVector want(v.size());
    want.at(2) = expected_expr("-2*L2");
    want.at(3) = 1;
    const bool pass = v == want;
    return {{}, pass, pass ? "match" : "got " + wn::render_lie_vector(v, sym::Style::Text), 0};
}

CheckResult gate_result(const prop::GateCheck& c, cplx want_phase, double tol) {
    const bool pass = c.pass && std::abs(c.phase - want_phase) <= tol;
    return {{}, pass, "residual " + fmt(c.residual) + ", phase " + fmt(c.phase), 0};
}

CheckResult gate_t() {
    const double delta = 1;
    const wn::ODESystem s = wn::decoupled_odes(sun::algebra(sun::qubit_generators()));
    const auto traj = prop::integrate(s, prop::EtaBinding::constant({0, delta, 0}), 0, std::numbers::pi / (4 * delta));
    const prop::GateCheck c = prop::verify_gate(prop::qubit_gate_form(traj.final_state()), prop::gate("t"), 1e-8);
    return gate_result(c, std::polar(1.0, -std::numbers::pi / 4), 1e-8);
}

CheckResult gate_hadamard() {
    const std::vector<cplx> printed{-1, {std::log(2.0), -std::numbers::pi}, -1};
    const prop::GateCheck direct = prop::verify_gate(prop::qubit_gate_form(printed), prop::gate("hadamard"), 1e-8);
    // Omega = Delta: eta1 = eta3 = Delta/2, eta2 = Delta, t = pi / (sqrt 2 Delta)
    const double delta = 1;
    const wn::ODESystem s = wn::decoupled_odes(sun::algebra(sun::qubit_generators()));
    const auto traj = prop::integrate(s, prop::EtaBinding::constant({delta / 2, delta, delta / 2}), 0,
                                      std::numbers::pi / (std::sqrt(2.0) * delta));
    double dist = 0;
    for (std::size_t l = 0; l < 3; ++l) dist = std::max(dist, std::abs(traj.final_state()[l] - printed[l]));
    CheckResult r = gate_result(direct, -1, 1e-8);
    r.pass = r.pass && dist <= 1e-8;
    r.detail += ", trajectory end within " + fmt(dist) + " of the printed coefficients";
    return r;
}

CheckResult gate_x() {
    const double eta = 1, tstar = std::numbers::pi / (2 * eta);
    const auto g = prop::numeric_generators(sun::sun_generators(2));
    const prop::GateCheck a = prop::verify_gate(prop::direct_exponential(g, {eta, 0, eta}, tstar), prop::gate("x"), 1e-8);
    const prop::GateCheck b =
        prop::verify_gate(prop::matrix_oracle(g, prop::EtaBinding::constant({eta, 0, eta}), 0, tstar), prop::gate("x"), 1e-8);
    CheckResult r = gate_result(a, {0, -1}, 1e-8);
    r.pass = r.pass && b.pass;
    r.detail += ", matrix oracle residual " + fmt(b.residual);
    return r;
}

CheckResult gate_cnot() {
    const auto g = prop::numeric_generators(sun::sun_generators(4));
    std::vector<double> res;
    for (long double re : {5.0L, 10.0L, 20.0L}) {
        const auto c = prop::verify_gate(prop::assemble_teo_numeric(g, prop::cnot_coefficients(re, 0, {0.3L, 0.2L}, {-0.1L, 0.4L})),
                                         prop::gate("cnot"), 1e-7);
        res.push_back(c.residual);
    }
    const double rate1 = std::log(res[0] / res[1]) / 5, rate2 = std::log(res[1] / res[2]) / 10;
    const bool pass = res[2] <= 1e-7 && std::abs(rate1 - 1) <= 0.1 && std::abs(rate2 - 1) <= 0.1;
    return {{}, pass,
            "residual " + fmt(res[0]) + ", " + fmt(res[1]) + ", " + fmt(res[2]) + " at Re L9 = 5, 10, 20; decay rate " +
                fmt(rate1) + ", " + fmt(rate2),
            0};
}

}  // namespace

const std::vector<Check>& checks() {
    static const std::vector<Check> all{
        {"table1.decoupled", "three-generator family: decoupled Riccati system and det",
         [] { return system_check(table1_system()); }},
        {"table1.coupling", "three-generator family: coupling matrix",
         [] { return from(compare_matrix(table1_xi(), wn::coupling_matrix(catalog::table1()).xi)); }},
        {"table1.bch", "three-generator family: BCH matrices b1..b3", table1_b},
        {"su2_pauli.coupling", "Pauli basis: coupling matrix",
         [] { return from(compare_matrix(pauli_xi(), wn::coupling_matrix(catalog::su2_pauli()).xi)); }},
        {"su2_pauli.det", "Pauli basis: determinant cos(Th2)", pauli_det},
        {"su2_pauli.inverse", "Pauli basis: inverse coupling matrix", pauli_inverse},
        {"su2_pauli.decoupled", "Pauli basis: decoupled system", [] { return system_check(su2_pauli_system()); }},
        {"su2_cwb.decoupled", "su(2) CWB: decoupled system", [] { return system_check(su2_cwb_system()); }},
        {"su2_cwb.teo", "su(2) CWB: explicit TEO",
         [] { return from(compare_matrix(su2_cwb_teo(), sun::explicit_teo(sun::sun_generators(2)))); }},
        {"su3_cwb.decoupled", "su(3) CWB: decoupled system (corrected equation 3)",
         [] { return system_check(su3_cwb_system()); }},
        {"su3_cwb.erratum", "su(3) CWB: printed equation 3 fails i dU/dt = H U", su3_erratum},
        {"su3_cwb.teo", "su(3) CWB: explicit TEO",
         [] { return from(compare_matrix(su3_cwb_teo(), sun::explicit_teo(sun::sun_generators(3)))); }},
        {"su3_gellmann.locally_valid", "Gell-Mann basis: non-monomial det, locally valid system", gellmann},
        {"su4_cwb.decoupled", "su(4) CWB: decoupled system", [] { return system_check(su4_cwb_system()); }},
        {"su4_cwb.teo", "su(4) CWB: explicit TEO",
         [] { return from(compare_matrix(su4_cwb_teo(), sun::explicit_teo(sun::sun_generators(4)))); }},
        {"oscillators.decoupled", "coupled oscillators: decoupled system and det",
         [] { return system_check(oscillator_system()); }},
        {"oscillators.similarity", "coupled oscillators: exp(L2 g2) g4 exp(-L2 g2)", oscillator_similarity},
        {"gate.t", "T gate from the integrated qubit trajectory", gate_t},
        {"gate.hadamard", "Hadamard gate from the printed coefficients and the trajectory", gate_hadamard},
        {"gate.x", "X gate at t* = pi/(2 eta)", gate_x},
        {"gate.cnot", "CNOT limit at Re L9 = 5, 10, 20", gate_cnot},
    };
    return all;
}

unsigned default_threads() {
    if (const char* env = std::getenv("LIEWN_THREADS")) {
        char* end = nullptr;
        long n = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

std::vector<CheckResult> run_checks(const std::string& prefix, unsigned threads) {
    std::vector<const Check*> todo;
    for (const Check& c : checks()) {
        if (c.id.starts_with(prefix)) todo.push_back(&c);
    }
    std::vector<CheckResult> out(todo.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < todo.size();) {
            const auto t0 = std::chrono::steady_clock::now();
            CheckResult r;
            try {
                r = todo[k]->run();
            } catch (const std::exception& e) {
                r = {{}, false, std::string("error: ") + e.what(), 0};
            }
            r.id = todo[k]->id;
            r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            out[k] = std::move(r);
        }
    };
    if (threads == 0) threads = default_threads();
    threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    return out;
}

std::string report(const std::vector<CheckResult>& results) {
    std::size_t width = 0;
    for (const auto& r : results) width = std::max(width, r.id.size());
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& r : results) {
        passed += r.pass ? 1 : 0;
        os << std::left << std::setw(static_cast<int>(width)) << r.id << "  " << (r.pass ? "PASS" : "FAIL") << "  "
           << r.detail << "\n";
    }
    os << passed << "/" << results.size() << " fixtures pass\n";
    return os.str();
}

}  // namespace liewn::fixtures
