// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "liewn/catalog.hpp"
#include "liewn/fixtures.hpp"
#include "liewn/propagate.hpp"
#include "liewn/suite.hpp"
#include "liewn/sun.hpp"
#include "liewn/weinorman.hpp"

using namespace liewn;
using prop::cplx;
using prop::CMat;
using prop::EtaBinding;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string sci(double x) {
    std::ostringstream os;
    os << std::setprecision(2) << std::scientific << x;
    return os.str();
}

/// Runs the suite checks named in `ids` and folds them into one outcome.
Outcome suite_checks(const std::vector<std::string>& ids) {
    Outcome o;
    std::size_t passed = 0;
    for (const auto& id : ids) {
        const auto r = fixtures::run_checks(id, 1);
        if (r.size() != 1) {
            o.require(false, "unknown check " + id);
            continue;
        }
        o.require(r.front().pass, id + ": " + r.front().detail);
        passed += r.front().pass;
    }
    if (o.pass) o.detail = std::to_string(passed) + " checks match";
    return o;
}

std::vector<cplx> random_in_disc(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> r(0, 1), a(-std::numbers::pi, std::numbers::pi);
    std::vector<cplx> v(n);
    for (auto& x : v) x = std::polar(std::sqrt(r(rng)), a(rng));
    return v;
}

cplx random_cplx(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> u(-scale, scale);
    return {u(rng), u(rng)};
}

Outcome bch_vs_flow() {
    Outcome o;
    std::mt19937_64 rng(2024);
    const wn::ODESystem sys = wn::factorization_odes(catalog::table1());
    const std::map<std::string, cplx> rows[] = {
        {{"upsilon", 1.0}, {"epsilon", -1.0}},
        {{"upsilon", 1.0}, {"epsilon", 1.0}},
        {{"upsilon", -1.0}, {"epsilon", 1.0}},
        {{"upsilon", -1.0}, {"epsilon", -1.0}},
    };
    double worst = 0;
    for (const auto& row : rows) {
        const prop::CompiledSystem cs(sys, row);
        prop::IntegrateOptions opts;
        opts.rtol = 1e-12;
        opts.atol = 1e-14;
        opts.samples = 2;
        for (int k = 0; k < 100; ++k) {
            const std::vector<cplx> lam = random_in_disc(rng, 3);
            const wn::BCH3 c = wn::bch_closed_form_3gen(lam[0], lam[1], lam[2], row.at("upsilon"), row.at("epsilon"));
            const auto end = prop::integrate(cs, EtaBinding::constant(lam), 0, 1, opts).final_state();
            worst = std::max({worst, std::abs(end[0] - c.L1), std::abs(end[1] - c.L2), std::abs(end[2] - c.L3)});
        }
    }
    o.require(worst <= 1e-10, "closed form vs flow " + sci(worst));

    // qubit basis realizes the family with upsilon = 1, epsilon = -1
    const std::vector<CMat> g = prop::numeric_generators(sun::qubit_generators());
    double prod = 0;
    for (int k = 0; k < 100; ++k) {
        const std::vector<cplx> lam = random_in_disc(rng, 3);
        const wn::BCH3 c = wn::bch_closed_form_3gen(lam[0], lam[1], lam[2], 1, -1);
        const CMat lhs = prop::assemble_teo_numeric(g, std::vector<cplx>{c.L1, c.L2, c.L3});
        const CMat rhs = CMat(lam[0] * g[0] + lam[1] * g[1] + lam[2] * g[2]).exp();
        prod = std::max(prod, (lhs - rhs).norm());
    }
    o.require(prod <= 1e-10, "su(2) product identity " + sci(prod));
    if (o.pass) o.detail = "max flow deviation " + sci(worst) + " over 400 inputs, su(2) product " + sci(prod);
    return o;
}

Outcome cross_oracle() {
    Outcome o;
    std::mt19937_64 rng(7);
    std::string summary;
    for (std::size_t N : {2, 3, 4}) {
        const sun::GeneratorSet g = sun::sun_generators(N);
        const wn::ODESystem sys = wn::decoupled_odes(sun::algebra(g));
        const prop::CompiledSystem cs(sys, {});
        const std::vector<CMat> m = prop::numeric_generators(g);
        double worst = 0;
        for (int k = 0; k < 20; ++k) {
            std::vector<cplx> eta(g.order());
            for (auto& v : eta) v = random_cplx(rng, 0.5);
            const EtaBinding b = EtaBinding::constant(eta);
            const CMat u = prop::assemble_teo_numeric(m, prop::integrate(cs, b, 0, 1).final_state());
            worst = std::max(worst, (u - prop::matrix_oracle(m, b, 0, 1)).norm());
        }
        o.require(worst <= 1e-8, "su(" + std::to_string(N) + ") " + sci(worst));
        summary += "su(" + std::to_string(N) + ") " + sci(worst) + ", ";
    }

    const lie::Algebra osc = catalog::coupled_oscillators();
    const prop::CompiledSystem cs(wn::decoupled_odes(osc), {});
    std::uniform_real_distribution<double> om(0.5, 2.0), ph(0, 2 * std::numbers::pi);
    prop::IntegrateOptions opts;
    opts.samples = 401;
    double worst = 0;
    for (int k = 0; k < 10; ++k) {
        std::vector<prop::TimeFunction> fns;
        for (std::size_t l = 0; l < osc.order(); ++l) {
            fns.emplace_back(prop::Sinusoid{random_cplx(rng, 0.3), om(rng), ph(rng), random_cplx(rng, 0.1)});
        }
        const EtaBinding eta(fns);
        worst = std::max(worst, prop::residual_check(osc, prop::integrate(cs, eta, 0, 1, opts), eta));
    }
    o.require(worst <= 1e-6, "oscillator residual " + sci(worst));
    if (o.pass) o.detail = summary + "oscillator residual " + sci(worst);
    return o;
}

Outcome unitarity() {
    Outcome o;
    std::mt19937_64 rng(99);
    const prop::CompiledSystem cs(wn::decoupled_odes(sun::algebra(sun::qubit_generators())), {});
    std::uniform_real_distribution<double> om(0.5, 3.0), ph(0, 2 * std::numbers::pi), re(-0.5, 0.5);
    prop::IntegrateOptions opts;
    opts.samples = 101;
    double worst = 0;
    std::size_t points = 0;
    for (int k = 0; k < 20; ++k) {
        // eta3 = conj(eta1) and real eta2 keep H Hermitian
        const cplx a = random_cplx(rng, 0.5), b = random_cplx(rng, 0.3);
        const double w = om(rng), p = ph(rng);
        const EtaBinding eta(std::vector<prop::TimeFunction>{prop::Sinusoid{a, w, p, b},
                                                             prop::Sinusoid{re(rng), om(rng), ph(rng), re(rng)},
                                                             prop::Sinusoid{std::conj(a), w, p, std::conj(b)}});
        const prop::Trajectory t = prop::integrate(cs, eta, 0, 2, opts);
        for (const auto& s : t.states) {
            const wn::UnitarityReport r = wn::unitarity_check_su2(s[0], s[1], s[2], 1e-8);
            worst = std::max({worst, r.residual_modulus, r.residual_real, r.phase_degenerate ? 0.0 : r.residual_phase});
            o.require(r.pass(), "trajectory " + std::to_string(k) + " fails");
            ++points;
        }
    }
    if (o.pass) o.detail = std::to_string(points) + " grid points, max residual " + sci(worst);
    return o;
}

Outcome structural() {
    Outcome o;
    for (const auto& e : catalog::shipped()) {
        const lie::Algebra a = e.make();
        o.require(lie::validate(a).empty(), e.stem + " fails validation");
        const sym::Expr det = wn::coupling_matrix(a).det;
        sym::NumericBindings at0;
        for (const sym::Symbol& s : det.free_symbols()) at0[s] = s.is_parameter() ? cplx(0.7, -0.3) : cplx(0);
        o.require(std::abs(sym::eval_numeric(det, at0) - 1.0) < 1e-14, e.stem + " det at 0 differs from 1");
    }
    for (std::size_t N = 2; N <= 6; ++N) {
        const sun::GeneratorSet g = sun::sun_generators(N);
        std::size_t roots = 0, cartans = 0, lowers = 0;
        for (const auto& l : g.labels) {
            roots += l.role == sun::GeneratorLabel::Role::PositiveRoot;
            cartans += l.role == sun::GeneratorLabel::Role::Cartan;
            lowers += l.role == sun::GeneratorLabel::Role::NegativeRoot;
        }
        const std::string n = "N=" + std::to_string(N);
        o.require(g.order() == N * N - 1 && cartans == N - 1 && roots == N * (N - 1) / 2 && lowers == roots,
                  n + " generator counts");
        std::set<std::int64_t> p, q;
        bool integral = true;
        for (std::size_t a = 1; a <= N; ++a) {
            for (std::size_t b = 1; b <= N; ++b) {
                if (a == b) continue;
                const sym::Rational r = a < b ? sun::f1(a, b, N) : sun::f2(a, b);
                integral &= r.is_integer();
                (a < b ? p : q).insert(r.num());
            }
        }
        const auto half = static_cast<std::int64_t>(N * (N - 1) / 2);
        const auto onto = [&](const std::set<std::int64_t>& s) {
            return static_cast<std::int64_t>(s.size()) == half && *s.begin() == 1 && *s.rbegin() == half;
        };
        o.require(integral && onto(p) && onto(q), n + " f1/f2 not a bijection");
    }
    if (o.pass) o.detail = std::to_string(catalog::shipped().size()) + " algebras valid with det 1 at 0; N = 2..6 counts and index maps hold";
    return o;
}

struct Criterion {
    int number;
    std::string title;
    double limit_seconds;  // 0: none
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "parametrized family", 1, [] { return suite_checks({"table1.decoupled", "table1.coupling"}); }},
        {2, "Pauli basis", 1, [] { return suite_checks({"su2_pauli.coupling", "su2_pauli.det", "su2_pauli.inverse"}); }},
        {3, "coupled oscillators", 30, [] { return suite_checks({"oscillators.decoupled", "oscillators.similarity"}); }},
        {4, "su(3)", 60, [] { return suite_checks({"su3_cwb.decoupled", "su3_cwb.teo", "su3_gellmann.locally_valid"}); }},
        {5, "su(4)", 180, [] { return suite_checks({"su4_cwb.decoupled", "su4_cwb.teo"}); }},
        {6, "BCH closed form vs ODE", 0, bch_vs_flow},
        {7, "gates", 0, [] { return suite_checks({"gate.t", "gate.hadamard", "gate.x", "gate.cnot"}); }},
        {8, "cross-oracle", 0, cross_oracle},
        {9, "unitarity", 0, unitarity},
        {10, "structural properties", 0, structural},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.limit_seconds > 0 && secs > c.limit_seconds) {
            o.require(false, "runtime " + sci(secs) + " s over the " + sci(c.limit_seconds) + " s limit");
        }
        failed += !o.pass;
        std::printf("criterion %2d %-24s %s  %7.2f s  %s\n", c.number, c.title.c_str(), o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria pass\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
