#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "liewn/algebra_io.hpp"
#include "liewn/catalog.hpp"
#include "liewn/propagate.hpp"
#include "liewn/suite.hpp"
#include "liewn/sun.hpp"
#include "liewn/weinorman.hpp"

namespace {

using namespace liewn;
using nlohmann::json;
using prop::cplx;
using sym::Style;

/// Options shared by most verbs.
struct Common {
    std::string algebra;
    bool no_validate = false;
    std::string emit = "text";
    std::string out;
    std::vector<std::string> params;
};

struct Failure : Error {
    using Error::Error;
};

void add_output(CLI::App* cmd, Common& c) {
    cmd->add_option("--emit", c.emit, "Output format")->check(CLI::IsMember({"latex", "text", "json"}));
    cmd->add_option("--out", c.out, "Write the result to this file instead of stdout");
}

void add_algebra(CLI::App* cmd, Common& c, bool required = true) {
    auto* opt = cmd->add_option("--algebra", c.algebra, "Algebra JSON file, or the stem of a shipped algebra");
    if (required) opt->required();
    cmd->add_flag("--no-validate", c.no_validate, "Skip antisymmetry and Jacobi validation");
}

void add_params(CLI::App* cmd, Common& c) {
    cmd->add_option("--param", c.params, "Numeric value of an algebra parameter, name=value (repeatable)");
}

void emit(const Common& c, const std::string& text) {
    if (c.out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream f(c.out);
    if (!f) throw Error("cannot write '" + c.out + "'");
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
}

lie::Algebra load(const Common& c) {
    const std::filesystem::path p(c.algebra);
    if (std::filesystem::exists(p)) return io::load_algebra(p, !c.no_validate);
    for (const auto& e : catalog::shipped()) {
        if (e.stem == c.algebra || e.stem + ".json" == c.algebra) return e.make();
    }
    throw Error("no algebra file or shipped algebra named '" + c.algebra + "'");
}

std::map<std::string, cplx> parameters(const Common& c) {
    std::map<std::string, cplx> out;
    for (const std::string& p : c.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw Error("--param expects name=value, got '" + p + "'");
        out[p.substr(0, eq)] = prop::parse_complex(p.substr(eq + 1));
    }
    return out;
}

Style style(const Common& c) { return sym::style_from_name(c.emit); }

std::string fmt(cplx z) {
    std::ostringstream os;
    os << std::setprecision(12) << z.real() << (z.imag() < 0 || std::signbit(z.imag()) ? " - " : " + ")
       << std::abs(z.imag()) << "i";
    return os.str();
}

std::string matrix_text(const prop::CMat& m, bool as_json) {
    if (as_json) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back({m(r, k).real(), m(r, k).imag()});
            rows.push_back(row);
        }
        return rows.dump();
    }
    std::ostringstream os;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) os << (k ? ", " : "") << fmt(m(r, k));
        os << "\n";
    }
    return os.str();
}

// ---------------------------------------------------------------- symbolic verbs

std::string bch_text(const wn::BCHMatrixSet& b, Style s, std::optional<std::size_t> index) {
    const std::size_t L = b.order();
    if (index && (*index < 1 || *index > L)) throw IndexError("--index must be in 1.." + std::to_string(L));
    if (s == Style::Json) {
        json j = json::object();
        for (std::size_t i = 1; i <= L; ++i) {
            if (!index || *index == i) j["b" + std::to_string(i)] = json::parse(wn::render_matrix(b[i], s));
        }
        return j.dump(2);
    }
    std::ostringstream os;
    for (std::size_t i = 1; i <= L; ++i) {
        if (index && *index != i) continue;
        os << (s == Style::Latex ? "% b^" : "# b^") << i << "\n" << wn::render_matrix(b[i], s);
    }
    return os.str();
}

std::string coupling_text(const lie::Algebra& a, Style s) {
    const wn::CouplingMatrix c = wn::coupling_matrix(a);
    if (s == Style::Json) {
        return json{{"xi", json::parse(wn::render_matrix(c.xi, s))},
                    {"det", sym::text(c.det)},
                    {"coupled", json::parse(wn::render_coupled(wn::coupled_odes(a), a.coefficient_kind, s))}}
            .dump(2);
    }
    const bool tex = s == Style::Latex;
    std::ostringstream os;
    os << (tex ? "% " : "# ") << "coupling matrix xi\n" << wn::render_matrix(c.xi, s);
    os << (tex ? "% " : "# ") << "det xi\n" << sym::render(c.det, s) << "\n";
    os << (tex ? "% " : "# ") << "coupled equations\n" << wn::render_coupled(wn::coupled_odes(a), a.coefficient_kind, s);
    return os.str();
}

std::string teo_text(const SymMatrix& m, Style s) { return wn::render_matrix(m, s); }

sun::GeneratorSet generators_of(const lie::Algebra& a) {
    if (!a.has_generators()) throw Error("algebra '" + a.name + "' has no matrix representation");
    sun::GeneratorSet g;
    g.N = a.generators.front().rows();
    g.mats = a.generators;
    g.labels.resize(a.generators.size());
    g.name = a.name;
    return g;
}

std::string generators_text(const sun::GeneratorSet& g, Style s) {
    if (s == Style::Json) return io::algebra_to_json(sun::algebra(g)).dump(2);
    std::ostringstream os;
    for (std::size_t l = 0; l < g.order(); ++l) {
        os << (s == Style::Latex ? "% " : "# ") << "g" << (l + 1);
        if (g.labels[l].role != sun::GeneratorLabel::Role::Other) os << " = " << g.labels[l].text();
        os << "\n" << wn::render_matrix(to_sym(g.mats[l]), s);
    }
    return os.str();
}

// ---------------------------------------------------------------- numeric verbs

struct IntegrateArgs {
    std::size_t sun = 0;
    std::string eta;
    double t0 = 0, t1 = 1;
    std::size_t samples = 201;
    double rtol = 1e-10, atol = 1e-12;
    bool residual = false;
    bool factorize = false;
};

int run_integrate(const Common& c, const IntegrateArgs& a) {
    lie::Algebra alg;
    if ((a.sun != 0) == !c.algebra.empty()) throw Error("integrate needs exactly one of --sun and --algebra");
    alg = a.sun != 0 ? sun::algebra(sun::sun_generators(a.sun)) : load(c);
    if (a.eta.empty()) throw Error("integrate needs --eta");
    const wn::ODESystem sys = a.factorize ? wn::factorization_odes(alg) : wn::decoupled_odes(alg);
    const prop::EtaBinding eta = prop::EtaBinding::parse(a.eta);
    prop::IntegrateOptions opts;
    opts.rtol = a.rtol;
    opts.atol = a.atol;
    opts.samples = a.samples;
    opts.parameters = parameters(c);
    prop::Trajectory traj;
    int status = 0;
    std::string error;
    try {
        traj = prop::integrate(sys, eta, a.t0, a.t1, opts);
    } catch (const prop::IntegrationError& e) {
        traj = e.partial;
        error = e.what();
        status = 1;
    }
    std::optional<double> res;
    if (a.residual && status == 0) res = prop::residual_check(alg, traj, eta, opts.parameters, sys.kind);

    if (c.emit == "json") {
        json j = traj.to_json();
        if (res) j["residual"] = *res;
        if (!error.empty()) j["error"] = error;
        emit(c, j.dump());
    } else {
        std::ostringstream os;
        const Style s = style(c);
        if (!traj.states.empty()) {
            os << (s == Style::Latex ? "% " : "# ") << "t = " << std::setprecision(12) << traj.grid.back() << "\n";
            const auto& x = traj.final_state();
            for (std::size_t n = 0; n < x.size(); ++n) {
                const sym::Symbol u = sys.unknown(n + 1);
                os << (s == Style::Latex ? u.latex() : u.text()) << " = " << fmt(x[n]) << "\n";
            }
            os << "det = " << fmt(traj.det.back()) << "\n";
        }
        for (const auto& ev : traj.events) {
            os << (ev.kind == prop::Event::Kind::SingularityWarning ? "warning" : "failure") << " at t = " << ev.t
               << ": " << ev.detail << "\n";
        }
        if (res) os << "residual = " << *res << "\n";
        emit(c, os.str());
    }
    if (status != 0) throw Failure(error);
    return 0;
}

struct GateArgs {
    std::size_t sun = 0;
    std::string lambdas;
    std::string target;
    double tol = 1e-8;
    std::string eta;
    double t = 0;
};

int run_verify_gate(const Common& c, const GateArgs& a) {
    const prop::CMat target = prop::gate(a.target);
    prop::CMat U;
    std::vector<cplx> lam;
    if (a.lambdas.empty() == a.eta.empty()) throw Error("verify-gate needs exactly one of --lambdas and --eta");

    lie::Algebra alg;
    std::vector<prop::CMat> g;
    if (a.sun != 0 && !c.algebra.empty()) throw Error("verify-gate takes --sun or --algebra, not both");
    if (a.sun != 0) {
        alg = sun::algebra(a.sun == 2 ? sun::qubit_generators() : sun::sun_generators(a.sun));
    } else if (!c.algebra.empty()) {
        alg = load(c);
    } else {
        throw Error("verify-gate needs --sun or --algebra");
    }
    g = prop::numeric_generators(alg);

    if (!a.lambdas.empty()) {
        lam = prop::parse_complex_list(a.lambdas);
    } else {
        if (!(a.t > 0)) throw Error("--eta needs a positive --t");
        prop::IntegrateOptions opts;
        opts.parameters = parameters(c);
        lam = prop::integrate(wn::decoupled_odes(alg), prop::EtaBinding::parse(a.eta), 0, a.t, opts).final_state();
    }
    if (lam.size() != g.size()) {
        throw IndexError("expected " + std::to_string(g.size()) + " coefficients, got " + std::to_string(lam.size()));
    }
    U = a.sun == 2 ? prop::qubit_gate_form(lam) : prop::assemble_teo_numeric(g, lam);
    const prop::GateCheck r = prop::verify_gate(U, target, a.tol);

    if (c.emit == "json") {
        emit(c, json{{"pass", r.pass},
                     {"phase", {r.phase.real(), r.phase.imag()}},
                     {"phase_angle", std::arg(r.phase)},
                     {"residual", r.residual},
                     {"U", json::parse(matrix_text(U, true))}}
                    .dump());
    } else {
        std::ostringstream os;
        os << (r.pass ? "pass" : "fail") << "\nphase = " << fmt(r.phase) << " = e^{i*" << std::setprecision(12)
           << std::arg(r.phase) << "}\nresidual = " << r.residual << "\n";
        emit(c, os.str());
    }
    return r.pass ? 0 : 1;
}

std::vector<std::size_t> parse_order(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t"), e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw Error("--order has an empty item");
        const std::string t = item.substr(b, e - b + 1);
        std::size_t used = 0;
        long v = 0;
        try {
            v = std::stol(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size() || v < 1) throw Error("--order items must be positive integers, got '" + t + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wei-Norman symbolic and numeric engine"};
    app.require_subcommand(1);
    Common c;

    auto* derive = app.add_subcommand("derive", "BCH matrices, coupling matrix and decoupled system");
    add_algebra(derive, c);
    add_output(derive, c);

    auto* bch = app.add_subcommand("bch", "BCH matrices b^i = exp(L_i Upsilon^i)");
    add_algebra(bch, c);
    add_output(bch, c);
    std::optional<std::size_t> bch_index;
    bch->add_option("--index", bch_index, "Only b^i");

    auto* coupling = app.add_subcommand("coupling", "Coupling matrix, determinant and coupled equations");
    add_algebra(coupling, c);
    add_output(coupling, c);

    auto* decouple = app.add_subcommand("decouple", "Decoupled equations i dL_n/dt = f_n");
    add_algebra(decouple, c);
    add_output(decouple, c);

    auto* factorize = app.add_subcommand("factorize", "Factorization equations dL_n/dtheta = f_n");
    add_algebra(factorize, c);
    add_output(factorize, c);
    add_params(factorize, c);
    std::string fact_lambdas;
    factorize->add_option("--lambdas", fact_lambdas, "Integrate from theta = 0 to 1 for these lambda values");

    auto* reorder = app.add_subcommand("reorder", "Write the algebra with permuted generators");
    add_algebra(reorder, c);
    reorder->add_option("--out", c.out, "Write the result to this file instead of stdout");
    std::string order;
    reorder->add_option("--order", order, "New generator k is old generator order[k], 1-based")->required();

    auto* sunc = app.add_subcommand("sun", "Cartan-Weyl basis of su(N)");
    add_output(sunc, c);
    std::size_t sun_n = 0;
    bool sun_decouple = false, sun_teo = false, sun_coupling = false;
    sunc->add_option("--n", sun_n, "N")->required()->check(CLI::Range(2, 12));
    sunc->add_flag("--decouple", sun_decouple, "Decoupled equations");
    sunc->add_flag("--teo", sun_teo, "Explicit TEO matrix");
    sunc->add_flag("--coupling", sun_coupling, "Coupling matrix");

    auto* gm = app.add_subcommand("gellmann", "Gell-Mann basis of su(3)");
    add_output(gm, c);
    bool gm_decouple = false, gm_teo = false, gm_coupling = false;
    gm->add_flag("--decouple", gm_decouple, "Decoupled equations (slow: about 20 s)");
    gm->add_flag("--teo", gm_teo, "Explicit TEO matrix");
    gm->add_flag("--coupling", gm_coupling, "Coupling matrix");

    auto* teo = app.add_subcommand("teo", "Explicit TEO matrix prod_l exp(L_l g_l)");
    add_algebra(teo, c, false);
    add_output(teo, c);
    std::size_t teo_sun = 0;
    teo->add_option("--sun", teo_sun, "Use the su(N) Cartan-Weyl basis")->check(CLI::Range(2, 12));

    auto* integ = app.add_subcommand("integrate", "Integrate the decoupled equations from L = 0");
    add_algebra(integ, c, false);
    add_output(integ, c);
    add_params(integ, c);
    IntegrateArgs ia;
    integ->add_option("--sun", ia.sun, "su(N) Cartan-Weyl basis")->check(CLI::Range(2, 12));
    integ->add_option("--eta", ia.eta, "const:c1,c2,... or a JSON time-function file")->required();
    integ->add_option("--t0", ia.t0, "Start time");
    integ->add_option("--t1", ia.t1, "End time");
    integ->add_option("--samples", ia.samples, "Grid points")->check(CLI::Range(2, 10000000));
    integ->add_option("--rtol", ia.rtol, "Relative tolerance")->check(CLI::PositiveNumber);
    integ->add_option("--atol", ia.atol, "Absolute tolerance")->check(CLI::PositiveNumber);
    integ->add_flag("--residual", ia.residual, "Report the back-substitution residual");
    integ->add_flag("--factorize", ia.factorize, "Integrate the factorization equations; --eta then gives lambda");

    auto* gate = app.add_subcommand("verify-gate", "Compare a numeric TEO with a gate up to global phase");
    add_algebra(gate, c, false);
    add_output(gate, c);
    add_params(gate, c);
    GateArgs ga;
    gate->add_option("--sun", ga.sun, "su(N) basis; N = 2 selects the qubit basis")->check(CLI::Range(2, 12));
    gate->add_option("--lambdas", ga.lambdas, "Comma-separated TEO coefficients, e.g. \"-1, ln2-i*pi, -1\"");
    gate->add_option("--eta", ga.eta, "Integrate from t = 0 to --t with this eta instead");
    gate->add_option("--t", ga.t, "Gate time for --eta");
    gate->add_option("--target", ga.target, "hadamard, t, x, y, z or cnot")->required();
    gate->add_option("--tol", ga.tol, "Residual tolerance")->check(CLI::PositiveNumber);

    auto* fx = app.add_subcommand("fixtures", "Run every published-value check and print a pass/fail table");
    std::string fx_filter;
    unsigned fx_threads = 0;
    bool fx_list = false;
    fx->add_option("--filter", fx_filter, "Only checks whose id starts with this prefix");
    fx->add_option("--threads", fx_threads, "Worker threads (default LIEWN_THREADS or all cores)");
    fx->add_flag("--list", fx_list, "List the checks without running them");
    fx->add_option("--out", c.out, "Write the report to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        const Style s = style(c);
        if (derive->parsed()) {
            const lie::Algebra a = load(c);
            const wn::ODESystem sys = wn::decoupled_odes(a);
            if (s == Style::Json) {
                emit(c, json{{"bch", json::parse(bch_text(wn::bch_matrices(a), s, std::nullopt))},
                             {"coupling", json::parse(coupling_text(a, s))},
                             {"decoupled", json::parse(wn::render_system(sys, s))}}
                            .dump(2));
            } else {
                const std::string h = s == Style::Latex ? "% " : "# ";
                emit(c, bch_text(wn::bch_matrices(a), s, std::nullopt) + coupling_text(a, s) + h +
                            "decoupled equations\n" + wn::render_system(sys, s));
            }
        } else if (bch->parsed()) {
            emit(c, bch_text(wn::bch_matrices(load(c)), s, bch_index));
        } else if (coupling->parsed()) {
            emit(c, coupling_text(load(c), s));
        } else if (decouple->parsed()) {
            emit(c, wn::render_system(wn::decoupled_odes(load(c)), s));
        } else if (factorize->parsed()) {
            const lie::Algebra a = load(c);
            const wn::ODESystem sys = wn::factorization_odes(a);
            if (fact_lambdas.empty()) {
                emit(c, wn::render_system(sys, s));
            } else {
                prop::IntegrateOptions opts;
                opts.parameters = parameters(c);
                const auto traj =
                    prop::integrate(sys, prop::EtaBinding::constant(prop::parse_complex_list(fact_lambdas)), 0, 1, opts);
                if (s == Style::Json) {
                    json j = json::array();
                    for (cplx z : traj.final_state()) j.push_back({z.real(), z.imag()});
                    emit(c, json{{"theta", 1}, {"coefficients", j}}.dump());
                } else {
                    std::ostringstream os;
                    for (std::size_t n = 0; n < traj.final_state().size(); ++n) {
                        const sym::Symbol u = sys.unknown(n + 1);
                        os << (s == Style::Latex ? u.latex() : u.text()) << " = " << fmt(traj.final_state()[n]) << "\n";
                    }
                    emit(c, os.str());
                }
            }
        } else if (reorder->parsed()) {
            emit(c, io::algebra_to_json(lie::reorder(load(c), parse_order(order))).dump(2));
        } else if (sunc->parsed() || gm->parsed()) {
            const bool is_sun = sunc->parsed();
            const sun::GeneratorSet g = is_sun ? sun::sun_generators(sun_n) : sun::gellmann_generators();
            const bool dec = is_sun ? sun_decouple : gm_decouple;
            const bool te = is_sun ? sun_teo : gm_teo;
            const bool cp = is_sun ? sun_coupling : gm_coupling;
            std::string text;
            if (cp) text += coupling_text(sun::algebra(g), s);
            if (dec) text += wn::render_system(wn::decoupled_odes(sun::algebra(g)), s);
            if (te) text += teo_text(sun::explicit_teo(g), s);
            if (!dec && !te && !cp) text = generators_text(g, s);
            emit(c, text);
        } else if (teo->parsed()) {
            if ((teo_sun != 0) == !c.algebra.empty()) throw Error("teo needs exactly one of --sun and --algebra");
            const sun::GeneratorSet g = teo_sun != 0 ? sun::sun_generators(teo_sun) : generators_of(load(c));
            emit(c, teo_text(sun::explicit_teo(g), s));
        } else if (integ->parsed()) {
            return run_integrate(c, ia);
        } else if (gate->parsed()) {
            return run_verify_gate(c, ga);
        } else if (fx->parsed()) {
            if (fx_list) {
                std::ostringstream os;
                for (const auto& ch : fixtures::checks()) os << ch.id << "  " << ch.description << "\n";
                emit(c, os.str());
                return 0;
            }
            const auto results = fixtures::run_checks(fx_filter, fx_threads);
            if (results.empty()) throw Error("no check id starts with '" + fx_filter + "'");
            emit(c, fixtures::report(results));
            for (const auto& r : results) {
                if (!r.pass) return 1;
            }
        }
    } catch (const Failure& e) {
        std::cerr << "liewn: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::string msg = e.what();
        for (char& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        std::cerr << "liewn: error: " << msg << "\n";
        return 2;
    }
    return 0;
}
