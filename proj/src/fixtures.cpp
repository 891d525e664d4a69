#include "liewn/fixtures.hpp"

#include "liewn/catalog.hpp"
#include "liewn/parse.hpp"
#include "liewn/render.hpp"

namespace liewn::fixtures {

using sym::Expr;
using sym::RationalExpr;

const SystemFixture& table1_system() {
    static const SystemFixture f{
        "table1.decoupled",
        "table1",
        {
            {"epsilon*upsilon*eta3*L1^2 + upsilon*eta2*L1 + eta1"},
            {"2*epsilon*eta3*L1 + eta2"},
            {"eta3*exp(upsilon*L2)"},
        },
        "exp(-upsilon*L2)",
        {},
    };
    return f;
}

const SystemFixture& su2_pauli_system() {
    static const SystemFixture f{
        "su2_pauli.decoupled",
        "su2_pauli",
        {
            {"eta1*cos(Th2) + sin(Th2)*(eta2*sin(Th1) + eta3*cos(Th1))", "cos(Th2)"},
            {"eta2*cos(Th1) - eta3*sin(Th1)"},
            {"eta2*sin(Th1) + eta3*cos(Th1)", "cos(Th2)"},
        },
        "cos(Th2)",
        {},
    };
    return f;
}

const SystemFixture& su2_cwb_system() {
    static const SystemFixture f{
        "su2_cwb.decoupled",
        "su2_cwb",
        {
            {"-L1^2*eta3 + 2*eta2*L1 + eta1"},
            {"-L1*eta3 + eta2"},
            {"eta3*exp(2*L2)"},
        },
        "exp(-2*L2)",
        {},
    };
    return f;
}

const SystemFixture& su3_cwb_system() {
    static const SystemFixture f{
        "su3_cwb.decoupled",
        "su3_cwb",
        {
            {"-L1^2*eta6 - L1*L2*eta7 + L1*(2*eta4 - eta5) - L2*eta8 + eta1"},
            {"-L2^2*eta7 - L1*L2*eta6 + L2*(eta4 + eta5) - L1*eta3 + eta2"},
            {"-L3^2*(eta8 + L1*eta7) + L3*(L1*eta6 - L2*eta7) + L3*(2*eta5 - eta4) + L2*eta6 + eta3"},
            {"-L1*eta6 - L2*eta7 + eta4"},
            {"-L1*L3*eta7 - L2*eta7 - L3*eta8 + eta5"},
            {"(eta6 - L3*eta7)*exp(2*L4 - L5)"},
            {"L6*(L1*eta7 + eta8)*exp(-L4 + 2*L5) + eta7*exp(L4 + L5)"},
            {"(L1*eta7 + eta8)*exp(-L4 + 2*L5)"},
        },
        "exp(-2*(L4 + L5))",
        {{"equation 3",
          "-L3^2*(eta8 - L1*eta7) + L3*(L1*eta6 - L2*eta7) + L3*(2*eta5 - eta4) + L2*eta6 + eta3",
          "sign of the L1*L3^2*eta7 term; the printed form violates i dU/dt = H U"}},
    };
    return f;
}

const SystemFixture& su4_cwb_system() {
    static const SystemFixture f{
        "su4_cwb.decoupled",
        "su4_cwb",
        {
            {"-L1^2*eta10 - L1*(L2*eta11 + L3*eta12) + L1*(2*eta7 - eta8) - L2*eta13 - L3*eta14 + eta1"},
            {"-L2^2*eta11 - L2*(L1*eta10 + L3*eta12) + L2*(eta7 + eta8 - eta9) - L3*eta15 - L1*eta4 + eta2"},
            {"-L3^2*eta12 - L3*(L1*eta10 + L2*eta11) + L3*(eta7 + eta9) - L1*eta5 - L2*eta6 + eta3"},
            {"-L4^2*(L1*eta11 + eta13) - L4*L5*(L1*eta12 + eta14) + L4*(L1*eta10 - L2*eta11 - eta7 + 2*eta8 - eta9)"
             " - L5*(L2*eta12 + eta15) + L2*eta10 + eta4"},
            {"-L5^2*(L1*eta12 + eta14) - L4*L5*(L1*eta11 + eta13) + L5*(L1*eta10 - L3*eta12 - eta7 + eta8 + eta9)"
             " - L4*(L3*eta11 + eta6) + L3*eta10 + eta5"},
            {"-L6^2*(L2*eta12 + eta15 + L4*(L1*eta12 + eta14)) - L5*L6*(L1*eta12 + eta14)"
             " + L6*(L2*eta11 + L4*(L1*eta11 + eta13) - L3*eta12 - eta8 + 2*eta9)"
             " + L3*eta11 + L5*(L1*eta11 + eta13) + eta6"},
            {"-L1*eta10 - L2*eta11 - L3*eta12 + eta7"},
            {"-L2*eta11 - L3*eta12 - L4*(L1*eta11 + eta13) - L5*(L1*eta12 + eta14) + eta8"},
            {"-L3*eta12 - L5*(L1*eta12 + eta14) - L6*(L2*eta12 + eta15 + L4*(L1*eta12 + eta14)) + eta9"},
            {"(eta10 - L4*eta11 - L5*eta12)*exp(2*L7 - L8)"},
            {"L10*(L1*eta11 + eta13 - L6*(L1*eta12 + eta14))*exp(-L7 + 2*L8 - L9)"
             " + (eta11 - L6*eta12)*exp(L7 + L8 - L9)"},
            {"L10*(L1*eta12 + eta14)*exp(-L7 + L8 + L9)"
             " + L11*(L2*eta12 + eta15 + L4*(L1*eta12 + eta14))*exp(-L8 + 2*L9) + eta12*exp(L7 + L9)"},
            {"(L1*eta11 + eta13 - L6*(L1*eta12 + eta14))*exp(-L7 + 2*L8 - L9)"},
            {"L13*(L2*eta12 + eta15 + L4*(L1*eta12 + eta14))*exp(-L8 + 2*L9)"
             " + (L1*eta12 + eta14)*exp(-L7 + L8 + L9)"},
            {"(L2*eta12 + eta15 + L4*(L1*eta12 + eta14))*exp(-L8 + 2*L9)"},
        },
        "exp(-2*(L7 + L8 + L9))",
        {},
        {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 13, 12, 14, 15},
        "the printed equations number E41 as 12 and E32 as 13; the printed TEO follows the f2 order",
    };
    return f;
}

const SystemFixture& oscillator_system() {
    static const SystemFixture f{
        "coupled_oscillators.decoupled",
        "coupled_oscillators",
        {
            {"4*L1^2*eta8 + 2*L1*L3*eta10 + 2*L1*eta6 + L3^2*eta9 + L3*eta4 + eta1"},
            {"4*L2^2*eta9 + 2*L2*L3*eta10 + 2*L2*eta7 + L3^2*eta8 + L3*eta5 + eta2"},
            {"L3^2*eta10 + 4*L3*(L1*eta8 + L2*eta9) + L3*(eta6 + eta7) + 2*L2*(2*L1*eta10 + eta4) + 2*L1*eta5 + eta3"},
            {"-L4^2*(2*L3*eta8 + 2*L2*eta10 + eta5) - 4*L4*(L2*eta9 - L1*eta8) + L4*(eta6 - eta7) + 2*L3*eta9"
             " + 2*L1*eta10 + eta4"},
            {"2*L4*L5*(2*L3*eta8 + 2*L2*eta10 + eta5) + 4*L5*(L2*eta9 - L1*eta8) + L5*(eta7 - eta6) + 2*L3*eta8"
             " + 2*L2*eta10 + eta5"},
            {"-L4*(2*L3*eta8 + 2*L2*eta10 + eta5) + 4*L1*eta8 + L3*eta10 + eta6"},
            {"L4*(2*L3*eta8 + 2*L2*eta10 + eta5) + 4*L2*eta9 + L3*eta10 + eta7"},
            {"L5^2*(L4^2*eta8 + L4*eta10 + eta9)*exp(2*L6) + L5*(2*L4*eta8 + eta10)*exp(2*L6) + eta8*exp(2*L6)"},
            {"(L4^2*eta8 + L4*eta10 + eta9)*exp(2*L7)"},
            {"2*L5*(L4^2*eta8 + L4*eta10 + eta9)*exp(L6 + L7) + 2*L4*eta8*exp(L6 + L7) + eta10*exp(L6 + L7)"},
            {"2*L1*eta8 + 2*L2*eta9 + L3*eta10 + eta11"},
        },
        "exp(-3*(L6 + L7))",
        {},
    };
    return f;
}

const MatrixFixture& table1_xi() {
    static const MatrixFixture f{
        "table1.xi",
        {
            {"1", "0", "0"},
            {"-upsilon*L1", "1", "0"},
            {"epsilon*upsilon*L1^2*exp(-upsilon*L2)", "-2*epsilon*L1*exp(-upsilon*L2)", "exp(-upsilon*L2)"},
        },
    };
    return f;
}

const std::vector<MatrixFixture>& table1_bch() {
    static const std::vector<MatrixFixture> f{
        {"table1.b1",
         {
             {"1", "0", "0"},
             {"-upsilon*L1", "1", "0"},
             {"epsilon*upsilon*L1^2", "-2*epsilon*L1", "1"},
         }},
        {"table1.b2",
         {
             {"exp(upsilon*L2)", "0", "0"},
             {"0", "1", "0"},
             {"0", "0", "exp(-upsilon*L2)"},
         }},
        {"table1.b3",
         {
             {"1", "2*epsilon*L3", "epsilon*upsilon*L3^2"},
             {"0", "1", "upsilon*L3"},
             {"0", "0", "1"},
         }},
    };
    return f;
}

const MatrixFixture& pauli_xi() {
    static const MatrixFixture f{
        "su2_pauli.xi",
        {
            {"1", "0", "0"},
            {"0", "cos(Th1)", "-sin(Th1)"},
            {"-sin(Th2)", "sin(Th1)*cos(Th2)", "cos(Th1)*cos(Th2)"},
        },
    };
    return f;
}

const MatrixFixture& pauli_xi_inverse() {
    // tan = sin/cos and sec = 1/cos over the common denominator cos(Th2)
    static const MatrixFixture f{
        "su2_pauli.xi_inverse",
        {
            {"cos(Th2)", "0", "0"},
            {"sin(Th1)*sin(Th2)", "cos(Th1)*cos(Th2)", "sin(Th1)"},
            {"cos(Th1)*sin(Th2)", "-sin(Th1)*cos(Th2)", "cos(Th1)"},
        },
        "cos(Th2)",
    };
    return f;
}

const MatrixFixture& su2_cwb_teo() {
    static const MatrixFixture f{
        "su2_cwb.teo",
        {
            {"exp(2*L2) + L1*L3", "L1"},
            {"L3", "1"},
        },
        "exp(L2)",
    };
    return f;
}

const MatrixFixture& su3_cwb_teo() {
    static const MatrixFixture f{
        "su3_cwb.teo",
        {
            {"L1*L6*rho1 + L7*rho2 + exp(L4 + L5)", "L1*rho1 + L8*rho2", "rho2"},
            {"L3*L7 + L6*rho1", "L3*L8 + rho1", "L3"},
            {"L7", "L8", "1"},
        },
        "exp(L5)",
        {{"rho1", "exp(-L4 + 2*L5)"}, {"rho2", "L1*L3 + L2"}},
        {{"entry (1,1)", "L1*L6*rho1 + L7*rho2 + exp(L4*L5)",
          "the exponent is a sum; the printed product is not of the polynomial-times-exponential form"}},
    };
    return f;
}

const MatrixFixture& su4_cwb_teo() {
    static const MatrixFixture f{
        "su4_cwb.teo",
        {
            {"L1*L10*rho3 + L11*rho4 + L13*rho6*exp(-L9) + exp(L7)", "L12*rho4 + L14*rho6*exp(-L9) + L1*rho3",
             "L15*rho6*exp(-L9) + rho4", "rho6*exp(-L9)"},
            {"L10*rho3 + L11*L4*rho5 + L13*rho7*exp(-L9)", "L12*L4*rho5 + L14*rho7*exp(-L9) + rho3",
             "L15*rho7*exp(-L9) + L4*rho5", "rho7*exp(-L9)"},
            {"L11*rho5 + L13*L6*exp(-L9)", "L12*rho5 + L14*L6*exp(-L9)", "L15*L6*exp(-L9) + rho5", "L6*exp(-L9)"},
            {"L13*exp(-L9)", "L14*exp(-L9)", "L15*exp(-L9)", "exp(-L9)"},
        },
        "1",
        {{"rho3", "exp(L8 - L7)"},
         {"rho4", "(L1*L4 + L2)*rho5"},
         {"rho5", "exp(-L8 + L9)"},
         {"rho6", "L1*L5 + L3 + L6*(L1*L4 + L2)"},
         {"rho7", "L4*L6 + L5"}},
    };
    return f;
}

lie::Algebra algebra_for(const SystemFixture& f) {
    lie::Algebra a = catalog::by_name(f.algebra);
    return f.order.empty() ? a : lie::reorder(a, f.order);
}

wn::ODESystem derive(const SystemFixture& f) { return wn::decoupled_odes(algebra_for(f)); }

Expr expected_expr(const std::string& text, const std::map<std::string, std::string>& defs) {
    const sym::ParseOptions opts{.parameters = std::nullopt, .allow_new_parameters = true};
    Expr e = sym::parse_expr(text, opts);
    if (defs.empty()) return e;
    sym::Substitution sub;
    for (const auto& [name, value] : defs) sub[sym::Symbol::parameter(name)] = sym::parse_expr(value, opts);
    // definitions may refer to each other
    for (std::size_t pass = 0; pass <= defs.size(); ++pass) {
        Expr next = sym::substitute(e, sub);
        if (next == e) break;
        e = std::move(next);
    }
    return e;
}

RationalExpr expected_rhs(const Rhs& r) { return {expected_expr(r.num), expected_expr(r.den)}; }

Matrix<RationalExpr> expected_matrix(const MatrixFixture& m) {
    const std::size_t rows = m.num.size();
    const std::size_t cols = rows ? m.num.front().size() : 0;
    Matrix<RationalExpr> out(rows, cols);
    const Expr den = expected_expr(m.den, m.defs);
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = RationalExpr(expected_expr(m.num[r][c], m.defs), den);
    }
    return out;
}

std::string Comparison::summary() const {
    if (pass) return "match";
    std::string s;
    for (const auto& m : mismatches) s += (s.empty() ? "" : "; ") + m;
    return s;
}

Comparison compare_system(const SystemFixture& f, const std::vector<RationalExpr>& rhs, const Expr& det) {
    Comparison c;
    if (rhs.size() != f.rhs.size()) {
        c.pass = false;
        c.mismatches.push_back("expected " + std::to_string(f.rhs.size()) + " equations, got " +
                               std::to_string(rhs.size()));
        return c;
    }
    for (std::size_t n = 0; n < rhs.size(); ++n) {
        if (!rhs[n].equivalent(expected_rhs(f.rhs[n]))) {
            c.pass = false;
            c.mismatches.push_back("equation " + std::to_string(n + 1) + ": got " + sym::render(rhs[n], sym::Style::Text));
        }
    }
    if (!f.det.empty() && det != expected_expr(f.det)) {
        c.pass = false;
        c.mismatches.push_back("det: got " + sym::text(det));
    }
    return c;
}

Comparison compare_matrix(const MatrixFixture& f, const SymMatrix& computed, const Expr& den) {
    Comparison c;
    const Matrix<RationalExpr> want = expected_matrix(f);
    if (want.rows() != computed.rows() || want.cols() != computed.cols()) {
        c.pass = false;
        c.mismatches.push_back("shape mismatch");
        return c;
    }
    for (std::size_t r = 0; r < want.rows(); ++r) {
        for (std::size_t k = 0; k < want.cols(); ++k) {
            const RationalExpr got(computed.at(r, k), den);
            if (!got.equivalent(want.at(r, k))) {
                c.pass = false;
                c.mismatches.push_back("entry (" + std::to_string(r + 1) + "," + std::to_string(k + 1) +
                                       "): got " + sym::render(got, sym::Style::Text));
            }
        }
    }
    return c;
}

}  // namespace liewn::fixtures
