#include "liewn/render.hpp"

#include <algorithm>

#include "json.hpp"

namespace liewn::sym {

namespace {

std::vector<const Term*> display_order(const Expr& e) {
    std::vector<const Term*> ts;
    for (const auto& t : e.terms()) ts.push_back(&t);
    std::stable_partition(ts.begin(), ts.end(), [](const Term* t) { return t->exp.empty(); });
    return ts;
}

std::string join_signed(const std::vector<std::string>& items) {
    if (items.empty()) return "0";
    std::string s;
    for (std::size_t k = 0; k < items.size(); ++k) {
        const std::string& it = items[k];
        if (k == 0) {
            s += it;
        } else if (it[0] == '-') {
            s += " - " + it.substr(1);
        } else {
            s += " + " + it;
        }
    }
    return s;
}

/// Prefix a coefficient to already-rendered factors.
std::string with_coeff(const Coefficient& c, const std::string& factors, const std::string& c_text,
                       const std::string& sep) {
    if (factors.empty()) return c_text;
    if (c.is_one()) return factors;
    if ((-c).is_one()) return "-" + factors;
    return c_text + sep + factors;
}

// ---------------------------------------------------------------- text

std::string text_expr(const Expr& e);

std::string text_mono(const Monomial& m) {
    std::string s;
    for (const auto& [sym, p] : m) {
        if (!s.empty()) s += "*";
        s += sym.text();
        if (p != 1) s += "^" + std::to_string(p);
    }
    return s;
}

std::string text_term(const Term& t) {
    std::string f = text_mono(t.mono);
    if (!t.exp.empty()) {
        if (!f.empty()) f += "*";
        f += "exp(" + text_expr(Expr::from_exparg(t.exp)) + ")";
    }
    return with_coeff(t.coeff, f, t.coeff.text(), "*");
}

std::string text_expr(const Expr& e) {
    std::vector<std::string> items;
    for (const Term* t : display_order(e)) items.push_back(text_term(*t));
    return join_signed(items);
}

// ---------------------------------------------------------------- latex

std::string latex_expr(const Expr& e, bool sugar);

std::string latex_mono(const Monomial& m) {
    std::string s;
    for (const auto& [sym, p] : m) {
        s += sym.latex();
        if (p != 1) s += "^{" + std::to_string(p) + "}";
    }
    return s;
}

std::string latex_exp(const ExpArg& a) { return "e^{" + latex_expr(Expr::from_exparg(a), false) + "}"; }

struct Item {
    Coefficient coeff;
    Monomial mono;
    ExpArg exp;            // plain exponential factor when func is empty
    std::string func;      // cos, sin, cosh, sinh
    ExpArg func_arg;
};

bool all_imaginary(const ExpArg& a) {
    return std::all_of(a.begin(), a.end(), [](const PolyTerm& p) {
        return std::all_of(p.coeff.parts().begin(), p.coeff.parts().end(),
                           [](const Coefficient::Part& q) { return q.re.is_zero(); });
    });
}

ExpArg scale(const ExpArg& a, const Coefficient& c) {
    ExpArg r = a;
    for (auto& p : r) p.coeff *= c;
    return r;
}

std::vector<Item> fold_pairs(const Expr& e) {
    const auto ts = display_order(e);
    std::vector<bool> used(ts.size(), false);
    std::vector<Item> items;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        if (used[k]) continue;
        const Term& t = *ts[k];
        used[k] = true;
        std::size_t partner = ts.size();
        if (!t.exp.empty()) {
            const ExpArg neg = exparg_neg(t.exp);
            for (std::size_t m = k + 1; m < ts.size(); ++m) {
                if (!used[m] && ts[m]->mono == t.mono && ts[m]->exp == neg) {
                    partner = m;
                    break;
                }
            }
        }
        if (partner == ts.size()) {
            items.push_back({t.coeff, t.mono, t.exp, "", {}});
            continue;
        }
        used[partner] = true;
        const Term& u = *ts[partner];
        const bool circ = all_imaginary(t.exp);
        // orient so the displayed argument has a positive leading coefficient
        ExpArg arg = circ ? scale(t.exp, Coefficient(Rational(0), Rational(-1))) : t.exp;
        const bool flip = !arg.empty() && arg.front().coeff.leading_sign() < 0;
        const Term& p = flip ? u : t;
        const Term& q = flip ? t : u;
        if (flip) arg = exparg_neg(arg);
        const Coefficient even = p.coeff + q.coeff;
        Coefficient odd = p.coeff - q.coeff;
        if (circ) odd *= Coefficient::i();
        if (!even.is_zero()) items.push_back({even, t.mono, {}, circ ? "cos" : "cosh", arg});
        if (!odd.is_zero()) items.push_back({odd, t.mono, {}, circ ? "sin" : "sinh", arg});
    }
    return items;
}

std::string latex_item(const Item& it, bool sugar) {
    std::string f = latex_mono(it.mono);
    if (!it.func.empty()) {
        f += "\\" + it.func + "(" + latex_expr(Expr::from_exparg(it.func_arg), sugar) + ")";
    } else if (!it.exp.empty()) {
        f += latex_exp(it.exp);
    }
    return with_coeff(it.coeff, f, it.coeff.latex(), "");
}

std::string latex_expr(const Expr& e, bool sugar) {
    std::vector<std::string> out;
    if (sugar) {
        for (const auto& it : fold_pairs(e)) out.push_back(latex_item(it, sugar));
    } else {
        for (const Term* t : display_order(e)) out.push_back(latex_item({t->coeff, t->mono, t->exp, "", {}}, false));
    }
    return join_signed(out);
}

// ---------------------------------------------------------------- json

nlohmann::json json_expr(const Expr& e) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : e.terms()) {
        nlohmann::json mono = nlohmann::json::array();
        for (const auto& [s, p] : t.mono) mono.push_back({s.text(), p});
        nlohmann::json jt = {{"coeff", t.coeff.text()}, {"monomial", mono}};
        jt["exp"] = t.exp.empty() ? nlohmann::json(nullptr) : nlohmann::json(text_expr(Expr::from_exparg(t.exp)));
        terms.push_back(jt);
    }
    return {{"text", text_expr(e)}, {"latex", latex_expr(e, true)}, {"terms", terms}};
}

}  // namespace

std::string render(const Expr& e, Style style) {
    switch (style) {
        case Style::Text: return text_expr(e);
        case Style::Latex: return latex_expr(e, true);
        case Style::Json: return json_expr(e).dump();
    }
    return {};
}

std::string render(const RationalExpr& e, Style style) {
    if (style == Style::Json) {
        return nlohmann::json{{"num", json_expr(e.num())}, {"den", json_expr(e.den())}}.dump();
    }
    if (e.is_polynomial()) return render(e.num(), style);
    if (style == Style::Latex) {
        return "\\frac{" + latex_expr(e.num(), true) + "}{" + latex_expr(e.den(), true) + "}";
    }
    return "(" + text_expr(e.num()) + ")/(" + text_expr(e.den()) + ")";
}

Style style_from_name(const std::string& name) {
    if (name == "latex") return Style::Latex;
    if (name == "text") return Style::Text;
    if (name == "json") return Style::Json;
    throw Error("unknown emit style '" + name + "' (expected latex|text|json)");
}

}  // namespace liewn::sym
