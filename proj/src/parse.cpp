#include "liewn/parse.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace liewn::sym {

namespace {

class Cursor {
public:
    explicit Cursor(std::string_view s) : s_(s) {}

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos_;
        return true;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    bool at_end() { return peek() == '\0'; }
    std::size_t pos() const { return pos_; }

    std::string_view ident(bool alnum) {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size()) {
            const auto ch = static_cast<unsigned char>(s_[pos_]);
            if (std::isalpha(ch) || (alnum && pos_ > start && (std::isdigit(ch) || ch == '_'))) {
                ++pos_;
            } else {
                break;
            }
        }
        return s_.substr(start, pos_ - start);
    }

    std::int64_t integer() {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (start == pos_ || ec != std::errc{}) {
            pos_ = start;
            fail("expected integer");
        }
        return v;
    }

    double decimal() {
        skip_ws();
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < s_.size() && s_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E') && pos_ + 1 < s_.size() &&
            (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) ||
             ((s_[pos_ + 1] == '-' || s_[pos_ + 1] == '+') && pos_ + 2 < s_.size() &&
              std::isdigit(static_cast<unsigned char>(s_[pos_ + 2]))))) {
            pos_ += 2;
            digits();
        }
        double v = 0;
        auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, v);
        if (start == pos_ || ec != std::errc{}) {
            pos_ = start;
            fail("expected number");
        }
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

private:
    std::string_view s_;
    std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- symbolic

class SymParser {
public:
    SymParser(std::string_view s, const ParseOptions& o) : c_(s), opts_(o) {}

    Node::Ptr run() {
        auto n = sum();
        if (!c_.at_end()) c_.fail("unexpected character");
        return n;
    }

private:
    Node::Ptr sum() {
        std::vector<Node::Ptr> xs{product()};
        for (;;) {
            if (c_.eat('+')) {
                xs.push_back(product());
            } else if (c_.eat('-')) {
                xs.push_back(Node::mul({Node::constant(-1), product()}));
            } else {
                break;
            }
        }
        return xs.size() == 1 ? xs[0] : Node::add(std::move(xs));
    }

    Node::Ptr product() {
        std::vector<Node::Ptr> xs{unary()};
        for (;;) {
            if (c_.eat('*')) {
                xs.push_back(unary());
            } else if (c_.peek() == '/') {
                c_.eat('/');
                xs.push_back(Node::pow(unary(), Rational(-1)));
            } else {
                break;
            }
        }
        return xs.size() == 1 ? xs[0] : Node::mul(std::move(xs));
    }

    Node::Ptr unary() {
        if (c_.eat('-')) return Node::mul({Node::constant(-1), unary()});
        if (c_.eat('+')) return unary();
        return power();
    }

    Node::Ptr power() {
        auto base = primary();
        if (c_.eat('^')) {
            const std::size_t at = c_.pos();
            std::int64_t e = 0;
            if (c_.eat('(')) {
                const bool neg = c_.eat('-');
                e = c_.integer();
                if (neg) e = -e;
                c_.expect(')');
            } else {
                const bool neg = c_.eat('-');
                e = c_.integer();
                if (neg) e = -e;
            }
            if (e == 0) c_.fail_at("zero exponent", at);
            return Node::pow(base, Rational(e));
        }
        return base;
    }

    Node::Ptr call_arg() {
        c_.expect('(');
        auto a = sum();
        c_.expect(')');
        return a;
    }

    Node::Ptr primary() {
        const char ch = c_.peek();
        if (ch == '(') return call_arg();
        if (std::isdigit(static_cast<unsigned char>(ch))) return Node::constant(Coefficient(c_.integer()));
        if (!std::isalpha(static_cast<unsigned char>(ch))) c_.fail("unexpected character");
        const std::size_t at = c_.pos();
        const std::string name(c_.ident(true));
        if (name == "i") return Node::constant(Coefficient::i());
        if (name == "exp") return Node::exp(call_arg());
        if (name == "sqrt") {
            c_.expect('(');
            const std::int64_t d = c_.integer();
            c_.expect(')');
            if (d < 1) c_.fail_at("sqrt argument must be a positive integer", at);
            return Node::constant(Coefficient::sqrt(d));
        }
        if (name == "cos" || name == "sin" || name == "cosh" || name == "sinh") return trig(name, call_arg());
        if (auto s = resolve(name)) return Node::sym(*s);
        c_.fail_at("unknown symbol '" + name + "'", at);
    }

    // cos x = (e^{ix}+e^{-ix})/2, sin x = (e^{ix}-e^{-ix})/(2i), hyperbolic analogues without i
    static Node::Ptr trig(const std::string& f, const Node::Ptr& x) {
        const bool circ = (f == "cos" || f == "sin");
        const bool even = (f == "cos" || f == "cosh");
        Node::Ptr arg = circ ? Node::mul({Node::constant(Coefficient::i()), x}) : x;
        Node::Ptr pos = Node::exp(arg);
        Node::Ptr neg = Node::exp(Node::mul({Node::constant(-1), arg}));
        Coefficient scale = Coefficient(Rational(1, 2));
        if (!even && circ) scale = Coefficient(Rational(0), Rational(-1, 2));
        Node::Ptr pair =
            even ? Node::add({pos, neg}) : Node::add({pos, Node::mul({Node::constant(-1), neg})});
        return Node::mul({Node::constant(scale), pair});
    }

    std::optional<Symbol> resolve(const std::string& name) const {
        if (opts_.parameters) {
            const auto& ps = *opts_.parameters;
            if (std::find(ps.begin(), ps.end(), name) != ps.end()) return Symbol::parameter(name);
            auto s = symbol_from_name(name, false);
            if (s && s->is_parameter() && !opts_.allow_new_parameters) return std::nullopt;
            if (!s && opts_.allow_new_parameters) return Symbol::parameter(name);
            return s;
        }
        return symbol_from_name(name, opts_.allow_new_parameters);
    }

    Cursor c_;
    const ParseOptions& opts_;
};

// ---------------------------------------------------------------- numeric

class NumParser {
public:
    explicit NumParser(std::string_view s) : c_(s) {}

    std::complex<double> run() {
        auto v = sum();
        if (!c_.at_end()) c_.fail("unexpected character");
        return v;
    }

private:
    using C = std::complex<double>;

    C sum() {
        C v = product();
        for (;;) {
            if (c_.eat('+')) {
                v += product();
            } else if (c_.eat('-')) {
                v -= product();
            } else {
                return v;
            }
        }
    }
    C product() {
        C v = unary();
        for (;;) {
            if (c_.eat('*')) {
                v *= unary();
            } else if (c_.eat('/')) {
                v /= unary();
            } else {
                return v;
            }
        }
    }
    C unary() {
        if (c_.eat('-')) return -unary();
        if (c_.eat('+')) return unary();
        return power();
    }
    C power() {
        C b = primary();
        if (c_.eat('^')) {
            const C e = unary();
            if (e.imag() == 0.0 && e.real() == std::round(e.real()) && std::abs(e.real()) <= 64) {
                const int n = static_cast<int>(e.real());
                C r(1.0);
                for (int k = 0; k < std::abs(n); ++k) r *= b;
                return n < 0 ? C(1.0) / r : r;
            }
            return std::pow(b, e);
        }
        return b;
    }
    C primary() {
        const char ch = c_.peek();
        if (ch == '(') {
            c_.eat('(');
            C v = sum();
            c_.expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return c_.decimal();
        if (!std::isalpha(static_cast<unsigned char>(ch))) c_.fail("unexpected character");
        const std::size_t at = c_.pos();
        const std::string name(c_.ident(false));
        if (name == "i") return {0.0, 1.0};
        if (name == "pi") return std::numbers::pi;
        if (name == "e") return std::numbers::e;
        static const std::pair<const char*, C (*)(const C&)> fns[] = {
            {"ln", [](const C& x) { return std::log(x); }},    {"log", [](const C& x) { return std::log(x); }},
            {"exp", [](const C& x) { return std::exp(x); }},   {"sqrt", [](const C& x) { return std::sqrt(x); }},
            {"sin", [](const C& x) { return std::sin(x); }},   {"cos", [](const C& x) { return std::cos(x); }},
            {"tan", [](const C& x) { return std::tan(x); }},   {"sinh", [](const C& x) { return std::sinh(x); }},
            {"cosh", [](const C& x) { return std::cosh(x); }}, {"tanh", [](const C& x) { return std::tanh(x); }},
        };
        for (const auto& [fname, f] : fns) {
            if (name == fname) return f(power());  // `ln2` and `ln(2)` both accepted
        }
        c_.fail_at("unknown name '" + name + "'", at);
    }

    Cursor c_;
};

}  // namespace

Node::Ptr parse_tree(std::string_view s, const ParseOptions& opts) { return SymParser(s, opts).run(); }

Expr parse_expr(std::string_view s, const ParseOptions& opts) { return normalize(*parse_tree(s, opts)); }

std::complex<double> parse_complex(std::string_view s) { return NumParser(s).run(); }

std::vector<std::complex<double>> parse_complex_list(std::string_view s) {
    std::vector<std::complex<double>> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k) {
        if (k < s.size() && s[k] == '(') ++depth;
        if (k < s.size() && s[k] == ')') --depth;
        if (k == s.size() || (s[k] == ',' && depth == 0)) {
            try {
                out.push_back(parse_complex(s.substr(start, k - start)));
            } catch (const ParseError& e) {
                throw ParseError(std::string("list item ") + std::to_string(out.size() + 1) + ": " + e.what(),
                                 start + e.offset);
            }
            start = k + 1;
        }
    }
    return out;
}

}  // namespace liewn::sym
