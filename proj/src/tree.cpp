#include "liewn/tree.hpp"

namespace liewn::sym {

Node::Ptr Node::constant(Coefficient c) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Const;
    n->value = std::move(c);
    return n;
}

Node::Ptr Node::sym(Symbol s) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sym;
    n->symbol = s;
    return n;
}

Node::Ptr Node::add(std::vector<Ptr> xs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Add;
    n->children = std::move(xs);
    return n;
}

Node::Ptr Node::mul(std::vector<Ptr> xs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Mul;
    n->children = std::move(xs);
    return n;
}

Node::Ptr Node::pow(Ptr base, Rational e) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Pow;
    n->children = {std::move(base)};
    n->exponent = e;
    return n;
}

Node::Ptr Node::exp(Ptr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exp;
    n->children = {std::move(arg)};
    return n;
}

Expr normalize(const Node& n) {
    switch (n.kind) {
        case Node::Kind::Const: return Expr(n.value);
        case Node::Kind::Sym: return Expr(n.symbol);
        case Node::Kind::Add: {
            Expr r;
            for (const auto& c : n.children) r += normalize(*c);
            return r;
        }
        case Node::Kind::Mul: {
            Expr r(1);
            for (const auto& c : n.children) r *= normalize(*c);
            return r;
        }
        case Node::Kind::Exp: return Expr::exp(normalize(*n.children.at(0)));
        case Node::Kind::Pow: {
            const Expr base = normalize(*n.children.at(0));
            if (!n.exponent.is_integer()) throw UnsupportedForm("non-integer exponent " + n.exponent.str());
            const std::int64_t e = n.exponent.num();
            if (e >= 0) return base.pow(static_cast<unsigned>(e));
            if (base.is_zero()) throw UnsupportedForm("negative power of zero");
            if (!base.is_unit()) throw UnsupportedForm("negative exponent on a non-unit base");
            return base.inverse_unit().pow(static_cast<unsigned>(-e));
        }
    }
    return {};
}

Node::Ptr to_tree(const Expr& e) {
    std::vector<Node::Ptr> sum;
    for (const auto& t : e.terms()) {
        std::vector<Node::Ptr> prod{Node::constant(t.coeff)};
        for (const auto& [s, p] : t.mono) prod.push_back(p == 1 ? Node::sym(s) : Node::pow(Node::sym(s), Rational(p)));
        if (!t.exp.empty()) prod.push_back(Node::exp(to_tree(Expr::from_exparg(t.exp))));
        sum.push_back(Node::mul(std::move(prod)));
    }
    return Node::add(std::move(sum));
}

}  // namespace liewn::sym
