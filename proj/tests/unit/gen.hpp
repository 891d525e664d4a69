#pragma once

// Random expression generators for property tests.

#include <random>

#include "liewn/tree.hpp"

namespace liewn::testgen {

using sym::Coefficient;
using sym::Node;
using sym::Rational;
using sym::Symbol;

inline Coefficient random_coeff(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 7);
    std::uniform_int_distribution<int> small(-3, 3);
    switch (pick(rng)) {
        case 0: return Coefficient(Rational(small(rng), 2));
        case 1: return Coefficient::i() * Coefficient(small(rng));
        case 2: return Coefficient::sqrt(2) * Coefficient(small(rng));
        case 3: return Coefficient::sqrt(3) * Coefficient(Rational(small(rng), 2));
        case 4: return Coefficient(Rational(small(rng)), Rational(small(rng), 3));
        default: return Coefficient(small(rng));
    }
}

inline Symbol random_symbol(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(0, 5);
    switch (pick(rng)) {
        case 0: return Symbol::lambda(1);
        case 1: return Symbol::lambda(2);
        case 2: return Symbol::lambda(3);
        case 3: return Symbol::eta(1);
        case 4: return Symbol::parameter("upsilon");
        default: return Symbol::parameter("epsilon");
    }
}

inline Node::Ptr random_tree(std::mt19937_64& rng, int depth, bool allow_exp = true) {
    std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 5);
    switch (pick(rng)) {
        case 0: return Node::constant(random_coeff(rng));
        case 1: return Node::sym(random_symbol(rng));
        case 2:
        case 3: {
            std::vector<Node::Ptr> xs;
            const int n = 2 + static_cast<int>(rng() % 2);
            for (int k = 0; k < n; ++k) xs.push_back(random_tree(rng, depth - 1, allow_exp));
            return pick(rng) % 2 ? Node::add(std::move(xs)) : Node::mul(std::move(xs));
        }
        case 4: return Node::pow(random_tree(rng, depth - 1, allow_exp), Rational(1 + static_cast<int>(rng() % 2)));
        default:
            if (!allow_exp) return Node::sym(random_symbol(rng));
            return Node::exp(random_tree(rng, depth - 1, false));
    }
}

}  // namespace liewn::testgen
