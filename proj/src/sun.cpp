#include "liewn/sun.hpp"

#include "liewn/matexp.hpp"

namespace liewn::sun {

using sym::Coefficient;

std::string GeneratorLabel::text() const {
    switch (role) {
        case Role::PositiveRoot:
        case Role::NegativeRoot: return "r" + std::to_string(n) + std::to_string(k);
        case Role::Cartan: return "h" + std::to_string(n);
        case Role::Other: break;
    }
    return {};
}

Rational f1(std::size_t n, std::size_t k, std::size_t N) {
    const auto ni = static_cast<std::int64_t>(n);
    return Rational(static_cast<std::int64_t>(k) + static_cast<std::int64_t>(N) * (ni - 1)) -
           Rational(ni, 2) * Rational(ni + 1);
}

Rational f2(std::size_t n, std::size_t k) {
    const auto ni = static_cast<std::int64_t>(n);
    return Rational(static_cast<std::int64_t>(k)) + Rational((ni - 1) * (ni - 2), 2);
}

namespace {

std::size_t as_index(const Rational& r, const char* what) {
    if (!r.is_integer() || r.num() < 1) throw AlgebraError(std::string(what) + " produced a non-integral index");
    return static_cast<std::size_t>(r.num());
}

CMatrix unit(std::size_t N, std::size_t r, std::size_t c) {
    CMatrix m(N, N);
    m(r, c) = Coefficient(1);
    return m;
}

}  // namespace

GeneratorSet sun_generators(std::size_t N) {
    if (N < 2) throw AlgebraError("su(N) requires N >= 2");
    const std::size_t L = N * N - 1;
    const std::size_t roots = N * (N - 1) / 2;
    GeneratorSet g;
    g.N = N;
    g.name = "su" + std::to_string(N) + "_cwb";
    g.mats.resize(L);
    g.labels.resize(L);
    std::vector<bool> filled(L, false);
    auto place = [&](std::size_t l, CMatrix m, GeneratorLabel lab) {
        if (l < 1 || l > L || filled[l - 1]) throw AlgebraError("su(N) index map is not a bijection");
        filled[l - 1] = true;
        g.mats[l - 1] = std::move(m);
        g.labels[l - 1] = lab;
    };
    for (std::size_t n = 1; n <= N; ++n) {
        for (std::size_t k = 1; k <= N; ++k) {
            if (n < k) {
                place(as_index(f1(n, k, N), "f1"), unit(N, n, k), {GeneratorLabel::Role::PositiveRoot, n, k});
            } else if (n > k) {
                place((N * N + N - 2) / 2 + as_index(f2(n, k), "f2"), unit(N, n, k),
                      {GeneratorLabel::Role::NegativeRoot, n, k});
            }
        }
    }
    for (std::size_t j = 1; j < N; ++j) {
        CMatrix h(N, N);
        h(j, j) = Coefficient(1);
        h(j + 1, j + 1) = Coefficient(-1);
        place(roots + j, std::move(h), {GeneratorLabel::Role::Cartan, j, 0});
    }
    return g;
}

GeneratorSet gellmann_generators() {
    const Coefficient one(1);
    const Coefficient i = Coefficient::i();
    GeneratorSet g;
    g.N = 3;
    g.name = "su3_gellmann";
    auto m = [](std::initializer_list<std::tuple<std::size_t, std::size_t, Coefficient>> entries) {
        CMatrix x(3, 3);
        for (const auto& [r, c, v] : entries) x(r, c) = v;
        return x;
    };
    g.mats = {
        m({{1, 2, one}, {2, 1, one}}),
        m({{1, 2, -i}, {2, 1, i}}),
        m({{1, 1, one}, {2, 2, -one}}),
        m({{1, 3, one}, {3, 1, one}}),
        m({{1, 3, -i}, {3, 1, i}}),
        m({{2, 3, one}, {3, 2, one}}),
        m({{2, 3, -i}, {3, 2, i}}),
    };
    const Coefficient s = Coefficient::sqrt(3).inverse();
    g.mats.push_back(m({{1, 1, s}, {2, 2, s}, {3, 3, Coefficient(-2) * s}}));
    g.labels.assign(8, {});
    return g;
}

GeneratorSet pauli_generators() {
    const Coefficient h = Coefficient::i() * Coefficient(Rational(1, 2));
    GeneratorSet g;
    g.N = 2;
    g.name = "su2_pauli";
    CMatrix s1(2, 2), s2(2, 2), s3(2, 2);
    s1(1, 2) = h;
    s1(2, 1) = h;
    s2(1, 2) = h * -Coefficient::i();
    s2(2, 1) = h * Coefficient::i();
    s3(1, 1) = h;
    s3(2, 2) = -h;
    g.mats = {s1, s2, s3};
    g.labels.assign(3, {});
    return g;
}

GeneratorSet qubit_generators() {
    GeneratorSet g;
    g.N = 2;
    g.name = "su2_qubit";
    CMatrix h(2, 2);
    h(1, 1) = Coefficient(Rational(1, 2));
    h(2, 2) = Coefficient(Rational(-1, 2));
    g.mats = {unit(2, 1, 2), h, unit(2, 2, 1)};
    g.labels = {{GeneratorLabel::Role::PositiveRoot, 1, 2},
                {GeneratorLabel::Role::Cartan, 1, 0},
                {GeneratorLabel::Role::NegativeRoot, 2, 1}};
    return g;
}

lie::Algebra algebra(const GeneratorSet& g, sym::SymbolKind kind) {
    lie::Algebra a = lie::from_matrix_generators(g.mats, g.name);
    a.coefficient_kind = kind;
    return a;
}

SymMatrix explicit_teo(const GeneratorSet& g, const std::vector<Expr>& symbols) {
    if (symbols.size() != g.order()) throw IndexError("expected " + std::to_string(g.order()) + " coefficients");
    SymMatrix u = SymMatrix::identity(g.N);
    for (std::size_t l = 0; l < g.order(); ++l) u = u * mexp::sym_exp(to_sym(g.mats[l]), symbols[l]);
    return u;
}

SymMatrix explicit_teo(const GeneratorSet& g, sym::SymbolKind kind) {
    std::vector<Expr> s;
    for (std::size_t l = 1; l <= g.order(); ++l) s.emplace_back(sym::Symbol{kind, static_cast<std::uint32_t>(l)});
    return explicit_teo(g, s);
}

}  // namespace liewn::sun
