#include "liewn/catalog.hpp"

#include "liewn/parse.hpp"
#include "liewn/sun.hpp"

namespace liewn::catalog {

namespace {

using lie::StructureEntry;
using sym::Expr;

Expr num(std::int64_t n) { return Expr(sym::Coefficient(n)); }

}  // namespace

lie::Algebra table1() {
    const Expr ups(sym::Symbol::parameter("upsilon"));
    const Expr eps(sym::Symbol::parameter("epsilon"));
    return lie::from_structure_constants(3,
                                         {
                                             {1, 2, 1, -ups},
                                             {1, 3, 2, num(-2) * eps},
                                             {2, 3, 3, -ups},
                                         },
                                         {"upsilon", "epsilon"}, "table1");
}

lie::Algebra su2_pauli() {
    lie::Algebra a = sun::algebra(sun::pauli_generators(), sym::SymbolKind::Theta);
    a.name = "su2_pauli";
    return a;
}

lie::Algebra su2_cwb() {
    lie::Algebra a = sun::algebra(sun::sun_generators(2));
    a.name = "su2_cwb";
    return a;
}

lie::Algebra su3_cwb() {
    lie::Algebra a = sun::algebra(sun::sun_generators(3));
    a.name = "su3_cwb";
    return a;
}

lie::Algebra su4_cwb() {
    lie::Algebra a = sun::algebra(sun::sun_generators(4));
    a.name = "su4_cwb";
    return a;
}

lie::Algebra su3_gellmann() {
    lie::Algebra a = sun::algebra(sun::gellmann_generators());
    a.name = "su3_gellmann";
    return a;
}

lie::Algebra coupled_oscillators() {
    // [g_i, g_j] for i < j; absent pairs commute
    const std::vector<StructureEntry> upper = {
        {1, 5, 3, num(-2)},  {1, 6, 1, num(-2)},  {1, 8, 6, num(-4)},  {1, 8, 11, num(-2)}, {1, 10, 4, num(-2)},
        {2, 4, 3, num(-2)},  {2, 7, 2, num(-2)},  {2, 9, 7, num(-4)},  {2, 9, 11, num(-2)}, {2, 10, 5, num(-2)},
        {3, 4, 1, num(-1)},  {3, 5, 2, num(-1)},  {3, 6, 3, num(-1)},  {3, 7, 3, num(-1)},  {3, 8, 5, num(-2)},
        {3, 9, 4, num(-2)},  {3, 10, 6, num(-1)}, {3, 10, 7, num(-1)}, {3, 10, 11, num(-1)},
        {4, 5, 6, num(1)},   {4, 5, 7, num(-1)},  {4, 6, 4, num(-1)},  {4, 7, 4, num(1)},   {4, 8, 10, num(-2)},
        {4, 10, 9, num(-1)}, {5, 6, 5, num(1)},   {5, 7, 5, num(-1)},  {5, 9, 10, num(-2)}, {5, 10, 8, num(-1)},
        {6, 8, 8, num(-2)},  {6, 10, 10, num(-1)}, {7, 9, 9, num(-2)}, {7, 10, 10, num(-1)},
    };
    return lie::from_structure_constants(11, upper, {}, "coupled_oscillators");
}

const std::vector<Entry>& shipped() {
    static const std::vector<Entry> entries = {
        {"table1", &table1},         {"su2_pauli", &su2_pauli},       {"su2_cwb", &su2_cwb},
        {"su3_gellmann", &su3_gellmann}, {"su3_cwb", &su3_cwb},     {"su4_cwb", &su4_cwb},
        {"coupled_oscillators", &coupled_oscillators},
    };
    return entries;
}

lie::Algebra by_name(const std::string& stem) {
    for (const auto& e : shipped()) {
        if (e.stem == stem) return e.make();
    }
    throw Error("unknown algebra '" + stem + "'");
}

}  // namespace liewn::catalog
