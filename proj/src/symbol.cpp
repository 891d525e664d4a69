#include "liewn/symbol.hpp"

#include <cctype>
#include <charconv>
#include <deque>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <unordered_map>

namespace liewn::sym {

namespace {

struct Registry {
    std::shared_mutex mu;
    std::deque<std::string> names;
    std::unordered_map<std::string, std::uint32_t> ids;
};

Registry& registry() {
    static Registry r;
    return r;
}

std::optional<std::uint32_t> find_parameter(std::string_view name) {
    auto& r = registry();
    std::shared_lock lock(r.mu);
    auto it = r.ids.find(std::string(name));
    if (it == r.ids.end()) return std::nullopt;
    return it->second;
}

const char* greek_latex(const std::string& n) {
    static const std::unordered_map<std::string, const char*> table = {
        {"alpha", "\\alpha"},     {"beta", "\\beta"},   {"gamma", "\\gamma"},   {"delta", "\\delta"},
        {"epsilon", "\\epsilon"}, {"zeta", "\\zeta"},   {"kappa", "\\kappa"},   {"mu", "\\mu"},
        {"nu", "\\nu"},           {"xi", "\\xi"},       {"rho", "\\rho"},       {"sigma", "\\sigma"},
        {"tau", "\\tau"},         {"upsilon", "\\upsilon"}, {"phi", "\\phi"},   {"chi", "\\chi"},
        {"psi", "\\psi"},         {"omega", "\\omega"}, {"Delta", "\\Delta"},   {"Omega", "\\Omega"},
    };
    auto it = table.find(n);
    return it == table.end() ? nullptr : it->second;
}

std::optional<std::uint32_t> parse_index(std::string_view s) {
    if (s.empty() || s[0] == '0') return std::nullopt;
    std::uint32_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}  // namespace

Symbol Symbol::parameter(std::string_view name) {
    if (auto id = find_parameter(name)) return {SymbolKind::Parameter, *id};
    auto& r = registry();
    std::unique_lock lock(r.mu);
    auto [it, inserted] = r.ids.emplace(std::string(name), static_cast<std::uint32_t>(r.names.size()));
    if (inserted) r.names.emplace_back(name);
    return {SymbolKind::Parameter, it->second};
}

const std::string& Symbol::name() const {
    if (kind != SymbolKind::Parameter) throw std::logic_error("Symbol::name on non-parameter");
    auto& r = registry();
    std::shared_lock lock(r.mu);
    return r.names.at(index);
}

std::strong_ordering operator<=>(const Symbol& a, const Symbol& b) {
    if (a.kind != b.kind) return a.kind <=> b.kind;
    if (a.kind == SymbolKind::Parameter && a.index != b.index) {
        const int c = a.name().compare(b.name());
        return c < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return a.index <=> b.index;
}

std::string Symbol::text() const {
    switch (kind) {
        case SymbolKind::Lambda: return "L" + std::to_string(index);
        case SymbolKind::Theta: return "Th" + std::to_string(index);
        case SymbolKind::Eta: return "eta" + std::to_string(index);
        case SymbolKind::SmallLambda: return "lam" + std::to_string(index);
        case SymbolKind::Time: return "t";
        case SymbolKind::Parameter: return name();
    }
    return "?";
}

std::string Symbol::latex() const {
    const std::string sub = "_{" + std::to_string(index) + "}";
    switch (kind) {
        case SymbolKind::Lambda: return "\\Lambda" + sub;
        case SymbolKind::Theta: return "\\Theta" + sub;
        case SymbolKind::Eta: return "\\eta" + sub;
        case SymbolKind::SmallLambda: return "\\lambda" + sub;
        case SymbolKind::Time: return "t";
        case SymbolKind::Parameter: {
            const std::string& n = name();
            if (const char* g = greek_latex(n)) return g;
            return n.size() == 1 ? n : "\\mathrm{" + n + "}";
        }
    }
    return "?";
}

std::optional<Symbol> symbol_from_name(std::string_view name, bool allow_new_parameters) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0]))) return std::nullopt;
    if (name == "i") return std::nullopt;
    if (name == "t") return Symbol::time();
    struct Prefix {
        std::string_view p;
        SymbolKind k;
    };
    static constexpr Prefix prefixes[] = {{"eta", SymbolKind::Eta},
                                          {"lam", SymbolKind::SmallLambda},
                                          {"Th", SymbolKind::Theta},
                                          {"L", SymbolKind::Lambda}};
    for (const auto& pre : prefixes) {
        if (name.size() > pre.p.size() && name.substr(0, pre.p.size()) == pre.p) {
            if (auto idx = parse_index(name.substr(pre.p.size()))) return Symbol{pre.k, *idx};
        }
    }
    if (auto id = find_parameter(name)) return Symbol{SymbolKind::Parameter, *id};
    if (allow_new_parameters) return Symbol::parameter(name);
    return std::nullopt;
}

}  // namespace liewn::sym
