#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace liewn::sym {

/// Declaration order doubles as display order inside a monomial.
enum class SymbolKind : std::uint8_t { Parameter, Lambda, Theta, SmallLambda, Eta, Time };

struct Symbol {
    SymbolKind kind = SymbolKind::Lambda;
    std::uint32_t index = 0;  // 1-based for indexed kinds, registry id for parameters

    static constexpr Symbol lambda(std::uint32_t n) { return {SymbolKind::Lambda, n}; }
    static constexpr Symbol theta(std::uint32_t n) { return {SymbolKind::Theta, n}; }
    static constexpr Symbol eta(std::uint32_t n) { return {SymbolKind::Eta, n}; }
    static constexpr Symbol small_lambda(std::uint32_t n) { return {SymbolKind::SmallLambda, n}; }
    static constexpr Symbol time() { return {SymbolKind::Time, 0}; }
    /// Interns a named parameter (e.g. "upsilon").
    static Symbol parameter(std::string_view name);

    [[nodiscard]] bool is_parameter() const noexcept { return kind == SymbolKind::Parameter; }
    [[nodiscard]] const std::string& name() const;  // parameters only

    /// Parseable name: L3, eta2, lam1, Th2, t, or the parameter name.
    [[nodiscard]] std::string text() const;
    [[nodiscard]] std::string latex() const;

    friend constexpr bool operator==(const Symbol&, const Symbol&) = default;
    /// Parameters compare by name so ordering is independent of interning order.
    friend std::strong_ordering operator<=>(const Symbol& a, const Symbol& b);
};

/// Inverse of Symbol::text(). Unknown identifiers yield nullopt; parameter names
/// are only accepted when `allow_new_parameters` is set or already interned.
std::optional<Symbol> symbol_from_name(std::string_view name, bool allow_new_parameters);

struct SymbolHash {
    std::size_t operator()(const Symbol& s) const noexcept {
        return (static_cast<std::size_t>(s.kind) << 32) ^ s.index;
    }
};

}  // namespace liewn::sym
