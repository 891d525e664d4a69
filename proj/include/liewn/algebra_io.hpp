#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"
#include "liewn/liealg.hpp"

namespace liewn::io {

/// Schema violation; `pointer` is the JSON pointer of the offending value.
struct SchemaError : Error {
    SchemaError(const std::string& pointer, const std::string& msg)
        : Error(pointer + ": " + msg), pointer(pointer) {}
    std::string pointer;
};

/// Builds an algebra from the structure or generator form. With `check`, a
/// non-empty validation report raises AlgebraError carrying its summary.
lie::Algebra algebra_from_json(const nlohmann::json& doc, bool check = true);
nlohmann::json algebra_to_json(const lie::Algebra& a);

lie::Algebra load_algebra(const std::filesystem::path& path, bool check = true);
void save_algebra(const lie::Algebra& a, const std::filesystem::path& path);

}  // namespace liewn::io
