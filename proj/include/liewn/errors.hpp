#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace liewn {

/// Base for every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Expression shape outside the supported canonical form.
struct UnsupportedForm : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset)
        : Error(msg + " at offset " + std::to_string(offset)), offset(offset) {}
    std::size_t offset;
};

struct UnboundSymbol : Error {
    explicit UnboundSymbol(const std::string& name) : Error("unbound symbol " + name), symbol(name) {}
    std::string symbol;
};

struct IndexError : Error {
    using Error::Error;
};

struct AlgebraError : Error {
    using Error::Error;
};

struct StructuralError : Error {
    using Error::Error;
};

}  // namespace liewn
