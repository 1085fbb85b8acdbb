#pragma once

#include <stdexcept>
#include <string>

namespace pdens {

/// Base of every error raised by the library. `kind()` is the stable name
/// used in JSON error objects.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PDENS_DEFINE_ERROR(Name)                                              \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& message) : Error(#Name, message) {}  \
    };

PDENS_DEFINE_ERROR(PrecisionExhausted)
PDENS_DEFINE_ERROR(DivisionByZero)
PDENS_DEFINE_ERROR(InvalidArgument)
PDENS_DEFINE_ERROR(InvalidSubgroup)
PDENS_DEFINE_ERROR(Unbounded)
PDENS_DEFINE_ERROR(UnsupportedSet)
PDENS_DEFINE_ERROR(InternalInconsistency)
PDENS_DEFINE_ERROR(DepthTooSmall)
PDENS_DEFINE_ERROR(NoStabilization)
PDENS_DEFINE_ERROR(ConditionStarViolated)
PDENS_DEFINE_ERROR(NonCone)
PDENS_DEFINE_ERROR(SemanticError)

#undef PDENS_DEFINE_ERROR

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : Error("SyntaxError", message + " at " + std::to_string(line) + ":" +
                                   std::to_string(column)),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

}  // namespace pdens
