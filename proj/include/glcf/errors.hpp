#pragma once

#include <stdexcept>
#include <string>

namespace glcf {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct FieldMismatch : Error {
    explicit FieldMismatch(const std::string& what = "operands lie in different fields") : Error(what) {}
};

struct DivisionByZero : Error {
    explicit DivisionByZero(const std::string& what = "division by zero") : Error(what) {}
};

struct ZeroInput : Error {
    explicit ZeroInput(const std::string& what = "zero is not a unit") : Error(what) {}
};

struct InvalidField : Error {
    explicit InvalidField(const std::string& what) : Error(what) {}
};

struct SingularMatrix : Error {
    explicit SingularMatrix(const std::string& what = "matrix is not invertible") : Error(what) {}
};

struct NotInProduct : Error {
    explicit NotInProduct(const std::string& what = "element is not in the scalar-by-finitary product") : Error(what) {}
};

struct WindowUndetermined : Error {
    explicit WindowUndetermined(const std::string& what = "no computable window bound for this conjugator") : Error(what) {}
};

struct Undecidable : Error {
    explicit Undecidable(const std::string& what = "element presentation carries no tail certificate") : Error(what) {}
};

struct SearchExhausted : Error {
    explicit SearchExhausted(const std::string& what = "bounded witness search failed") : Error(what) {}
};

struct AmbientTooLarge : Error {
    explicit AmbientTooLarge(const std::string& what = "ambient group exceeds the enumeration bound") : Error(what) {}
};

struct UnknownSuite : Error {
    explicit UnknownSuite(const std::string& what = "unknown suite id") : Error(what) {}
};

struct ParseError : Error {
    explicit ParseError(const std::string& what) : Error(what) {}
};

} // namespace glcf
