#pragma once

#include <stdexcept>
#include <string>

namespace polymin {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Vector/point length does not match the number of variables.
class DimensionError : public Error {
public:
    explicit DimensionError(const std::string& what) : Error(what) {}
};

/// Expression or file could not be parsed; `offset` is a byte position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

/// A rewriting family lacks a rule for a border monomial it needs.
class CompletenessError : public Error {
public:
    explicit CompletenessError(const std::string& monomial)
        : Error("rewriting family is incomplete at border monomial " + monomial),
          monomial(monomial) {}
    std::string monomial;
};

/// The generators span the unit ideal.
class UnitIdealError : public Error {
public:
    UnitIdealError() : Error("ideal is the whole ring") {}
    explicit UnitIdealError(double residual)
        : Error("ideal is the whole ring (constant residual " + std::to_string(residual) + ")") {}
};

/// A moment value required by an operation is not available.
class MissingMomentError : public Error {
public:
    explicit MissingMomentError(const std::string& monomial)
        : Error("moment vector has no value for " + monomial), monomial(monomial) {}
    std::string monomial;
};

/// The objective cannot be represented on the moment span at this degree.
class AssembleError : public Error {
public:
    explicit AssembleError(const std::string& what) : Error(what) {}
};

/// Malformed SDPA sparse file; `line` is 1-based.
class SdpaParseError : public Error {
public:
    SdpaParseError(const std::string& what, int line)
        : Error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    int line;
};

/// Unrecoverable numerical failure (solver breakdown, clustered spectra, ...).
class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(what) {}
};

} // namespace polymin
