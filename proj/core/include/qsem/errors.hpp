#pragma once

#include <stdexcept>
#include <string>

namespace qsem {

// Malformed textual input (type strings, store files, lexicon lines, ...).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// A type sequence that does not reduce to a single sentence wire.  The
// residual the reducer got stuck on is kept as text for diagnostics.
struct UngrammaticalError : std::runtime_error {
    UngrammaticalError(const std::string& what, std::string residual_types)
        : std::runtime_error(what), residual(std::move(residual_types)) {}
    std::string residual;
};

// Dimension/wire mismatches and other structural violations.
struct ShapeError : std::runtime_error {
    explicit ShapeError(const std::string& what) : std::runtime_error(what) {}
};

// Persistence problems; carries the offending line when known (0 = n/a).
struct StoreError : std::runtime_error {
    explicit StoreError(const std::string& what, std::size_t line_no = 0)
        : std::runtime_error(what), line(line_no) {}
    std::size_t line;
};

// Invalid numeric arguments (tolerances, probabilities, grid specs, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qsem
