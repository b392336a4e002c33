#pragma once

#include <stdexcept>
#include <string>

namespace evofs {

// Malformed input data: bad cell values, wrong arity, unreadable files.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally well-formed input that violates a documented contract:
// missing columns, unknown split tags, inconsistent groups, mismatched
// fingerprints.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evofs
