#ifndef PASSAGE_ERRORS_HPP
#define PASSAGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace passage {

// Malformed input text (chain-spec files, JSON documents).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Well-formed input that violates a model precondition (row sums, negative
// entries, reducibility, enumeration limits).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown on input that passed validation: near-singular solves,
// d != 1 detected in the forest accumulator, step-cap overruns.
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace passage

#endif
