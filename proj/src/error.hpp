#pragma once

#include <stdexcept>
#include <string>

namespace locklab {

enum class ErrorKind {
    Parse,        // malformed input text (bench, dimacs, key strings)
    Validate,     // structurally invalid circuit (cycle, undriven net, arity)
    Argument,     // bad parameter to an operation
    Width,        // vector width mismatch
    Replay,       // replayed vector is not a distinguishing input
    Constraint,   // key constraints exclude every functionally correct key
    Unsupported,  // sequential elements and similar out-of-scope constructs
    Internal,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace locklab
