#pragma once

#include <stdexcept>
#include <string>

namespace levilab {

enum class ErrorKind {
  domain_error,        // log/sqrt/div outside the expression's domain
  parse_error,         // expression or spec syntax
  unknown_name,        // catalog lookup failed
  no_convergence,      // iterative scheme exhausted its budget
  degenerate_gradient, // |grad rho| below the defining-function floor
  not_smooth,          // differential operation on a membership-only domain
  sampling_error,      // could not generate enough valid samples
  curve_not_closed,
  empty_set,
  singular_disc,
  expression_blowup,   // symbolic tree exceeded the node budget
  degenerate_data,     // estimator input carries no signal
  usage_error,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string& msg)
      : Error(ErrorKind::parse_error,
              "parse error at " + std::to_string(line) + ":" + std::to_string(col) + ": " + msg),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_;
  int col_;
};

[[noreturn]] inline void raise(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

const char* error_kind_name(ErrorKind kind);

} // namespace levilab
