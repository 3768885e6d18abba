#pragma once

#include <stdexcept>
#include <string>

namespace semrd {

// Caller passed something outside an operation's domain (unknown id,
// overlapping sets, non-normalized source, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A state index outside a variable's cardinality.
class InvalidState : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A brute-force table or product alphabet would exceed the size guard.
class SizeGuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Network failed structural/probabilistic validation.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Network file does not match the documented schema.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UncodableSample : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WrongCodebook : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CorruptStream : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace semrd
