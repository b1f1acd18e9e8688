#pragma once

#include <stdexcept>
#include <string>

namespace dppkm {

// Input rejected before any computation (shape mismatch, bad index, bad k).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A principal submatrix stayed singular after ridging.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Data cannot support the request (all points identical, zero variance, ...).
class DegenerateDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SizeLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested cardinality exceeds the numerical rank of the kernel.
class RankError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an analysis routine does not hold.
class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dppkm
