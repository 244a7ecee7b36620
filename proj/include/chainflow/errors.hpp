// Copyright 2026 The chainflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace chainflow {

/// Base of every error raised by the library. The CLI maps subclasses onto
/// exit codes, so keep the hierarchy shallow.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad JSON, inconsistent shapes, unknown names.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class CycleError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class RankMismatchError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnclassifiedError : public Error {
 public:
  using Error::Error;
};

class MissingAnnotationError : public Error {
 public:
  using Error::Error;
};

class NoAssignmentError : public Error {
 public:
  using Error::Error;
};

class InfeasibleEdgeError : public NoAssignmentError {
 public:
  InfeasibleEdgeError(const std::string& what, int src, int dest)
      : NoAssignmentError(what), src_(src), dest_(dest) {}
  int src() const { return src_; }
  int dest() const { return dest_; }

 private:
  int src_;
  int dest_;
};

/// Numerical precondition failures of the functional solver.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class SingularBlockError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace chainflow
