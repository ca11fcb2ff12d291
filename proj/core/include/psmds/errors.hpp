#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace psmds {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs with incompatible shapes or values that violate a type invariant.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The symmetric eigensolver exhausted its iteration budget.
class EigenSolverError : public Error {
 public:
  using Error::Error;
};

/// A configuration for which a functional is undefined, e.g. all points coincident.
class DegenerateConfiguration : public Error {
 public:
  using Error::Error;
};

/// A neighbour graph split into more than one connected component.
class DisconnectedGraph : public Error {
 public:
  explicit DisconnectedGraph(std::vector<std::size_t> component_sizes);

  const std::vector<std::size_t>& component_sizes() const noexcept { return sizes_; }

 private:
  std::vector<std::size_t> sizes_;
};

/// Rank correlation with a constant input.
class UndefinedCorrelation : public Error {
 public:
  using Error::Error;
};

}  // namespace psmds
