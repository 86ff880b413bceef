#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace lipcore {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed arguments, unknown identifiers, parse failures.
class InputError : public Error {
 public:
  using Error::Error;
};

// A distance table violates the four-point condition (or the triangle
// inequality) beyond tolerance. Indices refer to rows of the table that was
// being reconstructed.
class ReconstructionError : public Error {
 public:
  ReconstructionError(const std::string& what, std::array<std::size_t, 4> witness,
                      double violation)
      : Error(what), witness_(witness), violation_(violation) {}

  const std::array<std::size_t, 4>& witness() const noexcept { return witness_; }
  double violation() const noexcept { return violation_; }

 private:
  std::array<std::size_t, 4> witness_;
  double violation_;
};

// The pseudo-metric of a grid homotopy is not a tree metric at this
// resolution. The witness holds flat (row-major) grid vertex indices.
class NotTreeLike : public Error {
 public:
  NotTreeLike(const std::string& what, std::array<std::size_t, 4> witness, double violation)
      : Error(what), witness_(witness), violation_(violation) {}

  const std::array<std::size_t, 4>& witness() const noexcept { return witness_; }
  double violation() const noexcept { return violation_; }

 private:
  std::array<std::size_t, 4> witness_;
  double violation_;
};

// Two grid vertices in one collapse class map to distinct target points.
class QuotientInconsistent : public Error {
 public:
  QuotientInconsistent(const std::string& what, std::size_t vertex, std::size_t representative,
                       double gap)
      : Error(what), vertex_(vertex), representative_(representative), gap_(gap) {}

  std::size_t vertex() const noexcept { return vertex_; }
  std::size_t representative() const noexcept { return representative_; }
  double gap() const noexcept { return gap_; }

 private:
  std::size_t vertex_;
  std::size_t representative_;
  double gap_;
};

// Iterative solver failed to converge; carries the last bracket.
class NumericError : public Error {
 public:
  NumericError(const std::string& what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

// The minimizer hit its iteration cap; carries the last two lengths.
class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, double previous, double last)
      : Error(what), previous_(previous), last_(last) {}

  double previous_length() const noexcept { return previous_; }
  double last_length() const noexcept { return last_; }

 private:
  double previous_;
  double last_;
};

// A certified inequality failed. `first`/`second` identify the violating pair
// in whatever index space the check uses (grid vertices or tree nodes).
class CertificateFailure : public Error {
 public:
  CertificateFailure(const std::string& what, std::size_t first, std::size_t second)
      : Error(what), pair_(first, second) {}

  const std::pair<std::size_t, std::size_t>& pair() const noexcept { return pair_; }

 private:
  std::pair<std::size_t, std::size_t> pair_;
};

// Raised by the shortening pipeline when one of its own inequalities fails;
// points to a defect in the upstream quotient.
class InternalConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace lipcore
