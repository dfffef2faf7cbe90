#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace vekua {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& what)
      : Error(what), offset_(offset), expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public Error {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : Error("unknown identifier '" + name + "' at offset " + std::to_string(offset)),
        offset_(offset),
        name_(std::move(name)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::size_t offset_;
  std::string name_;
};

/// Evaluation outside the domain of a function (ln of a non-positive number,
/// division by a vanishing quantity, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A generating pair with Im(conj(F) G) <= 0 or a vanishing determinant.
class DegeneratePair : public Error {
 public:
  using Error::Error;
};

/// A residual check exceeded its tolerance where the operation requires it to hold.
class ResidualError : public Error {
 public:
  ResidualError(std::string check, double residual, double tolerance)
      : Error(check + ": residual " + std::to_string(residual) + " exceeds tolerance " +
              std::to_string(tolerance)),
        check_(std::move(check)),
        residual_(residual),
        tolerance_(tolerance) {}

  const std::string& check() const noexcept { return check_; }
  double residual() const noexcept { return residual_; }
  double tolerance() const noexcept { return tolerance_; }

 private:
  std::string check_;
  double residual_;
  double tolerance_;
};

class QuadratureError : public Error {
 public:
  using Error::Error;
};

/// Two integration paths with common endpoints disagree.
class PathDependence : public Error {
 public:
  using Error::Error;
};

}  // namespace vekua
