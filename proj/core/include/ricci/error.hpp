#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ricci {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse failure or a surface that is not a closed oriented 2-manifold.
class MeshError : public Error {
 public:
  explicit MeshError(const std::string& what, std::optional<std::size_t> face = std::nullopt)
      : Error(what), face_(face) {}
  std::optional<std::size_t> face() const { return face_; }

 private:
  std::optional<std::size_t> face_;
};

/// A triangle violates the strict triangle inequality.
class DegenerateTriangle : public Error {
 public:
  explicit DegenerateTriangle(const std::string& what, std::optional<std::size_t> face = std::nullopt)
      : Error(what), face_(face) {}
  std::optional<std::size_t> face() const { return face_; }

 private:
  std::optional<std::size_t> face_;
};

/// Input outside the hypotheses of the normalized flow (chi >= 0).
class FlowRefusal : public Error {
 public:
  using Error::Error;
};

/// Adaptive step control shrank dt below dt_min.
class StepUnderflow : public Error {
 public:
  StepUnderflow(const std::string& what, std::size_t face, double t)
      : Error(what), face_(face), t_(t) {}
  std::size_t face() const { return face_; }
  double time() const { return t_; }

 private:
  std::size_t face_;
  double t_;
};

/// Iterative eigensolver exhausted its iteration budget.
class SolverError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace ricci
