#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lnlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A spectrum was evaluated outside the cone where f is defined.
class DomainError : public Error {
 public:
  DomainError(const std::string& what, double margin)
      : Error(what), margin_(margin) {}
  double margin() const noexcept { return margin_; }

 private:
  double margin_;
};

/// Gradient requested at a point too close to the cone boundary.
class DegeneratePoint : public DomainError {
 public:
  using DomainError::DomainError;
};

class InvalidProfile : public Error {
 public:
  using Error::Error;
};

class CriticalPoint : public Error {
 public:
  CriticalPoint(const std::string& what, std::size_t node)
      : Error(what), node_(node) {}
  std::size_t node() const noexcept { return node_; }

 private:
  std::size_t node_;
};

class NoCertificate : public Error {
 public:
  NoCertificate(const std::string& what, std::size_t worst_node)
      : Error(what), worst_node_(worst_node) {}
  std::size_t worst_node() const noexcept { return worst_node_; }

 private:
  std::size_t worst_node_;
};

/// A solver iterate left the admissible set Γ^τ.
class InadmissibleIterate : public Error {
 public:
  InadmissibleIterate(const std::string& what, std::size_t worst_node,
                      double margin)
      : Error(what), worst_node_(worst_node), margin_(margin) {}
  std::size_t worst_node() const noexcept { return worst_node_; }
  double margin() const noexcept { return margin_; }

 private:
  std::size_t worst_node_;
  double margin_;
};

class ContinuationStall : public Error {
 public:
  ContinuationStall(const std::string& what, double parameter)
      : Error(what), parameter_(parameter) {}
  /// Last parameter value that was solved successfully.
  double parameter() const noexcept { return parameter_; }

 private:
  double parameter_;
};

}  // namespace lnlab
