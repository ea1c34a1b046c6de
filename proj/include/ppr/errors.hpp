#pragma once

#include <stdexcept>
#include <string>

namespace ppr {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied an argument outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// A numerical model could not be realized (non-PD covariance, zero pivot).
class ModelError : public Error {
 public:
  using Error::Error;
};

// An integrand produced a non-finite value.
class IntegrationDomainError : public Error {
 public:
  using Error::Error;
};

// File could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Invariant the library guarantees was violated; indicates a bug.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace ppr
