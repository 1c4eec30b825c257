#pragma once

#include <stdexcept>
#include <string>

namespace cmcert {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the domain of the function (x <= 0, k > cap, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// An enclosure could not be tightened to the requested precision.
class PrecisionError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class NotDivisible : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class FixtureMismatch : public Error {
 public:
  using Error::Error;
};

class CertificateFailure : public Error {
 public:
  using Error::Error;
};

class IndeterminateSign : public Error {
 public:
  using Error::Error;
};

}  // namespace cmcert
