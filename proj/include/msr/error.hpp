#pragma once

#include <stdexcept>
#include <string>

namespace msr {

// Base of every error raised by the library. Callers that only care about
// "something was wrong with the request" can catch this.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParams : public Error {
 public:
  using Error::Error;
};

class FieldTooSmall : public Error {
 public:
  using Error::Error;
};

class ModulusMismatch : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class TooManyErasures : public Error {
 public:
  using Error::Error;
};

class InconsistentSurvivors : public Error {
 public:
  using Error::Error;
};

class WrongHelperCount : public Error {
 public:
  using Error::Error;
};

class PlanMismatch : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

class Case1Only : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace msr
