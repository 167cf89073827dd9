#pragma once

#include <stdexcept>
#include <string>

namespace meanfield {

// Base of every error raised by the library. The C API maps each subclass
// onto one mf_status code.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidConfiguration : public Error {
public:
  using Error::Error;
};

class DomainError : public Error {
public:
  using Error::Error;
};

class SingularMatrix : public Error {
public:
  using Error::Error;
};

class RangeError : public Error {
public:
  using Error::Error;
};

class Unsupported : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

} // namespace meanfield
