#pragma once

#include <stdexcept>
#include <string>

namespace skewdim {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input. `where` names the offending field or symbol.
class InputError : public Error {
 public:
  InputError(const std::string& where, const std::string& what);
  const std::string& where() const { return where_; }
  // The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  std::string where_;
  std::string detail_;
};

// A semi-decidable search or statistical fit could not reach a verdict.
class InconclusiveError : public Error {
 public:
  using Error::Error;
};

// The fit window carried no mass.
class NoDataError : public InconclusiveError {
 public:
  using InconclusiveError::InconclusiveError;
};

// A configured size or time cap was hit.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

class SymmetryViolation : public Error {
 public:
  SymmetryViolation(const std::string& witness, double gap);
  const std::string& witness() const { return witness_; }
  double gap() const { return gap_; }

 private:
  std::string witness_;
  double gap_;
};

}  // namespace skewdim
