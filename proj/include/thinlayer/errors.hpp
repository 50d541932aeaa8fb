#pragma once

#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>

namespace thinlayer {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Bad input: violated precondition or invalid configuration field.
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what), message_(what) {}
  ValidationError(std::string field, const std::string& what)
      : Error(field + ": " + what), field_(std::move(field)), message_(what) {}

  const std::string& field() const noexcept { return field_; }
  /// The diagnostic without the field prefix.
  const std::string& message() const noexcept { return message_; }

private:
  std::string field_;
  std::string message_;
};

/// A small interface system or an oracle grid system is numerically singular.
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// The reduced boundary operator vanishes on a Fourier mode.
class ResonanceError : public Error {
public:
  ResonanceError(int mode, double lambda)
      : Error(describe(mode, lambda)),
        mode_(mode), lambda_(lambda) {}

  int mode() const noexcept { return mode_; }
  double lambda() const noexcept { return lambda_; }

private:
  static std::string describe(int mode, double lambda) {
    std::ostringstream os;
    os << "resonant mode n=" << mode << " (boundary symbol lambda=" << std::setprecision(17) << lambda << ")";
    return os.str();
  }

  int mode_;
  double lambda_;
};

}  // namespace thinlayer
