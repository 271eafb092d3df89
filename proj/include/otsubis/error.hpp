#pragma once

#include <stdexcept>
#include <string>

namespace otsubis {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a PGM/PNG stream cannot be decoded.
class ImageFormatError : public Error {
 public:
  enum class Kind { MalformedHeader, UnsupportedMaxval, TruncatedData, UnsupportedBitDepth, BadPixel, Io };

  ImageFormatError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}

  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Fewer than two occupied histogram bins: every threshold scores zero.
class DegenerateHistogram : public Error {
 public:
  DegenerateHistogram() : Error("degenerate histogram: fewer than two distinct intensities") {}
};

class InvalidConfig : public Error {
 public:
  using Error::Error;
};

class InvalidBracket : public Error {
 public:
  using Error::Error;
};

class MaxIterationsExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace otsubis
