#pragma once

#include <stdexcept>
#include <string>

namespace segedit {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

// Run list breaks the canonical RLE invariants.
class MaskError : public Error {
  public:
    using Error::Error;
};

class ImageFormatError : public Error {
  public:
    using Error::Error;
};

} // namespace segedit
