#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pnav {

/// Base class for all recoverable toolkit errors. Anything derived from
/// Error is a problem with the input data or configuration; programming
/// errors stay on std::logic_error.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InsufficientData : public Error {
public:
  using Error::Error;
};

class DegenerateMotion : public Error {
public:
  using Error::Error;
};

class MismatchedSets : public Error {
public:
  using Error::Error;
};

class DegenerateGeometry : public Error {
public:
  using Error::Error;
};

class EmptyBlock : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

class InvalidTimestep : public Error {
public:
  using Error::Error;
};

class ZeroVector : public Error {
public:
  using Error::Error;
};

class EmptySample : public Error {
public:
  using Error::Error;
};

class EmptyGroup : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

/// Malformed or truncated input file. Carries the byte offset at which the
/// problem was detected when that is meaningful (UINT64_MAX otherwise).
class CorruptFile : public Error {
public:
  CorruptFile(const std::string& what, std::uint64_t byte_offset)
      : Error(what + " (byte offset " + std::to_string(byte_offset) + ")"),
        byte_offset_(byte_offset) {}
  explicit CorruptFile(const std::string& what)
      : Error(what), byte_offset_(UINT64_MAX) {}

  std::uint64_t byte_offset() const { return byte_offset_; }

private:
  std::uint64_t byte_offset_;
};

/// Filesystem-level failure (missing file, unwritable path).
class IoError : public Error {
public:
  using Error::Error;
};

/// Unparseable text input (CSV, config, chain description).
class ParseError : public Error {
public:
  using Error::Error;
};

}  // namespace pnav
