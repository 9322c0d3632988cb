#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cinesent {

// Base of every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Input text did not follow the expected file format.
class FormatError : public Error {
 public:
  using Error::Error;
};

class CatalogError : public Error {
 public:
  using Error::Error;
};

class UnmappedGenreError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class EmptySelectionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatchError : public Error {
 public:
  using Error::Error;
};

class TrainingDivergedError : public Error {
 public:
  TrainingDivergedError(const std::string& what, std::size_t epoch)
      : Error(what), epoch_(epoch) {}
  std::size_t epoch() const noexcept { return epoch_; }

 private:
  std::size_t epoch_;
};

class UnsupportedForLossError : public Error {
 public:
  using Error::Error;
};

class NoScoredContentError : public Error {
 public:
  using Error::Error;
};

class UnknownGroupError : public Error {
 public:
  using Error::Error;
};

// Transport failure for a contiguous span [begin, end) of a request batch.
class TransportError : public Error {
 public:
  TransportError(const std::string& what, std::size_t begin, std::size_t end)
      : Error(what), begin_(begin), end_(end) {}
  std::size_t batch_begin() const noexcept { return begin_; }
  std::size_t batch_end() const noexcept { return end_; }

 private:
  std::size_t begin_;
  std::size_t end_;
};

class ProtocolError : public Error {
 public:
  using Error::Error;
};

}  // namespace cinesent
