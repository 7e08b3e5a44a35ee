#ifndef EPIGRAPH_ERRORS_HPP
#define EPIGRAPH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace epigraph {

/// Base class for every error the library throws on purpose.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// raster-io
class FileNotFoundError : public Error {
 public:
  explicit FileNotFoundError(const std::string& path)
      : Error("file not found: " + path) {}
};

class UnsupportedFormatError : public Error {
 public:
  explicit UnsupportedFormatError(const std::string& what) : Error(what) {}
};

class CorruptImageError : public Error {
 public:
  explicit CorruptImageError(const std::string& what) : Error(what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(what) {}
};

// binarization
class DegenerateHistogramError : public Error {
 public:
  DegenerateHistogramError()
      : Error("histogram has all mass at a single intensity") {}
};

// features
class EmptyMaskError : public Error {
 public:
  EmptyMaskError() : Error("mask selects no pixels") {}
};

// classification
class StratumTooSmallError : public Error {
 public:
  explicit StratumTooSmallError(const std::string& what) : Error(what) {}
};

class SingleClassTrainingSetError : public Error {
 public:
  SingleClassTrainingSetError()
      : Error("training set contains only one class") {}
};

// cli-harness
class ManifestParseError : public Error {
 public:
  explicit ManifestParseError(const std::string& what) : Error(what) {}
};

}  // namespace epigraph

#endif  // EPIGRAPH_ERRORS_HPP
