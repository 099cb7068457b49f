#pragma once

#include <stdexcept>
#include <string>

namespace obsloc {

struct MalformedFile : std::runtime_error {
  explicit MalformedFile(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedFormat : std::runtime_error {
  explicit UnsupportedFormat(const std::string& what) : std::runtime_error(what) {}
};

struct EmptyCloud : std::runtime_error {
  explicit EmptyCloud(const std::string& what) : std::runtime_error(what) {}
};

struct MissingNormals : std::runtime_error {
  explicit MissingNormals(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidEigenvalues : std::runtime_error {
  explicit InvalidEigenvalues(const std::string& what) : std::runtime_error(what) {}
};

struct InsufficientCorrespondences : std::runtime_error {
  explicit InsufficientCorrespondences(const std::string& what) : std::runtime_error(what) {}
};

struct NoConstraints : std::runtime_error {
  explicit NoConstraints(const std::string& what) : std::runtime_error(what) {}
};

struct LengthMismatch : std::runtime_error {
  explicit LengthMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NoAssociations : std::runtime_error {
  explicit NoAssociations(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace obsloc
