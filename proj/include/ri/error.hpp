#pragma once

#include <stdexcept>
#include <string>

namespace ri {

/// Raised when an argument lies outside the domain of an operation
/// (point outside the cone, index out of range, invalid grid, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an optimal space is requested but the existence condition fails.
class NonExistentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid campaign or space configuration. `path` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace ri
