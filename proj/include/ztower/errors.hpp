#pragma once

#include <stdexcept>
#include <string>

namespace ztower {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed spec file or spec-level invariant violation; carries the JSON field path.
class SpecError : public Error {
 public:
  SpecError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// A layer of the tower (or a plain graph) that should be connected is not.
class DisconnectedError : public Error {
 public:
  DisconnectedError(int level, const std::string& what) : Error(what), level_(level) {}
  int level() const { return level_; }

 private:
  int level_;
};

/// det(D - B) vanished: the Picard module is not torsion.
class NonTorsionError : public Error {
 public:
  using Error::Error;
};

class NonPlanarError : public Error {
 public:
  using Error::Error;
};

/// Refusal to build a layer whose size exceeds the configured limit.
class GuardrailError : public Error {
 public:
  using Error::Error;
};

}  // namespace ztower
