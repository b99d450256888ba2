#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Input outside an operation's admissible range. The message names the
/// violated bound.
class domain_error : public std::invalid_argument {
 public:
  explicit domain_error(const std::string& what) : std::invalid_argument(what) {}
};

/// A numerical routine failed to deliver its contract (non-convergence,
/// divergent integral, indefinite form, ...).
class computation_error : public std::runtime_error {
 public:
  explicit computation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Requested height exceeds the admissible threshold r(alpha,N).
class threshold_error : public domain_error {
 public:
  threshold_error(const std::string& what, double threshold)
      : domain_error(what), threshold_(threshold) {}
  double threshold() const { return threshold_; }

 private:
  double threshold_;
};

/// Bidisc containment check failed (inconsistent certificate geometry).
class geometry_error : public computation_error {
 public:
  explicit geometry_error(const std::string& what) : computation_error(what) {}
};

}  // namespace bergman
