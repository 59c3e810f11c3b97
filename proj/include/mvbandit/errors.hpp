#pragma once

#include <stdexcept>
#include <string>

namespace mvbandit {

// Thrown when an action set does not span the ambient space but a full-rank
// operation was requested. Carries the numerical rank that was detected.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(int rank, int dim)
      : std::runtime_error("action set is rank deficient: numerical rank " +
                           std::to_string(rank) + " < d = " + std::to_string(dim)),
        rank_(rank) {}
  int rank() const noexcept { return rank_; }

 private:
  int rank_;
};

class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what)
      : std::runtime_error("singular matrix: " + what) {}
};

class CapExceededError : public std::runtime_error {
 public:
  CapExceededError(long long count, long long cap)
      : std::runtime_error("enumeration would produce " + std::to_string(count) +
                           " actions, exceeding the cap of " + std::to_string(cap)) {}
};

class InvalidSpecError : public std::runtime_error {
 public:
  explicit InvalidSpecError(const std::string& what)
      : std::runtime_error("invalid venue spec: " + what) {}
};

class InvalidInstanceError : public std::runtime_error {
 public:
  explicit InvalidInstanceError(const std::string& what)
      : std::runtime_error("invalid instance: " + what) {}
};

// Configuration / CLI input problems; message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mvbandit
