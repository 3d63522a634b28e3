#pragma once

#include <stdexcept>
#include <string>

namespace lrs {

/// Shape mismatch between matrix arguments (wrong rows/cols/column counts).
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Input fails a precondition that is not a shape or range issue
/// (non-finite entries, all-zero input, malformed configuration, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Integer argument (rank, truncation order, ...) outside its admissible range.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// sigma_r fell below the numerical-rank tolerance. Carries the numerical
/// rank so the caller can lower its working rank and retry.
class DegenerateRankError : public std::runtime_error {
 public:
  DegenerateRankError(const std::string& what, int numerical_rank)
      : std::runtime_error(what), numerical_rank_(numerical_rank) {}

  int numerical_rank() const noexcept { return numerical_rank_; }

 private:
  int numerical_rank_;
};

}  // namespace lrs
