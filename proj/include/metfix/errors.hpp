#pragma once

#include <stdexcept>
#include <string>

namespace metfix {

// Problems with user-supplied data: malformed files, matrices that are not
// pre-metrics, inconsistent group tables. CLI maps these to exit code 2.
class validation_error : public std::runtime_error {
 public:
  enum class kind {
    bad_format,
    not_square,
    nonfinite,
    negative_entry,
    nonzero_diagonal,
    asymmetric,
    all_zero,
    point_mismatch,
    invalid_group,
  };

  validation_error(kind k, const std::string& what)
      : std::runtime_error(what), kind_(k) {}

  kind which() const { return kind_; }

 private:
  kind kind_;
};

// The deficiency data does not admit a correction function: either the
// dyadic construction ran out of room at some level, or the input was
// rejected up front as too discontinuous to repair. CLI maps these to exit
// code 3.
class correction_infeasible_error : public std::runtime_error {
 public:
  explicit correction_infeasible_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace metfix
