#pragma once

#include <stdexcept>
#include <string>

namespace koopfilt {

// A simulation or filter update produced a non-finite value. `step` is the
// time-grid index at which it happened, or -1 when the caller has no grid.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what, long step = -1)
      : std::runtime_error(step >= 0 ? what + " (step " + std::to_string(step) + ")"
                                     : what),
        step_(step) {}

  long step() const { return step_; }

 private:
  long step_;
};

// An observable the generic generator builder cannot expand into the
// dictionary span (no closed-form monomial expansion available).
class UnsupportedObservable : public std::invalid_argument {
 public:
  explicit UnsupportedObservable(const std::string& observable_name)
      : std::invalid_argument("unsupported observable: " + observable_name),
        name_(observable_name) {}

  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

}  // namespace koopfilt
