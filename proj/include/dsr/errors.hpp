#pragma once

#include <stdexcept>
#include <string>

namespace dsr {

/// A state failed a structural precondition (purity, positivity, dimension).
class invalid_state_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The requested Fock cutoff cannot represent the state to the requested
/// tail tolerance. Carries the norm (or trace) actually captured.
class insufficient_cutoff_error : public std::runtime_error {
 public:
  insufficient_cutoff_error(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_norm_(achieved) {}
  double achieved_norm() const { return achieved_norm_; }

 private:
  double achieved_norm_;
};

class dimension_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace dsr
