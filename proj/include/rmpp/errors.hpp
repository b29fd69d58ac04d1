#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rmpp {

// Invalid parameter values are reported as std::domain_error. The two types
// below cover caller contract breaches and numerical blow-up.

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A non-finite state was produced; `last_good_index` is the last sample that
/// was still finite.
class IntegrationBlowup : public std::runtime_error {
 public:
  IntegrationBlowup(const std::string& what, std::size_t last_good_index)
      : std::runtime_error(what + " (last good index " + std::to_string(last_good_index) + ")"),
        last_good_index_(last_good_index) {}

  std::size_t last_good_index() const noexcept { return last_good_index_; }

 private:
  std::size_t last_good_index_;
};

}  // namespace rmpp
