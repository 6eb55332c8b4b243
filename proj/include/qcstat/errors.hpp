// Error taxonomy shared by the whole library. The CLI maps each class to a
// distinct exit code, so new error sites should pick the narrowest fit.

#ifndef QCSTAT_ERRORS_HPP
#define QCSTAT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qcstat {

// Invalid argument values: out-of-range parameters, malformed inputs.
class domain_error : public std::runtime_error {
 public:
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Request exceeds an enumeration/size budget; a cheaper operation exists.
class capacity_error : public std::runtime_error {
 public:
  explicit capacity_error(const std::string& what) : std::runtime_error(what) {}
};

// Inputs are formally valid but make the quantity undefined (zero
// denominator, zero variance, |rho| = 1).
class degenerate_error : public std::runtime_error {
 public:
  explicit degenerate_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qcstat

#endif  // QCSTAT_ERRORS_HPP
