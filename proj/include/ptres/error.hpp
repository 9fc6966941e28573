#pragma once

#include <stdexcept>
#include <string>

namespace ptres {

enum class errc {
  pole_of_gamma,
  ratio_pole,
  working_range_exceeded,
  singular_energy,
  degenerate_delta,
  pole_of_green,
  degenerate_denominator,
  airy_denominator_zero,
  count_mismatch,
  contour_through_zero,
  singular_b,
  not_singular_case,
  degenerate_pole,
  probe_node,
  stiffness_failure,
  blow_up,
  wronskian_underflow,
  invalid_argument,
};

inline const char* to_string(errc code) {
  switch (code) {
    case errc::pole_of_gamma: return "PoleOfGamma";
    case errc::ratio_pole: return "RatioPole";
    case errc::working_range_exceeded: return "WorkingRangeExceeded";
    case errc::singular_energy: return "SingularEnergy";
    case errc::degenerate_delta: return "DegenerateDelta";
    case errc::pole_of_green: return "PoleOfGreen";
    case errc::degenerate_denominator: return "DegenerateDenominator";
    case errc::airy_denominator_zero: return "AiryDenominatorZero";
    case errc::count_mismatch: return "CountMismatch";
    case errc::contour_through_zero: return "ContourThroughZero";
    case errc::singular_b: return "SingularB";
    case errc::not_singular_case: return "NotSingularCase";
    case errc::degenerate_pole: return "DegeneratePole";
    case errc::probe_node: return "ProbeNode";
    case errc::stiffness_failure: return "StiffnessFailure";
    case errc::blow_up: return "BlowUp";
    case errc::wronskian_underflow: return "WronskianUnderflow";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI, the scan driver) can branch without parsing messages.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace ptres
