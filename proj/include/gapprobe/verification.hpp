#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapprobe/quadrature.hpp"

namespace gapprobe {

struct Check {
  std::string name;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double quadrature_error = 0.0;
  double scale = 0.0;      // magnitude the discrepancy is measured against
  double rel_error = 0.0;  // |closed_form - quadrature| / scale
  double tolerance = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  QuadratureSpec spec;
  double tolerance = 1e-9;
  // Scales the closed-form side of every check whose name starts with this
  // prefix by (1 + 1e-6). Exists to prove that the suite detects faults.
  std::optional<std::string> inject_fault;
};

const std::vector<double>& verification_sigmas();

// Closed form vs independent quadrature for every formula in the argument.
// Quadrature non-convergence propagates as NumericError.
std::vector<Check> run_verification(const VerifyOptions& options = {});

}  // namespace gapprobe
