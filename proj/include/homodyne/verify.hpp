#pragma once

#include <string>
#include <vector>

namespace homodyne::verify {

enum class Status { Pass, Fail, Warn };

struct CheckResult {
  std::string identity;     // e.g. "displaced-squeezed-qfi"
  std::string description;
  double deviation = 0.0;   // max deviation observed (relative where noted)
  double tolerance = 0.0;
  Status status = Status::Pass;
  std::string note;         // failure reason or remediation hint
};

struct VerifyOptions {
  double alpha2 = 10.0;   // coherent photon number for the single-mode checks
  int cutoff = 60;        // single-mode Fock cutoff for those checks
  int qfi_cutoff = 40;    // displaced-squeezed QFI check
  int lo_cutoff = 30;     // finite local-oscillator checks
  bool inject_fault = false;  // perturbs one closed form; harness self-test
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  std::vector<CheckResult> warnings;

  bool all_passed() const;
};

/// Cross-checks every closed form against the Gaussian propagation and the
/// truncated Fock-space oracle. Known inconsistencies in the reference
/// formulas are reported as warnings, never failures.
VerifyReport run_oracle_suite(const VerifyOptions& options = {});

std::string render(const VerifyReport& report);

}  // namespace homodyne::verify
