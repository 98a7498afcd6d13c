#pragma once

#include "klab/zero_test.hpp"

#include <string>
#include <vector>

namespace klab {

enum class Verdict { proved, numeric_pass, fail };
std::string_view to_string(Verdict v);

/// Outcome of one checked identity.
struct Certificate {
  std::string name;
  Verdict verdict = Verdict::proved;
  std::string detail;
  std::vector<ZeroWitness> witnesses;

  bool passed() const { return verdict != Verdict::fail; }
  bool proved() const { return verdict == Verdict::proved; }
};

/// Passes when `residual` vanishes identically.
Certificate certify_zero(std::string name, const RationalFunction &residual, const ZeroOptions &options);

/// Passes when every labelled residual vanishes; reports the first failing one.
Certificate certify_all_zero(std::string name, const std::vector<std::pair<std::string, RationalFunction>> &residuals,
                             const ZeroOptions &options);

/// Passes when `value` is not identically zero.
Certificate certify_nonzero(std::string name, const RationalFunction &value, const ZeroOptions &options);

Certificate pass(std::string name, std::string detail = {});
Certificate fail(std::string name, std::string detail);

/// Conjunction: fails if any part fails, numeric if any part is numeric.
Certificate combine(std::string name, const std::vector<Certificate> &parts);
Verdict weakest(const std::vector<Certificate> &parts);

/// Shortened printed form for reports.
std::string abbreviate(const std::string &text, std::size_t limit = 240);

} // namespace klab
