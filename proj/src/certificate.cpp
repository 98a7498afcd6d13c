#include "klab/certificate.hpp"

namespace klab {

std::string_view to_string(Verdict v) {
  switch (v) {
  case Verdict::proved: return "proved";
  case Verdict::numeric_pass: return "numeric-pass";
  case Verdict::fail: return "fail";
  }
  return "?";
}

std::string abbreviate(const std::string &text, std::size_t limit) {
  if (text.size() <= limit)
    return text;
  return text.substr(0, limit) + "...";
}

namespace {
Certificate from_verdict(std::string name, const ZeroVerdict &v, const std::string &label, const RationalFunction &r) {
  Certificate c;
  c.name = std::move(name);
  switch (v.status) {
  case ZeroStatus::proved_zero: c.verdict = Verdict::proved; break;
  case ZeroStatus::numeric_zero:
    c.verdict = Verdict::numeric_pass;
    c.detail = std::to_string(v.witnesses.size()) + " samples agree";
    break;
  default:
    c.verdict = Verdict::fail;
    c.detail = (label.empty() ? std::string() : label + ": ") + "residual " + abbreviate(format(r));
    break;
  }
  c.witnesses = v.witnesses;
  return c;
}
} // namespace

Certificate certify_zero(std::string name, const RationalFunction &residual, const ZeroOptions &options) {
  return from_verdict(std::move(name), is_zero(residual, options), {}, residual);
}

Certificate certify_all_zero(std::string name, const std::vector<std::pair<std::string, RationalFunction>> &residuals,
                             const ZeroOptions &options) {
  Certificate out;
  out.name = name;
  out.verdict = Verdict::proved;
  for (const auto &[label, r] : residuals) {
    if (r.is_zero())
      continue;
    ZeroVerdict v = is_zero(r, options);
    if (!v.is_zero())
      return from_verdict(name, v, label, r);
    if (out.verdict == Verdict::proved) {
      out.verdict = Verdict::numeric_pass;
      out.witnesses = v.witnesses;
    }
  }
  if (out.verdict == Verdict::numeric_pass)
    out.detail = std::to_string(out.witnesses.size()) + " samples agree per component";
  return out;
}

Certificate certify_nonzero(std::string name, const RationalFunction &value, const ZeroOptions &options) {
  Certificate c;
  c.name = std::move(name);
  if (value.is_zero()) {
    c.verdict = Verdict::fail;
    c.detail = "identically zero";
    return c;
  }
  ZeroVerdict v = is_zero(value, options);
  c.witnesses = v.witnesses;
  switch (v.status) {
  case ZeroStatus::proved_nonzero: c.verdict = Verdict::proved; break;
  case ZeroStatus::numeric_nonzero: c.verdict = Verdict::numeric_pass; break;
  default:
    c.verdict = Verdict::fail;
    c.detail = "vanishes at every sample";
    break;
  }
  return c;
}

Certificate pass(std::string name, std::string detail) { return Certificate{std::move(name), Verdict::proved, std::move(detail), {}}; }

Certificate fail(std::string name, std::string detail) {
  return Certificate{std::move(name), Verdict::fail, std::move(detail), {}};
}

Verdict weakest(const std::vector<Certificate> &parts) {
  Verdict v = Verdict::proved;
  for (const auto &p : parts) {
    if (p.verdict == Verdict::fail)
      return Verdict::fail;
    if (p.verdict == Verdict::numeric_pass)
      v = Verdict::numeric_pass;
  }
  return v;
}

Certificate combine(std::string name, const std::vector<Certificate> &parts) {
  Certificate c;
  c.name = std::move(name);
  c.verdict = weakest(parts);
  for (const auto &p : parts)
    if (p.verdict == c.verdict && p.verdict != Verdict::proved) {
      c.detail = p.name + (p.detail.empty() ? "" : ": " + p.detail);
      c.witnesses = p.witnesses;
      break;
    }
  return c;
}

} // namespace klab
