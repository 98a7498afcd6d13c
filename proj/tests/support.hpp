#pragma once

#include "klab/parser.hpp"
#include "klab/tensor.hpp"

#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace klab::testing {

inline Expression ex(std::string_view text) {
  ParseOptions o;
  o.declare_unknown = true;
  return parse(text, o);
}

inline RationalFunction rf(std::string_view text) { return ex(text).normal_form(); }

inline bool same(const RationalFunction &a, std::string_view b) { return a == rf(b); }

inline Multivector bivector(const Chart &c, const std::vector<std::tuple<std::string, std::string, std::string>> &entries) {
  Multivector P(c, 2);
  for (const auto &[a, b, v] : entries)
    P.set_component({coordinate(a), coordinate(b)}, ex(v));
  return P;
}

inline Multivector field(const Chart &c, const std::vector<std::string> &components) {
  std::vector<RationalFunction> v;
  for (const auto &s : components)
    v.push_back(rf(s));
  return vector_field(c, v);
}

inline DifferentialForm form1(const Chart &c, const std::vector<std::string> &components) {
  std::vector<RationalFunction> v;
  for (const auto &s : components)
    v.push_back(rf(s));
  return one_form(c, v);
}

inline DifferentialForm form2(const Chart &c, const std::vector<std::tuple<std::string, std::string, std::string>> &entries) {
  DifferentialForm w(c, 2);
  for (const auto &[a, b, v] : entries)
    w.set_component({coordinate(a), coordinate(b)}, ex(v));
  return w;
}

} // namespace klab::testing
