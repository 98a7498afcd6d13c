#include "klab/zero_test.hpp"

#include <cmath>
#include <sstream>

namespace klab {

std::string_view to_string(ZeroStatus status) {
  switch (status) {
  case ZeroStatus::proved_zero: return "proved-zero";
  case ZeroStatus::proved_nonzero: return "proved-nonzero";
  case ZeroStatus::numeric_zero: return "numeric-zero";
  case ZeroStatus::numeric_nonzero: return "numeric-nonzero";
  }
  return "?";
}

std::string ZeroWitness::to_string() const {
  std::ostringstream os;
  os << "{";
  for (std::size_t i = 0; i < point.size(); ++i)
    os << (i ? ", " : "") << point[i].first << " = " << point[i].second.get_str();
  os << "} -> ";
  if (exact)
    os << exact->get_str();
  else
    os << value;
  return os.str();
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

long RationalSampler::uniform_int(long lo, long hi) {
  auto span = static_cast<std::uint64_t>(hi - lo + 1);
  return lo + static_cast<long>(rng_() % span);
}

mpq_class RationalSampler::next() {
  for (;;) {
    long q = uniform_int(1, 16);
    long bound = static_cast<long>(std::ceil(range_ * static_cast<double>(q))) - 1;
    long p = uniform_int(-bound, bound);
    if (p == 0)
      continue;
    mpq_class v(p, q);
    v.canonicalize();
    return v;
  }
}

Symbol RandomInterpretation::dummy(std::size_t i) {
  while (dummies_.size() <= i)
    dummies_.push_back(parameter("__u" + std::to_string(dummies_.size() + 1)));
  return dummies_[i];
}

double RandomInterpretation::operator()(Symbol f, const MultiIndex &derivative, const std::vector<double> &args) {
  auto it = base_.find(f);
  if (it == base_.end()) {
    std::size_t m = args.size();
    std::vector<RationalFunction> u;
    for (std::size_t i = 0; i < m; ++i)
      u.emplace_back(Expression(dummy(i)).normal_form());
    auto coeff = [&] { return RationalFunction(sampler_.next()); };
    RationalFunction p = coeff();
    for (std::size_t i = 0; i < m; ++i) {
      p = p + coeff() * u[i];
      for (std::size_t j = i; j < m; ++j) {
        p = p + coeff() * u[i] * u[j];
        for (std::size_t k = j; k < m; ++k)
          p = p + coeff() * u[i] * u[j] * u[k];
      }
    }
    RationalFunction lin = coeff();
    for (std::size_t i = 0; i < m; ++i)
      lin = lin + coeff() * u[i];
    p = p + coeff() * Expression::elementary(ElementaryFn::sin, Expression::from_normal_form(lin)).normal_form();
    it = base_.emplace(f, p).first;
  }
  auto key = std::make_pair(f, derivative);
  auto dit = derivatives_.find(key);
  if (dit == derivatives_.end()) {
    RationalFunction r = it->second;
    for (std::size_t i = 0; i < derivative.size(); ++i)
      for (int k = 0; k < derivative[i]; ++k)
        r = klab::derivative(r, dummy(i));
    dit = derivatives_.emplace(key, r).first;
  }
  std::map<Symbol, double> point;
  for (std::size_t i = 0; i < args.size(); ++i)
    point[dummy(i)] = args[i];
  auto v = evaluate(dit->second, point, {}, 0.0);
  return v ? v->value : std::nan("");
}

namespace {

std::vector<std::pair<std::string, mpq_class>> named_point(const std::vector<Symbol> &syms,
                                                           const std::vector<mpq_class> &values) {
  std::vector<std::pair<std::string, mpq_class>> out;
  for (std::size_t i = 0; i < syms.size(); ++i)
    out.emplace_back(syms[i].name(), values[i]);
  return out;
}

} // namespace

ZeroVerdict is_zero(const RationalFunction &r, const ZeroOptions &options) {
  ZeroVerdict verdict;
  if (r.is_zero()) {
    verdict.status = ZeroStatus::proved_zero;
    return verdict;
  }
  auto syms = free_symbols(r);
  std::uint64_t seed = options.seed ^ fnv1a(format(r));
  RationalSampler sampler(seed, options.range);
  const int max_attempts = std::max(64, options.samples * 16);

  if (is_rational(r)) {
    verdict.status = ZeroStatus::proved_nonzero;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      std::vector<mpq_class> values;
      std::map<Symbol, mpq_class> point;
      for (Symbol s : syms) {
        values.push_back(sampler.next());
        point[s] = values.back();
      }
      auto v = evaluate_exact(r, point);
      if (!v || *v == 0)
        continue;
      verdict.witnesses.push_back({named_point(syms, values), v->get_d(), *v});
      return verdict;
    }
    // A nonzero rational function has nonvanishing points; this is a sampling failure.
    throw InconclusiveSampling("no nonvanishing sample found for a nonzero rational function");
  }

  int valid = 0;
  bool nonzero = false;
  for (int attempt = 0; attempt < max_attempts && valid < options.samples; ++attempt) {
    std::vector<mpq_class> values;
    std::map<Symbol, double> point;
    for (Symbol s : syms) {
      values.push_back(sampler.next());
      point[s] = values.back().get_d();
    }
    RandomInterpretation interp(sampler.raw());
    auto v = evaluate(r, point, interp.function(), options.pole_radius);
    if (!v)
      continue;
    ++valid;
    ZeroWitness w{named_point(syms, values), v->value, std::nullopt};
    double scale = std::max(1.0, v->magnitude);
    if (std::fabs(v->value) > options.tolerance * scale) {
      verdict.witnesses.insert(verdict.witnesses.begin(), std::move(w));
      nonzero = true;
      break;
    }
    verdict.witnesses.push_back(std::move(w));
  }
  if (valid == 0)
    throw InconclusiveSampling("every sample point hit a pole or left the domain of " + format(r));
  verdict.status = nonzero ? ZeroStatus::numeric_nonzero : ZeroStatus::numeric_zero;
  return verdict;
}

ZeroVerdict is_zero(const Expression &e, const ZeroOptions &options) { return is_zero(e.normal_form(), options); }

} // namespace klab
