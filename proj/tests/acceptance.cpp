// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "support.hpp"

#include "klab/contact.hpp"
#include "klab/groupoid.hpp"
#include "klab/kirillov.hpp"
#include "klab/lifts.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace klab;
using namespace klab::testing;

namespace {

// Pinned tolerances and seeds.
constexpr double kTolerance = 1e-9;
constexpr int kZeroSamples = 16;
constexpr std::uint64_t kSeed = 0x5eed1234ULL;
constexpr int kGroupoidSamples = 64;
constexpr int kDazordSamples = 32;

ZeroOptions options() {
  ZeroOptions o;
  o.tolerance = kTolerance;
  o.samples = kZeroSamples;
  o.seed = kSeed;
  return o;
}

// Collects failed conditions for one criterion.
struct Outcome {
  std::vector<std::string> failures;
  void require(bool ok, const std::string &what) {
    if (!ok)
      failures.push_back(what);
  }
};

RxAction standard(const Chart &c) { return RxAction::fiber_scaling(c, parameter("s")); }

RationalFunction image_of(const RxAction &h, std::string_view coord) {
  int i = h.chart().index_of(coord);
  return i < 0 ? rf("0") : h.images().at(static_cast<std::size_t>(i));
}

std::vector<std::string> names(int n, const std::string &stem) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i)
    out.push_back(stem + std::to_string(i));
  return out;
}

std::string section(std::mt19937_64 &rng, const Chart &c, int degree) {
  std::uniform_int_distribution<int> coeff(-3, 3), pick(0, c.dim() - 1), power(0, degree);
  std::string s = std::to_string(coeff(rng));
  for (int i = 0; i < 4; ++i) {
    s += " + (" + std::to_string(coeff(rng)) + ")";
    int left = degree;
    for (int j = 0; j < 2 && left > 0; ++j) {
      int e = std::min(left, power(rng));
      s += "*" + c[pick(rng)].name() + "^" + std::to_string(e);
      left -= e;
    }
  }
  return s;
}

Multivector random_bivector(std::mt19937_64 &rng, const Chart &c) {
  std::uniform_int_distribution<int> coeff(-3, 3), pick(0, c.dim() - 1), power(0, 2);
  Multivector P(c, 2);
  for (const auto &idx : increasing_tuples(c.dim(), 2)) {
    std::string s = std::to_string(coeff(rng));
    for (int i = 0; i < 2; ++i)
      s += " + (" + std::to_string(coeff(rng)) + ")*" + c[pick(rng)].name() + "^" + std::to_string(power(rng));
    if (coeff(rng) > 0)
      s = "(" + s + ")/(2 + " + c[pick(rng)].name() + "^2)";
    P.set(idx, rf(s));
  }
  return P;
}

DifferentialForm random_one_form(std::mt19937_64 &rng, const Chart &c) {
  std::uniform_int_distribution<int> coeff(-2, 2), pick(0, c.dim() - 1), power(0, 1), shape(0, 3);
  std::vector<RationalFunction> comps;
  for (int i = 0; i < c.dim(); ++i) {
    if (shape(rng) == 0) {
      comps.emplace_back();
      continue;
    }
    std::string s = std::to_string(coeff(rng));
    for (int k = 0; k < 2; ++k)
      s += " + (" + std::to_string(coeff(rng)) + ")*" + c[pick(rng)].name() + "^" + std::to_string(power(rng));
    comps.push_back(rf(s));
  }
  return one_form(c, comps);
}

JacobiPair line_pair() {
  Chart x = Chart::of("line", {"x"});
  return JacobiPair(Multivector(x, 2), field(x, {"1"}));
}

// Pair on (z, x, p) read off the inverse of the symplectised dz - p dx.
JacobiPair contact_pair() {
  Chart b = Chart::of("zxp", {"z", "x", "p"});
  return JacobiPair(bivector(b, {{"x", "p", "1"}, {"z", "p", "p"}}), field(b, {"1", "0", "0"}));
}

std::vector<JacobiPair> jacobi_corpus() {
  Chart q = Chart::of("R2", {"x", "y"});
  return {line_pair(), contact_pair(), JacobiPair::zero(q),
          JacobiPair(bivector(q, {{"x", "y", "x*y"}}), field(q, {"x", "0"})),
          JacobiPair(bivector(q, {{"x", "y", "1 + x^2"}}), Multivector(q, 1))};
}

JacobiPair formal_pair(int n) {
  std::vector<std::string> coords = names(n, "u");
  Chart c = Chart::of("formal" + std::to_string(n), coords);
  std::string args;
  for (int i = 0; i < n; ++i)
    args += (i ? ", " : "") + coords[static_cast<std::size_t>(i)];
  Multivector P(c, 2);
  for (const auto &idx : increasing_tuples(n, 2)) {
    std::string f = "AL" + std::to_string(n) + "_" + std::to_string(idx[0]) + std::to_string(idx[1]);
    function_symbol(f, n);
    P.set(idx, rf(f + "(" + args + ")"));
  }
  std::vector<std::string> comps;
  for (int i = 0; i < n; ++i) {
    std::string f = "AV" + std::to_string(n) + "_" + std::to_string(i);
    function_symbol(f, n);
    comps.push_back(f + "(" + args + ")");
  }
  return JacobiPair(P, field(c, comps));
}

// ---------------------------------------------------------------------------

Outcome poissonisation() {
  Outcome o;
  auto corpus = jacobi_corpus();
  o.require(corpus.size() >= 5, "corpus has at least 5 pairs");
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    KirillovStructure k = poissonise(corpus[i], "t", "s", options());
    std::string tag = "pair " + std::to_string(i);
    o.require(k.poisson.proved(), tag + ": schouten bracket proved zero");
    bool degree = k.homogeneity.homogeneous_of(-1) || k.homogeneity.status == HomogeneityReport::Status::every_degree;
    o.require(degree, tag + ": degree -1 (" + k.homogeneity.describe() + ")");
  }
  Chart b = Chart::of("xyz", {"x", "y", "z"});
  JacobiReport r = is_jacobi(JacobiPair(bivector(b, {{"x", "y", "y"}, {"y", "z", "x"}}), Multivector(b, 1)), options());
  o.require(!r.jacobi() && r.verdict.status == ZeroStatus::proved_nonzero, "non-Jacobi bivector proved to fail");
  RationalFunction c = r.base_residual.component({coordinate("x"), coordinate("y"), coordinate("z")});
  o.require(c == rf("2*x"), "non-Jacobi residual component is exactly 2*x (computed " + format(c) + ")");
  return o;
}

Outcome e1_suite() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  int cases = 0;
  for (int n = 1; n <= 3; ++n) {
    JacobiPair J = formal_pair(n);
    for (int d = 0; d <= 3; ++d) {
      for (int rep = 0; rep < 2; ++rep) {
        RationalFunction u = rf(section(rng, J.base(), d)), v = rf(section(rng, J.base(), d));
        E1Report r = check_e1(J, u, v, options());
        o.require(r.verdict.status == ZeroStatus::proved_zero,
                  "n=" + std::to_string(n) + " degree " + std::to_string(d) + " proved zero");
        ++cases;
      }
    }
  }
  o.require(cases >= 24, "case count");
  return o;
}

Outcome lift_theorem() {
  Outcome o;
  Chart c = Chart::of("tx", {"t", "x"}, "t");
  Chart c3 = Chart::of("tzxp", {"t", "z", "x", "p"}, "t");
  Chart c2 = Chart::of("txy", {"t", "x", "y"}, "t");
  std::vector<Multivector> good{bivector(c, {{"t", "x", "1"}}),
                                bivector(c3, {{"t", "z", "1"}, {"z", "p", "p/t"}, {"x", "p", "1/t"}}),
                                bivector(c2, {{"x", "y", "x*y/t"}, {"t", "x", "x"}})};
  std::vector<Multivector> bad{bivector(c, {{"t", "x", "1/t^2"}}), bivector(c, {{"t", "x", "1/t"}}),
                               bivector(c, {{"t", "x", "t"}})};
  for (const auto &L : good) {
    IntertwineReport r = intertwine_check(L, standard(L.chart()), options());
    o.require(r.intertwines() && r.homogeneity.homogeneous_of(-1), "degree -1 bivector intertwines");
  }
  for (const auto &L : bad) {
    IntertwineReport r = intertwine_check(L, standard(L.chart()), options());
    o.require(!r.intertwines() && !r.homogeneity.homogeneous_of(-1), "other degree fails: " + r.homogeneity.describe());
  }
  RxAction T = tangent_action(standard(c), 0, options());
  RxAction P = phase_action(standard(c), 0, options());
  std::vector<std::pair<std::string, std::string>> tangent{{"t", "s*t"}, {"x", "x"}, {"d_t", "s*d_t"}, {"d_x", "d_x"}};
  std::vector<std::pair<std::string, std::string>> phase{{"t", "s*t"}, {"x", "x"}, {"p_t", "p_t"}, {"p_x", "s*p_x"}};
  for (const auto &[q, v] : tangent)
    o.require(format(image_of(T, q)) == format(rf(v)), "Th_s display " + q + " = " + v);
  for (const auto &[q, v] : phase)
    o.require(format(image_of(P, q)) == format(rf(v)), "T*h_s display " + q + " = " + v);
  return o;
}

Outcome tangent_lift_coherence() {
  Outcome o;
  std::mt19937_64 rng(kSeed + 4);
  int checked = 0;
  for (int n = 2; n <= 3; ++n) {
    Chart c = Chart::of("coh" + std::to_string(n), names(n, "a"));
    for (int i = 0; i < 5; ++i) {
      Multivector L = random_bivector(rng, c);
      Multivector dL = tangent_lift(L);
      Multivector diff = schouten(dL, dL) - tangent_lift(schouten(L, L));
      o.require(tensor_is_zero(diff, options()).status == ZeroStatus::proved_zero, "d_T commutes with Schouten");
      ++checked;
    }
  }
  o.require(checked >= 10, "at least 10 bivectors");
  for (const auto &J : jacobi_corpus()) {
    KirillovStructure k = poissonise(J, "t", "s", options());
    if (!k.certified())
      continue;
    TangentAlgebroid A = tangent_algebroid(k, options());
    o.require(A.report.passed(), "algebroid form of d_T Lambda (" + A.report.failed_block + ")");
  }
  return o;
}

Outcome contact_suite() {
  Outcome o;
  Chart zxp = Chart::of("zxp", {"z", "x", "p"});
  DifferentialForm alpha = form1(zxp, {"1", "-p", "0"});
  HomogeneousSymplectic H = symplectise(alpha, "t", "s", options());
  DifferentialForm expected = form2(H.total, {{"t", "z", "1"}, {"t", "x", "-p"}, {"p", "x", "-t"}});
  o.require(H.omega == expected, "symplectisation equals dt^dz - p dt^dx - t dp^dx");
  o.require(H.nondegeneracy.determinant == rf("t^2"), "determinant t^2");
  RecoveryReport r = recover_alpha(H, options());
  o.require(r.recovered(), "recover_alpha succeeds");
  if (r.recovered()) {
    DifferentialForm back = r.alpha->on_chart(zxp);
    for (int i = 0; i < zxp.dim(); ++i)
      o.require(is_zero(back.get({i}) - alpha.get({i}), options()).status == ZeroStatus::proved_zero,
                "round trip component " + zxp[i].name());
  }
  EmbeddingReport e = psi_embedding(H, options());
  o.require(e.pullback.proved(), "psi pullback proved");
  std::mt19937_64 rng(kSeed + 5);
  Chart c3 = Chart::of("R3", names(3, "b"));
  Chart c5 = Chart::of("R5", names(5, "b"));
  int total = 0;
  for (int i = 0; i < 24; ++i) {
    const Chart &c = i % 2 ? c5 : c3;
    ContactReport cr = is_contact_form(random_one_form(rng, c), options());
    o.require(cr.agree(), "contact criteria agree on form " + std::to_string(i));
    ++total;
  }
  o.require(total >= 20, "corpus size");
  return o;
}

Outcome groupoid_suite() {
  Outcome o;
  CoordGroupoid P = pair_groupoid(1);
  SplitGroupoid S = trivial_split(P, rf("exp(x - y)"), "g", "s", options());
  o.require(S.axioms.passed(), "exp(x-y) split passes all axioms");
  o.require(rx_morphism_check(S.groupoid, S.arrows_action, options()).passed(), "exp(x-y) split rx morphism");
  SplitGroupoid B = trivial_split(P, rf("1 + x^2"), "g", "s", options());
  std::vector<std::string> failed = B.axioms.failed();
  o.require(!failed.empty(), "1 + x^2 split fails");
  for (const auto &name : failed) {
    o.require(axiom::involves_target(name), "only target axioms fail (" + name + ")");
    const Certificate *c = B.axioms.find(name);
    o.require(c && !c->witnesses.empty(), "witness for " + name);
  }
  Chart N = Chart::of("R^x", {"g"}, "g");
  GroupoidAction A{P, N, {rf("g")}, RxAction::fiber_scaling(N, parameter("s"))};
  SplitGroupoid T = t_split(A, options());
  o.require(same_groupoid(T.groupoid, product(P, unit_groupoid(N)), options()).proved(),
            "trivial t_split equals direct product (proved)");
  return o;
}

Outcome contact_groupoid_suite() {
  Outcome o;
  for (int n = 1; n <= 2; ++n) {
    std::string tag = "n=" + std::to_string(n) + ": ";
    CotangentGroupoid cot = cotangent_groupoid_pair(n);
    o.require(verify_groupoid(cot.groupoid, options()).passed(), tag + "verify_groupoid");
    SampleReport pr = pairing_multiplicativity_check(cot, tangent_groupoid(cot.base), kGroupoidSamples, options());
    o.require(pr.certificate.passed() && pr.exact && pr.max_residual == 0.0 && pr.samples >= kGroupoidSamples,
              tag + "pairing multiplicative, exact, residual 0");
    SampleReport mf = multiplicative_form_check(cot.groupoid, cot.omega, kGroupoidSamples, options());
    o.require(mf.certificate.passed() && mf.max_residual == 0.0 && mf.samples >= kGroupoidSamples,
              tag + "multiplicative form, residual 0");
    o.require(homogeneity_degree(cot.omega, cot.scaling).homogeneous_of(1), tag + "omega of degree +1");
    ClosureReport cl = closure_check(cot, kGroupoidSamples, options());
    o.require(cl.certificate.passed() && cl.products >= kGroupoidSamples && cl.inverses >= kGroupoidSamples &&
                  cl.scalings >= kGroupoidSamples,
              tag + "closure of C(G)");
  }
  return o;
}

Outcome dazord() {
  Outcome o;
  DazordReport d = dazord_pipeline(kDazordSamples, options());
  o.require(d.passed(), "pipeline passes");
  o.require(d.multiplicative.samples >= kDazordSamples, "sample count");
  return o;
}

std::string capture(const std::string &cmd, int &code) {
  std::string out;
  FILE *p = popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
    out.append(buf.data(), n);
  int status = pclose(p);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

Outcome determinism() {
  Outcome o;
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto &e : fs::directory_iterator(KLAB_SCENES))
    if (e.path().extension() == ".json")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  o.require(!files.empty(), "scenes present");
  for (const auto &f : files) {
    std::string cmd = std::string(KLAB_BINARY) + " run --format json --seed " + std::to_string(kSeed) + " '" +
                      f.string() + "'";
    int c1 = 0, c2 = 0, c3 = 0;
    std::string a = capture(cmd, c1), b = capture(cmd, c2), p = capture(cmd + " --parallel", c3);
    o.require(c1 <= 1 && !a.empty(), f.filename().string() + " runs");
    o.require(a == b, f.filename().string() + " byte-identical across runs");
    o.require(a == p, f.filename().string() + " byte-identical with --parallel");
  }
  return o;
}

} // namespace

int main() {
  struct Criterion {
    int id;
    std::string title;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {1, "poissonisation", poissonisation},
      {2, "bracket intertwining identity, formal structure functions", e1_suite},
      {3, "lift theorem", lift_theorem},
      {4, "tangent-lift coherence", tangent_lift_coherence},
      {5, "contact suite", contact_suite},
      {6, "groupoid suite", groupoid_suite},
      {7, "contact-groupoid suite", contact_groupoid_suite},
      {8, "Dazord pipeline", dazord},
      {9, "determinism", determinism},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o.failures.push_back(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = o.failures.empty();
    failed += !pass;
    std::ostringstream line;
    line << (pass ? "PASS" : "FAIL") << " " << c.id << " " << c.title;
    line.precision(2);
    line << std::fixed << " (" << secs << " s)";
    std::cout << line.str() << "\n";
    for (const auto &f : o.failures)
      std::cout << "    failed: " << f << "\n";
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed\n";
  return failed ? 1 : 0;
}
