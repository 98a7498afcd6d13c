#include "klab/scene.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

// Environment values become the defaults; explicit flags win.
void apply_environment(klab::RunOptions &o) {
  if (const char *s = std::getenv("KLAB_SEED")) {
    try {
      o.seed = std::stoull(s);
    } catch (const std::exception &) {
      throw klab::SceneError("KLAB_SEED", "not an unsigned integer: " + std::string(s));
    }
  }
  if (const char *t = std::getenv("KLAB_TOL")) {
    try {
      o.tolerance = std::stod(t);
    } catch (const std::exception &) {
      throw klab::SceneError("KLAB_TOL", "not a number: " + std::string(t));
    }
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"klab: certificates for Jacobi, contact and contact-groupoid structures"};
  app.require_subcommand(1);

  klab::RunOptions options;
  std::string file, format = "text", directive;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;

  auto *run = app.add_subcommand("run", "Run the directives of a scene file");
  run->add_option("file", file, "Scene document (JSON)")->required();
  run->add_option("--seed", seed, "Seed for sampled checks");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"text", "json"}));
  run->add_option("--samples", options.samples, "Samples for numeric and sampled checks")->check(CLI::PositiveNumber);
  run->add_option("--tol", tol, "Numeric tolerance");
  run->add_flag("--parallel", options.parallel, "Run independent directives concurrently");

  auto *exp = app.add_subcommand("explain", "Describe what a directive certifies");
  exp->add_option("directive", directive, "Directive name, e.g. \"check intertwine\"")->required();
  exp->add_flag_callback("--list", [] {
    for (const auto &d : klab::directive_names())
      std::cout << d << "\n";
    std::exit(0);
  }, "List the known directives");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return e.get_exit_code() == 0 ? app.exit(e) : (app.exit(e), 2);
  }

  try {
    if (*exp) {
      std::cout << klab::explain(directive);
      return 0;
    }
    apply_environment(options);
    if (seed)
      options.seed = *seed;
    if (tol)
      options.tolerance = *tol;
    klab::Report report = klab::run_scene_file(file, options);
    std::cout << (format == "json" ? klab::to_json(report) : klab::to_text(report));
    return report.exit_code();
  } catch (const klab::SceneError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
