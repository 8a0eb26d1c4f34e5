// quatperiod: batch front end for the quaternionic period library.
//
// Every subcommand writes one JSON document (stdout or --out). Exit codes:
// 0 success, 2 invalid input, 3 a computed object failed a mathematical invariant.

#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "quatperiod/pipeline.hpp"

namespace {

constexpr int kValidationError = 2;
constexpr int kInvariantFailure = 3;

void print_checks(const quatperiod::Json& result) {
  for (const auto& c : result["checks"])
    std::cerr << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["module"].get<std::string>() << ": "
              << c["check"].get<std::string>() << " (" << c["detail"].get<std::string>()
              << (c["passed"].get<bool>() ? "" : ", " + c["kind"].get<std::string>()) << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  using namespace quatperiod;
  CLI::App app{"Quaternionic period sums, Yoshida lifts and triple-product L-values"};
  app.require_subcommand(1);
  app.fallthrough();

  JobConfig cfg;
  std::string labels, index;
  std::string weighting = "units";
  app.add_option("--level", cfg.level, "Squarefree level N");
  app.add_option("--disc", cfg.disc, "Discriminant N1 of the definite quaternion algebra");
  app.add_option("--nu1", cfg.nu1, "Harmonic degree of the first form")->check(CLI::NonNegativeNumber);
  app.add_option("--nu2", cfg.nu2, "Harmonic degree of the second form")->check(CLI::NonNegativeNumber);
  app.add_option("--alpha1", cfg.alpha1)->check(CLI::NonNegativeNumber);
  app.add_option("--alpha2", cfg.alpha2)->check(CLI::NonNegativeNumber);
  app.add_option("--gamma", cfg.gamma, "Order of the holomorphic differential operator")->check(CLI::NonNegativeNumber);
  app.add_option("--prec", cfg.prec, "Trace cutoff / number of q-expansion terms")->check(CLI::NonNegativeNumber);
  app.add_option("--bits", cfg.bits, "Requested bit precision of numerical values")->check(CLI::PositiveNumber);
  app.add_option("--pmax", cfg.pmax, "Largest prime for Hecke operators and eigenform matching");
  app.add_option("--lpmax", cfg.lpmax, "Largest prime in Euler products (0: all available)");
  app.add_option("--tolerance", cfg.tolerance, "Absolute tolerance of numerical values");
  app.add_option("--kernel", cfg.kernel, "Smoothing kernel parameter of the L-value evaluator");
  app.add_option("--newforms", cfg.newforms, "Newform file (label|N|k|signs|a_p)");
  app.add_option("--cache", cfg.cache, std::string("Cache directory (default: $") + kCacheEnv + ")");
  app.add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
  app.add_option("--seed", cfg.seed, "Seed of the randomized checks");
  app.add_option("--labels", labels, "Comma-separated newform labels");
  app.add_option("--phi1", cfg.phi1, "Eigenform index of the first lifted form (-1: constant)");
  app.add_option("--phi2", cfg.phi2, "Eigenform index of the second lifted form (-1: constant)");
  app.add_option("--kind", cfg.kind, "Factor or L-function kind");
  app.add_option("--prime", cfg.prime, "Prime of a single Euler factor");
  app.add_option("--T", index, "Fourier index n1,m2,n2");
  app.add_option("--periods", weighting, "Period weighting")->check(CLI::IsMember({"units", "plain"}));
  app.add_flag("--lvalues", cfg.lvalues, "Add central values and the ratio diagnostic to period reports");

  const std::map<std::string, std::string> commands{
      {"classset", "Right ideal classes of an Eichler order"},
      {"brandt", "Brandt matrices and Atkin-Lehner operators"},
      {"eigen", "Hecke eigenforms with eigenvalues and involution signs"},
      {"theta", "Theta lifts of the rational eigenforms"},
      {"yoshida", "Fourier coefficients of a Yoshida lift"},
      {"restrict", "Diagonal restriction, optionally after a differential operator"},
      {"diffop", "The holomorphic differential operator and Q(T)"},
      {"gate", "Atkin-Lehner sign table and algebra selection"},
      {"period", "Period sums for newform labels h1,h2,f1,f2"},
      {"euler", "A local Euler factor"},
      {"lvalue", "A central value"},
      {"verify", "Invariant checks of every module"}};
  for (const auto& [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kValidationError;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  cfg.weighting = weighting == "plain" ? PeriodWeighting::Plain : PeriodWeighting::Units;
  try {
    for (const auto& part : CLI::detail::split(labels, ','))
      if (!part.empty()) cfg.labels.push_back(CLI::detail::trim_copy(part));
    for (const auto& part : CLI::detail::split(index, ','))
      if (!part.empty()) cfg.index.push_back(std::stol(part));

    const Json result = run_command(cfg);
    const std::string text = envelope(cfg, result).dump(2) + "\n";
    if (cfg.out.empty()) {
      std::cout << text;
    } else {
      std::ofstream out(cfg.out);
      out << text;
      if (!out) throw ArgumentError("cannot write " + cfg.out);
    }
    if (cfg.command == "verify") {
      print_checks(result);
      if (!result["passed"].get<bool>()) return kInvariantFailure;
    }
    return 0;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << " (pass a newform file with more primes or lower --lpmax)\n";
    return kValidationError;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidationError;
  } catch (const StructuralError& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  } catch (const std::exception& e) {
    std::cerr << "invariant failure: " << e.what() << "\n";
    return kInvariantFailure;
  }
}
