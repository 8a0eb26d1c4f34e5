#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "quatperiod/lseries.hpp"
#include "quatperiod/periods.hpp"

namespace quatperiod {

using Json = nlohmann::json;

/// Changes whenever normalization-dependent output or cached data changes meaning.
inline constexpr const char* kConventionVersion = "2";
inline constexpr int kSchemaVersion = 1;

/// Overrides the cache directory when --cache is absent.
inline constexpr const char* kCacheEnv = "QUATPERIOD_CACHE";

enum class PeriodWeighting { Units, Plain };

struct JobConfig {
  std::string command;
  long level = 0;
  long disc = 0;
  int nu1 = 0, nu2 = 0, alpha1 = 0, alpha2 = 0, gamma = 0;
  /// Trace cutoff for Fourier tables, number of q-expansion terms for theta lifts.
  long prec = 6;
  int bits = 64;
  /// Hecke operators and eigenform matching use the good primes up to here.
  long pmax = 50;
  /// Euler products for L-values; 0 takes everything the newform file provides.
  long lpmax = 0;
  double tolerance = 1e-8;
  double kernel = 1.0;
  std::string newforms;
  std::string cache;
  std::string out;
  unsigned long seed = 1;
  /// h1, h2, f1, f2 (period); h, f1, f2 (gate, triple factors); single labels elsewhere.
  std::vector<std::string> labels;
  /// Eigenform indices for yoshida/restrict; -1 is the constant function.
  int phi1 = 0, phi2 = 0;
  std::string kind = "triple";
  long prime = 2;
  std::vector<long> index;
  PeriodWeighting weighting = PeriodWeighting::Units;
  bool lvalues = false;

  void validate() const;
  Json conventions() const;
  std::string newform_path() const;
  /// --cache, else the environment override, else empty (no caching).
  std::string cache_dir() const;
};

/// Versioned JSON files keyed by a string; entries written under another convention version are ignored.
class Cache {
 public:
  explicit Cache(std::string dir);
  bool enabled() const { return !dir_.empty(); }
  std::optional<Json> get(const std::string& key) const;
  void put(const std::string& key, const Json& data) const;

 private:
  std::filesystem::path file(const std::string& key) const;
  std::string dir_;
};

struct RatioDiagnostic {
  std::string h;
  Rational weighted_sum = 0;
  CentralValue triple;
  /// S^2 <h><f1><f2> / (L <phi><psi1><psi2>) with <.> = L(Sym^2, 1) on the elliptic side.
  long double ratio = 0;
};

struct PipelineResult {
  SignData signs;
  AlgebraChoice choice;
  PeriodReport report;
  std::vector<std::string> labels;
  std::vector<RatioDiagnostic> ratios;
  Json lvalue_note;
};

PipelineResult run_pipeline(const JobConfig& config);
Json to_json(const PeriodReport& r);
Json to_json(const PipelineResult& r);

struct Check {
  std::string module;
  std::string name;
  bool passed = false;
  /// "logic" or "tolerance".
  std::string kind = "logic";
  std::string detail;
};

std::vector<Check> verify(const JobConfig& config);

/// Dispatches on config.command; the result is the "result" member of the CLI output.
Json run_command(const JobConfig& config);

/// Schema version, command, conventions and a timestamp around a result.
Json envelope(const JobConfig& config, Json result);

/// Raised when a computed object violates a mathematical invariant (exit code 3).
class InvariantFailure : public StructuralError {
 public:
  using StructuralError::StructuralError;
};

}  // namespace quatperiod
