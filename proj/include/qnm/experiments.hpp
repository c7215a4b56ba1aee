#pragma once

#include "qnm/auth.hpp"
#include "qnm/json_io.hpp"

namespace qnm {

/// One pass/fail verdict. Every entry in `measured` has a matching entry in
/// `bounds`; the record passes iff measured <= bound for all keys. Checks of
/// the form "quantity >= threshold" are stored as "<name>_shortfall"
/// (threshold minus quantity) against a small tolerance. runtime_ms is
/// reported on stdout only and never serialized, so verdict files are
/// byte-stable for a fixed seed.
struct VerdictRecord {
  std::string experiment;
  std::string inputs_digest;
  std::map<std::string, double> measured;
  std::map<std::string, double> bounds;
  bool pass = false;
  double runtime_ms = 0.0;

  void set(const std::string& name, double value, double bound);
  void finalize();  // recomputes pass
};

Json verdict_to_json(const VerdictRecord& r);

/// Scheme/attack pairings the experiment cannot realize (distinct from a
/// malformed config; the CLI maps this to its own exit code).
struct CombinationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentDef {
  std::string name;
  std::string description;
  std::function<VerdictRecord(const Json& config, uint64_t seed)> run;
};

const std::vector<ExperimentDef>& experiment_registry();
const ExperimentDef* find_experiment(const std::string& name);

/// Runs one named experiment; throws std::out_of_range for unknown names.
VerdictRecord run_experiment(const std::string& name, const Json& config, uint64_t seed);

std::string digest_inputs(const std::string& name, const Json& config, uint64_t seed);

}  // namespace qnm
