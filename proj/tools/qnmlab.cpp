// Command-line front end: runs named experiments from a JSON config and emits
// JSON-lines verdicts plus a human summary.
//
// Exit codes: 0 all pass, 1 at least one verdict failed, 2 malformed config,
// 3 unknown experiment, 4 invalid scheme/attack combination.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include "CLI11.hpp"
#include "qnm/experiments.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitUnknownExperiment = 3;
constexpr int kExitBadCombination = 4;

struct Job {
  std::string name;
  qnm::Json config;
};

struct ParsedConfig {
  uint64_t seed = 0;
  std::string output;
  std::vector<Job> jobs;
};

ParsedConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file \"" + path + "\"");
  qnm::Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config root must be an object");

  ParsedConfig out;
  bool have_seed = false;
  for (const auto& item : j.items()) {
    if (item.key() == "seed") {
      if (!item.value().is_number_unsigned() && !item.value().is_number_integer())
        throw std::invalid_argument("config field \"seed\" must be an integer");
      out.seed = item.value().get<uint64_t>();
      have_seed = true;
    } else if (item.key() == "output") {
      out.output = item.value().get<std::string>();
    } else if (item.key() == "experiments") {
      if (!item.value().is_array())
        throw std::invalid_argument("config field \"experiments\" must be an array");
      for (const auto& e : item.value()) {
        if (!e.is_object() || !e.contains("experiment"))
          throw std::invalid_argument(
              "each experiment entry must be an object with an \"experiment\" field");
        Job job;
        job.name = e.at("experiment").get<std::string>();
        job.config = e;
        job.config.erase("experiment");
        out.jobs.push_back(std::move(job));
      }
    } else {
      throw std::invalid_argument("unknown config field \"" + item.key() + "\"");
    }
  }
  if (!have_seed)
    throw std::invalid_argument("config field \"seed\" is required");
  if (out.jobs.empty())
    throw std::invalid_argument("config field \"experiments\" must name at least one experiment");
  return out;
}

int run_command(const std::string& config_path, const std::string& output_flag,
                int parallel, bool verbose) {
  ParsedConfig cfg;
  try {
    cfg = parse_config(config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  if (!output_flag.empty()) cfg.output = output_flag;
  if (const char* env = std::getenv("QNMLAB_SEED")) {
    try {
      cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "config error: QNMLAB_SEED is not an integer\n";
      return kExitBadConfig;
    }
  }
  for (const auto& job : cfg.jobs) {
    if (!qnm::find_experiment(job.name)) {
      std::cerr << "unknown experiment \"" << job.name << "\"\n";
      return kExitUnknownExperiment;
    }
  }

  std::vector<qnm::VerdictRecord> verdicts(cfg.jobs.size());
  std::atomic<size_t> next{0};
  std::atomic<int> error_code{0};
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= cfg.jobs.size() || error_code.load() != 0) return;
      try {
        verdicts[i] = qnm::run_experiment(cfg.jobs[i].name, cfg.jobs[i].config, cfg.seed);
      } catch (const qnm::CombinationError& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        std::cerr << cfg.jobs[i].name << ": " << e.what() << "\n";
        error_code = kExitBadCombination;
      } catch (const std::invalid_argument& e) {
        std::lock_guard<std::mutex> lk(err_mu);
        std::cerr << cfg.jobs[i].name << ": config error: " << e.what() << "\n";
        error_code = kExitBadConfig;
      }
    }
  };
  int threads = std::max(1, std::min<int>(parallel, static_cast<int>(cfg.jobs.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error_code.load() != 0) return error_code.load();

  std::stable_sort(verdicts.begin(), verdicts.end(),
                   [](const auto& a, const auto& b) { return a.experiment < b.experiment; });

  std::ostream* sink = &std::cout;
  std::ofstream file;
  if (!cfg.output.empty()) {
    file.open(cfg.output, std::ios::trunc);
    if (!file) {
      std::cerr << "config error: cannot write output file \"" << cfg.output << "\"\n";
      return kExitBadConfig;
    }
    sink = &file;
  }
  for (const auto& v : verdicts)
    *sink << qnm::verdict_to_json(v).dump() << "\n";

  bool all_pass = true;
  for (const auto& v : verdicts) {
    all_pass = all_pass && v.pass;
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.experiment << "  ("
              << static_cast<long>(v.runtime_ms) << " ms)\n";
    if (verbose || !v.pass) {
      for (const auto& [k, val] : v.measured)
        std::cout << "    " << k << " = " << val << "  (bound " << v.bounds.at(k)
                  << ")\n";
    }
  }
  std::cout << (all_pass ? "all experiments passed" : "some experiments FAILED")
            << "\n";
  return all_pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qnmlab: encryption-scheme experiment harness"};
  app.require_subcommand(1);

  std::string config_path, output_flag, describe_name;
  int parallel = 1;
  bool verbose = false;

  CLI::App* run = app.add_subcommand("run", "run experiments from a JSON config");
  run->add_option("config", config_path, "config file path")->required();
  run->add_option("-o,--output", output_flag, "verdict JSON-lines output path");
  run->add_option("--parallel", parallel, "run up to N experiments concurrently");
  run->add_flag("-v,--verbose", verbose, "print measured values for passing verdicts too");

  CLI::App* list = app.add_subcommand("list", "list built-in experiments");
  CLI::App* describe = app.add_subcommand("describe", "describe one experiment");
  describe->add_option("experiment", describe_name, "experiment name")->required();

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(list)) {
    for (const auto& e : qnm::experiment_registry())
      std::cout << e.name << "\n";
    return 0;
  }
  if (app.got_subcommand(describe)) {
    const qnm::ExperimentDef* def = qnm::find_experiment(describe_name);
    if (!def) {
      std::cerr << "unknown experiment \"" << describe_name << "\"\n";
      return kExitUnknownExperiment;
    }
    std::cout << def->name << "\n  " << def->description << "\n";
    return 0;
  }
  return run_command(config_path, output_flag, parallel, verbose);
}
