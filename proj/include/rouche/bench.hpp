#ifndef ROUCHE_BENCH_HPP
#define ROUCHE_BENCH_HPP

/*
 * Benchmark harness: runs the candidate-validation loop over generated
 * instance folders with both inclusion predicates, measures the precision
 * demand (largest L the loop reaches) and wall time, and aggregates
 * improvement factors and power-law fits. CSV in, CSV out.
 */

#include "rouche/bisolve.hpp"
#include "rouche/instgen.hpp"

#include <string>
#include <vector>

namespace rouche {

struct BenchRecord {
  std::string instance_id;
  unsigned degree = 0;
  unsigned k = 0;
  std::string method;  // "standard" | "truncate"
  unsigned run = 0;
  long precision_bits = 0;  // max L reached in the validation loop
  long time_ms = 0;
  std::string verdict;  // "ok" | "excluded" | "timeout"
};

struct BenchConfig {
  std::vector<std::string> methods{"standard", "truncate"};
  unsigned repeats = 3;
  long timeout_s = 120;       // per validation run
  long precision_cap = 1 << 13;
  unsigned jobs = 1;
};

/// Runs every `<id>/d*.sys` under instances_dir against its `<id>/orig.cnd`
/// candidate. Deterministic seeds per (instance, method, run); timeouts are
/// recorded, not fatal. Records come back sorted by (instance, method, run).
std::vector<BenchRecord> run_suite(const std::string& instances_dir, const BenchConfig& cfg);

void write_csv(const std::string& path, const std::vector<BenchRecord>& records);
std::vector<BenchRecord> read_csv(const std::string& path);

struct GroupStats {
  unsigned degree = 0;
  unsigned k = 0;
  std::string method;
  size_t count = 0;
  double mean_precision = 0, min_precision = 0, max_precision = 0;
  double mean_time_ms = 0;
};

struct ImprovementFactor {
  unsigned degree = 0;
  unsigned k = 0;
  double factor = 0;  // mean precision standard / mean precision truncate
};

struct PowerFit {
  unsigned k = 0;
  std::string method;
  double exponent = 0;  // log-log slope of precision vs degree
  double r2 = 0;
  size_t points = 0;
};

struct Summary {
  std::vector<GroupStats> groups;
  std::vector<ImprovementFactor> factors;
  std::vector<PowerFit> fits;
};

Summary summarize(const std::vector<BenchRecord>& records);
std::string format_summary(const Summary& s);

}  // namespace rouche

#endif
