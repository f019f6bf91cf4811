#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

namespace ncml {

enum class Scheme { ARQ, ARQ_ML, NC, NC_ML };

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view s);
inline bool uses_classifier(Scheme s) { return s == Scheme::ARQ_ML || s == Scheme::NC_ML; }
inline bool uses_coding(Scheme s) { return s == Scheme::NC || s == Scheme::NC_ML; }

struct TrialRecord {
  Scheme scheme = Scheme::ARQ;
  std::uint64_t seed = 0;
  int K = 1;
  int M = 1;
  long n = 0;      // data transmissions, plain or coded
  long polls = 0;  // completion polls; not data transmissions
  bool aborted = false;
  std::string scenario;
};

struct ThroughputResult {
  double eta = 0.0;
  long trial_count = 0;
  double stderr_eta = 0.0;
  long aborted_count = 0;
};

// Average transmissions per data packet per receiver over completed trials,
// with the standard error of the per-trial ratio n_i / (M K).
ThroughputResult effective_throughput(std::span<const TrialRecord> records);

// scheme,seed,K,M,n,aborted,polls,scenario
void write_trial_csv_header(std::ostream& out);
void write_trial_csv_row(std::ostream& out, const TrialRecord& r);

}  // namespace ncml
