#include "ncml/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace ncml {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::ARQ: return "ARQ";
    case Scheme::ARQ_ML: return "ARQ-ML";
    case Scheme::NC: return "NC";
    case Scheme::NC_ML: return "NC-ML";
  }
  return "?";
}

Scheme parse_scheme(std::string_view s) {
  if (s == "ARQ") return Scheme::ARQ;
  if (s == "ARQ-ML" || s == "ARQ_ML") return Scheme::ARQ_ML;
  if (s == "NC") return Scheme::NC;
  if (s == "NC-ML" || s == "NC_ML" || s == "NCML") return Scheme::NC_ML;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

ThroughputResult effective_throughput(std::span<const TrialRecord> records) {
  if (records.empty()) throw std::invalid_argument("effective_throughput of no records");
  const auto& first = records.front();
  ThroughputResult out;
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& r : records) {
    if (r.M != first.M || r.K != first.K || r.scheme != first.scheme ||
        r.scenario != first.scenario) {
      throw std::invalid_argument("effective_throughput over mixed configurations");
    }
    if (r.aborted) {
      ++out.aborted_count;
      continue;
    }
    const double ratio = static_cast<double>(r.n) / (static_cast<double>(r.M) * r.K);
    sum += ratio;
    sum_sq += ratio * ratio;
    ++out.trial_count;
  }
  if (out.trial_count == 0) throw std::invalid_argument("effective_throughput: every trial aborted");
  const double N = static_cast<double>(out.trial_count);
  out.eta = sum / N;
  if (out.trial_count > 1) {
    const double var = std::max(0.0, (sum_sq - N * out.eta * out.eta) / (N - 1.0));
    out.stderr_eta = std::sqrt(var / N);
  }
  return out;
}

void write_trial_csv_header(std::ostream& out) {
  out << "scheme,seed,K,M,n,aborted,polls,scenario\n";
}

void write_trial_csv_row(std::ostream& out, const TrialRecord& r) {
  out << to_string(r.scheme) << ',' << r.seed << ',' << r.K << ',' << r.M << ',' << r.n << ','
      << (r.aborted ? 1 : 0) << ',' << r.polls << ',' << r.scenario << '\n';
}

}  // namespace ncml
