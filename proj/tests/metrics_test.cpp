#include "ncml/metrics.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ncml/rng.hpp"

namespace ncml {
namespace {

TrialRecord rec(long n, int M = 2, int K = 2) {
  TrialRecord r;
  r.scheme = Scheme::NC;
  r.M = M;
  r.K = K;
  r.n = n;
  return r;
}

TEST(Throughput, SingleTrials) {
  const std::vector<TrialRecord> four = {rec(4)}, three = {rec(3)};
  EXPECT_DOUBLE_EQ(effective_throughput(four).eta, 1.0);
  EXPECT_DOUBLE_EQ(effective_throughput(three).eta, 0.75);
  EXPECT_EQ(effective_throughput(three).stderr_eta, 0.0);
  const std::vector<TrialRecord> lower = {rec(32, 32, 4), rec(32, 32, 4)};
  EXPECT_DOUBLE_EQ(effective_throughput(lower).eta, 0.25);
}

TEST(Throughput, StandardErrorByHand) {
  const std::vector<TrialRecord> rs = {rec(4), rec(5), rec(6), rec(9)};
  const auto r = effective_throughput(rs);
  // Ratios 1, 1.25, 1.5, 2.25: mean 1.5, sample variance 0.291666...
  EXPECT_DOUBLE_EQ(r.eta, 1.5);
  EXPECT_NEAR(r.stderr_eta, std::sqrt((0.25 + 0.0625 + 0.0 + 0.5625) / 3.0 / 4.0), 1e-15);
}

TEST(Throughput, AbortedExcluded) {
  std::vector<TrialRecord> rs = {rec(4), rec(100), rec(3)};
  rs[1].aborted = true;
  const auto r = effective_throughput(rs);
  EXPECT_DOUBLE_EQ(r.eta, 0.875);
  EXPECT_EQ(r.trial_count, 2);
  EXPECT_EQ(r.aborted_count, 1);
  std::vector<TrialRecord> all_aborted = {rs[1]};
  EXPECT_THROW(effective_throughput(all_aborted), std::invalid_argument);
}

TEST(Throughput, RejectsEmptyAndMixed) {
  EXPECT_THROW(effective_throughput({}), std::invalid_argument);
  std::vector<TrialRecord> mixed = {rec(4), rec(4, 3)};
  EXPECT_THROW(effective_throughput(mixed), std::invalid_argument);
  mixed = {rec(4), rec(4)};
  mixed[1].scheme = Scheme::ARQ;
  EXPECT_THROW(effective_throughput(mixed), std::invalid_argument);
}

TEST(Throughput, PermutationAndPooling) {
  Rng rng(5);
  std::vector<TrialRecord> a, b;
  for (int i = 0; i < 37; ++i) a.push_back(rec(32 + static_cast<long>(rng.below(20)), 32));
  for (int i = 0; i < 91; ++i) b.push_back(rec(32 + static_cast<long>(rng.below(40)), 32));
  auto shuffled = a;
  std::reverse(shuffled.begin(), shuffled.end());
  EXPECT_NEAR(effective_throughput(shuffled).eta, effective_throughput(a).eta, 1e-15);

  auto pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double weighted =
      (37 * effective_throughput(a).eta + 91 * effective_throughput(b).eta) / 128.0;
  EXPECT_NEAR(effective_throughput(pooled).eta, weighted, 1e-14);
}

TEST(TrialCsv, Row) {
  std::ostringstream out;
  write_trial_csv_header(out);
  TrialRecord r = rec(3);
  r.scheme = Scheme::NC_ML;
  r.seed = 42;
  r.polls = 1;
  r.scenario = "pair";
  write_trial_csv_row(out, r);
  EXPECT_EQ(out.str(), "scheme,seed,K,M,n,aborted,polls,scenario\nNC-ML,42,2,2,3,0,1,pair\n");
}

TEST(SchemeNames, RoundTrip) {
  for (Scheme s : {Scheme::ARQ, Scheme::ARQ_ML, Scheme::NC, Scheme::NC_ML}) {
    EXPECT_EQ(parse_scheme(to_string(s)), s);
  }
  EXPECT_THROW(parse_scheme("RLNC"), std::invalid_argument);
}

}  // namespace
}  // namespace ncml
