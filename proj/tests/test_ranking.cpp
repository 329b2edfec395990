#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oracle.hpp"
#include "sepidx/json_io.hpp"
#include "sepidx/ranking.hpp"

using namespace sepidx;

namespace {

std::vector<CandidateInput> fixture(const std::vector<std::pair<std::string, double>>& rows) {
  std::vector<CandidateInput> out;
  for (const auto& [name, si] : rows) out.push_back({name, si, std::nullopt});
  return out;
}

std::vector<std::string> names(const std::vector<CandidateScore>& scores) {
  std::vector<std::string> out;
  for (const auto& s : scores) out.push_back(s.candidate_name);
  return out;
}

const std::vector<std::pair<std::string, double>> kLinnaeus = {
    {"Xception", 0.94}, {"InceptionV3", 0.92}, {"DenseNet121", 0.87}, {"VGG16", 0.69},
    {"VGG19", 0.68},    {"Resnet50", 0.39},    {"EfficientB3", 0.32}};

const std::vector<std::pair<std::string, double>> kCovidCt = {
    {"VGG16", 0.91},       {"VGG19", 0.88},      {"DenseNet121", 0.87}, {"InceptionV3", 0.85},
    {"Xception", 0.87},    {"Resnet50V2", 0.79}, {"NasnetLarge", 0.75}};

Errc code_of(const Baseline& baseline, const std::vector<CandidateInput>& candidates) {
  try {
    rank_candidates(baseline, candidates);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return Errc::Io;
}

}  // namespace

TEST(RankCandidates, LinnaeusTableRejectsOnlyEfficientB3) {
  const auto report = rank_candidates(0.335, fixture(kLinnaeus));
  EXPECT_EQ(names(report.accepted), (std::vector<std::string>{"Xception", "InceptionV3", "DenseNet121",
                                                              "VGG16", "VGG19", "Resnet50"}));
  EXPECT_EQ(names(report.rejected), (std::vector<std::string>{"EfficientB3"}));
  EXPECT_EQ(report.accepted_count(), 6u);
  EXPECT_EQ(report.rejected_count(), 1u);
  EXPECT_EQ(report.total_candidates, 7u);
  EXPECT_TRUE(report.metadata.fixture_mode);
}

TEST(RankCandidates, CovidCtTableBreaksTieByName) {
  const auto report = rank_candidates(0.826, fixture(kCovidCt));
  EXPECT_EQ(names(report.accepted),
            (std::vector<std::string>{"VGG16", "VGG19", "DenseNet121", "Xception", "InceptionV3"}));
  EXPECT_EQ(names(report.rejected), (std::vector<std::string>{"Resnet50V2", "NasnetLarge"}));
}

TEST(RankCandidates, EqualToBaselineIsAccepted) {
  const auto report = rank_candidates(0.5, fixture({{"only", 0.5}}));
  EXPECT_EQ(report.accepted_count(), 1u);
  EXPECT_EQ(report.rejected_count(), 0u);
}

TEST(RankCandidates, Errors) {
  EXPECT_EQ(code_of(0.5, {}), Errc::EmptyCandidateList);
  EXPECT_EQ(code_of(0.5, fixture({{"a", 0.4}, {"a", 0.6}})), Errc::DuplicateCandidateName);
  EXPECT_EQ(code_of(0.5, fixture({{"a", 1.4}})), Errc::InvalidArgument);
  EXPECT_EQ(code_of(-0.1, fixture({{"a", 0.4}})), Errc::InvalidArgument);

  const auto base = oracle::line_set({0.0f, 1.0f, 2.0f}, {0, 1, 1});
  const auto other = oracle::line_set({0.0f, 1.0f, 2.0f}, {1, 1, 0});
  EXPECT_EQ(code_of(base, {{"x", other, std::nullopt}}), Errc::LabelSequenceMismatch);
  // Without an embedded baseline the candidates are checked against each other.
  EXPECT_EQ(code_of(0.1, {{"x", base, std::nullopt}, {"y", other, std::nullopt}}),
            Errc::LabelSequenceMismatch);
}

TEST(ScoreCandidate, EmbeddingAndFixtureModes) {
  const auto pairs = oracle::line_set({0.0f, 0.1f, 10.0f, 10.1f}, {0, 0, 1, 1});
  const auto s = score_candidate({"pairs", pairs, std::nullopt});
  EXPECT_EQ(s.si, 1.0);
  EXPECT_EQ(s.candidate_name, "pairs");
  EXPECT_FALSE(s.precomputed());

  const auto x = score_candidate({"Xception", 0.94, std::nullopt});
  EXPECT_EQ(x.si, 0.94);
  EXPECT_TRUE(x.precomputed());

  const auto five = oracle::line_set({0.0f, 1.0f, 2.5f, 3.0f, 10.0f}, {0, 0, 1, 1, 0});
  ASSERT_EQ(oracle::brute_force_matches(five), 4u);
  EXPECT_DOUBLE_EQ(score_candidate({"five", five, std::nullopt}).si, 0.8);
}

TEST(RankCandidates, EmbeddedBaselineAndCandidates) {
  const std::vector<float> xs{0.0f, 1.0f, 2.5f, 3.0f, 10.0f};
  const std::vector<Label> labels{0, 0, 1, 1, 0};
  const auto raw = oracle::line_set(xs, labels);  // SI 0.8
  const auto good = oracle::line_set({0.0f, 0.1f, 5.0f, 5.1f, 0.2f}, labels);  // SI 1.0
  const auto bad = oracle::line_set({0.0f, 5.0f, 0.1f, 10.0f, 5.1f}, labels);
  const auto report = rank_candidates(raw, std::vector<CandidateInput>{
                                               {"good", good, 0.9}, {"bad", bad, 0.2}});
  EXPECT_DOUBLE_EQ(report.baseline_si, 0.8);
  ASSERT_EQ(report.accepted_count(), 1u);
  EXPECT_EQ(report.accepted[0].candidate_name, "good");
  EXPECT_EQ(report.accepted[0].match_count, 5u);
  EXPECT_EQ(report.rejected[0].candidate_name, "bad");
  EXPECT_FALSE(report.metadata.fixture_mode);
  EXPECT_EQ(report.reported_accuracy.at("good"), 0.9);
}

TEST(RankCandidates, PartitionConservationAndPurityOnRandomFixtures) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> grid(0, 64), count(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const double baseline = grid(rng) / 64.0;
    std::vector<CandidateInput> input;
    const int m = count(rng);
    for (int j = 0; j < m; ++j) input.push_back({"c" + std::to_string(j), grid(rng) / 64.0, std::nullopt});
    const auto report = rank_candidates(baseline, input);

    EXPECT_EQ(report.accepted_count() + report.rejected_count(), static_cast<std::size_t>(m));
    std::multiset<std::string> in, out;
    for (const auto& c : input) in.insert(c.candidate_name);
    for (const auto* g : {&report.accepted, &report.rejected}) {
      for (const auto& s : *g) out.insert(s.candidate_name);
      EXPECT_TRUE(std::is_sorted(g->begin(), g->end(), ranks_before));
    }
    EXPECT_EQ(in, out);
    for (const auto& s : report.accepted) EXPECT_GE(s.si, baseline);
    for (const auto& s : report.rejected) EXPECT_LT(s.si, baseline);

    EXPECT_EQ(emit_json(rank_candidates(baseline, input)), emit_json(report));

    // Shifting everything by the same grid step keeps the partition and order.
    const double shift = -grid(rng) / 1024.0;
    if (baseline + shift < 0.0) continue;
    std::vector<CandidateInput> shifted;
    bool in_range = true;
    for (const auto& c : input) {
      const double v = std::get<double>(c.source) + shift;
      in_range = in_range && v >= 0.0;
      shifted.push_back({c.candidate_name, v, std::nullopt});
    }
    if (!in_range) continue;
    const auto moved = rank_candidates(baseline + shift, shifted);
    EXPECT_EQ(names(moved.accepted), names(report.accepted));
    EXPECT_EQ(names(moved.rejected), names(report.rejected));
  }
}
