#include <doctest.h>

#include <algorithm>
#include <random>

#include "support/oracles.hpp"
#include "support/testutil.hpp"
#include "vaxkit/errors.hpp"
#include "vaxkit/metrics.hpp"

using namespace vaxkit;

namespace {

std::vector<PredictionPair> random_pairs(std::mt19937& rng, std::size_t count) {
  std::vector<PredictionPair> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    pairs.push_back({"p" + std::to_string(i), testutil::random_label_set(rng),
                     testutil::random_label_set(rng)});
  }
  return pairs;
}

}  // namespace

TEST_CASE("per_label_confusion on tiny fixtures") {
  SUBCASE("single exact match") {
    const std::vector<PredictionPair> pairs = {
        {"a", LabelSet{Label::pharma}, LabelSet{Label::pharma}}};
    const auto c = per_label_confusion(pairs);
    CHECK(c[label_index(Label::pharma)] == LabelConfusion{1, 0, 0});
    for (Label l : canonical_labels()) {
      if (l != Label::pharma) CHECK(c[label_index(l)] == LabelConfusion{0, 0, 0});
    }
  }
  SUBCASE("disjoint sets") {
    const std::vector<PredictionPair> pairs = {
        {"a", LabelSet{Label::pharma}, LabelSet{Label::political}}};
    const auto c = per_label_confusion(pairs);
    CHECK(c[label_index(Label::pharma)] == LabelConfusion{0, 1, 0});
    CHECK(c[label_index(Label::political)] == LabelConfusion{0, 0, 1});
  }
  SUBCASE("empty evaluation is rejected") {
    CHECK_THROWS_AS(per_label_confusion({}), EmptyEvaluationError);
    CHECK_THROWS_AS(macro_f1({}), EmptyEvaluationError);
    CHECK_THROWS_AS(jaccard_similarity({}), EmptyEvaluationError);
    CHECK_THROWS_AS(evaluate({}), EmptyEvaluationError);
  }
  SUBCASE("random counts match the brute-force recount") {
    std::mt19937 rng(7);
    const auto pairs = random_pairs(rng, 50);
    const auto mine = per_label_confusion(pairs);
    const auto ref = oracle::confusion(pairs);
    for (int l = 0; l < 12; ++l) {
      CHECK(mine[l].tp == static_cast<std::size_t>(ref[l].tp));
      CHECK(mine[l].fp == static_cast<std::size_t>(ref[l].fp));
      CHECK(mine[l].fn == static_cast<std::size_t>(ref[l].fn));
    }
  }
}

TEST_CASE("macro_f1 conventions") {
  SUBCASE("perfect predictions with full support") {
    std::vector<PredictionPair> pairs;
    for (Label l : canonical_labels()) {
      pairs.push_back({std::string(label_name(l)), LabelSet{l}, LabelSet{l}});
    }
    CHECK(macro_f1(pairs) == doctest::Approx(1.0));
  }
  SUBCASE("single-label gold scores 1/12 under the all-labels convention") {
    std::vector<PredictionPair> pairs;
    for (int i = 0; i < 5; ++i) {
      pairs.push_back({"p" + std::to_string(i), LabelSet{Label::pharma}, LabelSet{Label::pharma}});
    }
    CHECK(macro_f1(pairs, MacroConvention::all_labels) == doctest::Approx(1.0 / 12.0));
    CHECK(macro_f1(pairs, MacroConvention::present_only) == doctest::Approx(1.0));
  }
}

TEST_CASE("jaccard on tiny fixtures") {
  SUBCASE("identical sets") {
    std::mt19937 rng(11);
    auto pairs = random_pairs(rng, 20);
    for (auto& p : pairs) p.predicted = p.gold;
    CHECK(jaccard_similarity(pairs) == doctest::Approx(1.0));
  }
  SUBCASE("half overlap") {
    const std::vector<PredictionPair> pairs = {
        {"a", LabelSet{Label::side_effect, Label::ineffective}, LabelSet{Label::side_effect}}};
    CHECK(jaccard_similarity(pairs) == doctest::Approx(0.5));
  }
  SUBCASE("all-none predictions against none-free gold score 0") {
    std::vector<PredictionPair> pairs;
    for (int i = 0; i < 4; ++i) {
      pairs.push_back({"p" + std::to_string(i), LabelSet{Label::none}, LabelSet{Label::pharma}});
    }
    CHECK(jaccard_similarity(pairs) == doctest::Approx(0.0));
  }
}

TEST_CASE("oracle equivalence over many random instances") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> size(1, 50);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pairs = random_pairs(rng, size(rng));
    CHECK(macro_f1(pairs) == doctest::Approx(oracle::macro_f1(pairs)).epsilon(1e-9));
    CHECK(macro_f1(pairs, MacroConvention::present_only) ==
          doctest::Approx(oracle::macro_f1(pairs, true)).epsilon(1e-9));
    CHECK(jaccard_similarity(pairs) == doctest::Approx(oracle::sample_jaccard(pairs)).epsilon(1e-9));
    CHECK(jaccard_similarity(pairs, JaccardVariant::label_averaged) ==
          doctest::Approx(oracle::label_jaccard(pairs)).epsilon(1e-9));
  }
}

TEST_CASE("evaluate assembles a consistent report") {
  std::mt19937 rng(31);
  const auto pairs = random_pairs(rng, 40);
  const auto report = evaluate(pairs);
  CHECK(report.pair_count == 40);

  // macro_f1 equals the mean of the reported per-label f1 values.
  double mean = 0.0;
  for (const auto& s : report.per_label) mean += s.f1;
  mean /= 12.0;
  CHECK(report.macro_f1 == doctest::Approx(mean).epsilon(1e-12));

  // All reported values live in [0, 1].
  CHECK(report.macro_f1 >= 0.0);
  CHECK(report.macro_f1 <= 1.0);
  CHECK(report.jaccard >= 0.0);
  CHECK(report.jaccard <= 1.0);
  for (const auto& s : report.per_label) {
    CHECK(s.precision >= 0.0);
    CHECK(s.precision <= 1.0);
    CHECK(s.recall >= 0.0);
    CHECK(s.recall <= 1.0);
    CHECK(s.f1 >= 0.0);
    CHECK(s.f1 <= 1.0);
  }
}

TEST_CASE("evaluate validates ids and set invariants") {
  SUBCASE("duplicate ids") {
    const std::vector<PredictionPair> pairs = {
        {"a", LabelSet{Label::none}, LabelSet{Label::none}},
        {"a", LabelSet{Label::none}, LabelSet{Label::none}}};
    CHECK_THROWS_AS(evaluate(pairs), DuplicateIdError);
  }
  SUBCASE("empty predicted set") {
    const std::vector<PredictionPair> pairs = {{"a", LabelSet{}, LabelSet{Label::none}}};
    CHECK_THROWS_AS(evaluate(pairs), InvariantViolationError);
  }
}

TEST_CASE("permutation invariance") {
  std::mt19937 rng(47);
  auto pairs = random_pairs(rng, 30);
  const auto before = evaluate(pairs);
  std::shuffle(pairs.begin(), pairs.end(), rng);
  const auto after = evaluate(pairs);
  CHECK(before.macro_f1 == after.macro_f1);
  CHECK(before.jaccard == after.jaccard);
  for (int l = 0; l < 12; ++l) {
    CHECK(before.per_label[l].f1 == after.per_label[l].f1);
    CHECK(before.per_label[l].support == after.per_label[l].support);
  }
}

TEST_CASE("correcting one wrong prediction never lowers jaccard") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 100; ++trial) {
    auto pairs = random_pairs(rng, 10);
    const double before = jaccard_similarity(pairs);
    // Fix one pair whose prediction differs from gold.
    for (auto& p : pairs) {
      if (!(p.predicted == p.gold)) {
        p.predicted = p.gold;
        break;
      }
    }
    CHECK(jaccard_similarity(pairs) >= before - 1e-12);
  }
}

TEST_CASE("hand-computed four-pair fixture") {
  const std::vector<PredictionPair> pairs = {
      {"1", LabelSet{Label::pharma}, LabelSet{Label::pharma}},
      {"2", LabelSet{Label::side_effect, Label::rushed}, LabelSet{Label::side_effect}},
      {"3", LabelSet{Label::none}, LabelSet{Label::political}},
      {"4", LabelSet{Label::mandatory, Label::pharma}, LabelSet{Label::mandatory, Label::pharma}},
  };
  const auto report = evaluate(pairs);
  // Worked by hand: pharma (2,0,0), side-effect (1,0,0), mandatory (1,0,0)
  // reach F1 1; rushed (0,1,0), none (0,1,0), political (0,0,1) score 0;
  // six absent labels score 0. Macro over 12 = 3/12.
  CHECK(report.macro_f1 == doctest::Approx(0.25));
  // Jaccard per pair: 1, 0.5, 0, 1 -> mean 0.625.
  CHECK(report.jaccard == doctest::Approx(0.625));
  CHECK(report.per_label[label_index(Label::pharma)].precision == doctest::Approx(1.0));
  CHECK(report.per_label[label_index(Label::rushed)].precision == doctest::Approx(0.0));
  CHECK(report.per_label[label_index(Label::political)].recall == doctest::Approx(0.0));
  CHECK(report.per_label[label_index(Label::political)].support == 1);

  // present-only convention: six contributing labels, mean 3/6.
  const auto alt = evaluate(pairs, {MacroConvention::present_only, JaccardVariant::label_averaged});
  CHECK(alt.macro_f1 == doctest::Approx(0.5));
  CHECK(alt.jaccard == doctest::Approx(0.25));  // 3 perfect labels / 12
}
