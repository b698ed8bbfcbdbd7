#include <doctest.h>

#include <fstream>
#include <random>

#include "support/testutil.hpp"
#include "vaxkit/errors.hpp"
#include "vaxkit/labels.hpp"

using namespace vaxkit;

TEST_CASE("canonical order is fixed and twelve long") {
  const auto& order = canonical_labels();
  CHECK(order.size() == 12);
  CHECK(order.front() == Label::unnecessary);
  CHECK(order[8] == Label::side_effect);
  CHECK(order[11] == Label::none);
  CHECK(label_name(order.front()) == "unnecessary");
  CHECK(label_name(order[8]) == "side-effect");
  CHECK(label_name(order[11]) == "none");
  // Stable across calls.
  CHECK(&canonical_labels() == &order);
}

TEST_CASE("parse_label_string maps tokens") {
  CHECK(parse_label_string("side-effect ineffective", " ") ==
        LabelSet{Label::side_effect, Label::ineffective});
  CHECK(parse_label_string("NONE", " ") == LabelSet{Label::none});
  CHECK(parse_label_string("  pharma   political ", " ") ==
        LabelSet{Label::pharma, Label::political});
  CHECK_THROWS_AS(parse_label_string("sideeffects", " "), UnknownLabelError);
  CHECK_THROWS_AS(parse_label_string("", " "), EmptyLabelStringError);
  CHECK_THROWS_AS(parse_label_string("   ", " "), EmptyLabelStringError);

  SUBCASE("custom delimiter") {
    CHECK(parse_label_string("pharma|rushed", "|") == LabelSet{Label::pharma, Label::rushed});
  }
  SUBCASE("unknown token is named") {
    try {
      parse_label_string("pharma bogus", " ");
      FAIL("expected UnknownLabelError");
    } catch (const UnknownLabelError& e) {
      CHECK(e.token == "bogus");
    }
  }
}

TEST_CASE("multi-hot round trip is exhaustive over all 4096 subsets") {
  for (int bits = 0; bits < (1 << 12); ++bits) {
    const auto set = LabelSet::from_bits(static_cast<std::uint16_t>(bits));
    const auto hot = to_multi_hot(set);
    CHECK(from_multi_hot(hot) == set);
    int expected_ones = 0;
    for (int i = 0; i < 12; ++i) expected_ones += (bits >> i) & 1;
    int ones = 0;
    for (int v : hot) ones += v;
    CHECK(ones == expected_ones);
  }
  CHECK(to_multi_hot(LabelSet{}) == std::array<int, 12>{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0});
  const auto pair = to_multi_hot(LabelSet{Label::unnecessary, Label::none});
  CHECK(pair[0] == 1);
  CHECK(pair[11] == 1);
  int ones = 0;
  for (int v : pair) ones += v;
  CHECK(ones == 2);
  CHECK(to_multi_hot(LabelSet::all()) == std::array<int, 12>{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1});
}

TEST_CASE("serialize then parse is identity for random subsets") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const auto set = testutil::random_label_set(rng);
    const std::string text = serialize_label_set(set, " ");
    CHECK(parse_label_string(text, " ") == set);
    // Idempotent under re-serialization.
    CHECK(serialize_label_set(parse_label_string(text, " "), " ") == text);
  }
}

TEST_CASE("normalize_prediction applies the none rules") {
  CHECK(normalize_prediction(LabelSet{}) == LabelSet{Label::none});
  CHECK(normalize_prediction(LabelSet{Label::none}) == LabelSet{Label::none});
  CHECK(normalize_prediction(LabelSet{Label::none, Label::pharma}) == LabelSet{Label::pharma});
  CHECK(normalize_prediction(LabelSet{Label::pharma}) == LabelSet{Label::pharma});
}

TEST_CASE("default label metas are complete") {
  const auto& metas = default_label_metas();
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    CHECK(metas[i].id == static_cast<Label>(i));
    CHECK(!metas[i].description.empty());
    // keywords may be empty but the list itself always exists; spot-check
    // that defaults are non-empty.
    CHECK(!metas[i].keywords.empty());
  }
}

TEST_CASE("label metadata config round trip") {
  testutil::TempDir tmp;
  const auto path = tmp.file("labels.cfg");
  {
    std::ofstream out(path);
    out << "# comment\n";
    for (const auto& meta : default_label_metas()) {
      out << "label: " << label_name(meta.id) << "\n";
      out << "description: " << meta.description << "\n";
      out << "keywords:";
      for (std::size_t i = 0; i < meta.keywords.size(); ++i) {
        out << (i ? ", " : " ") << meta.keywords[i];
      }
      out << "\n\n";
    }
  }
  const auto loaded = load_label_metas(path);
  for (std::size_t i = 0; i < kLabelCount; ++i) {
    CHECK(loaded[i] == default_label_metas()[i]);
  }
}

TEST_CASE("label metadata config rejects bad files") {
  testutil::TempDir tmp;

  SUBCASE("missing label") {
    const auto path = tmp.file("missing.cfg");
    std::ofstream(path) << "label: pharma\ndescription: d\nkeywords: a\n";
    CHECK_THROWS_AS(load_label_metas(path), ConfigError);
  }
  SUBCASE("unknown label") {
    const auto path = tmp.file("unknown.cfg");
    std::ofstream(path) << "label: bogus\ndescription: d\nkeywords:\n";
    CHECK_THROWS_AS(load_label_metas(path), UnknownLabelError);
  }
  SUBCASE("empty description") {
    const auto path = tmp.file("empty.cfg");
    std::ofstream(path) << "label: pharma\ndescription:\nkeywords: a\n";
    CHECK_THROWS_AS(load_label_metas(path), ConfigError);
  }
  SUBCASE("unreadable path") {
    CHECK_THROWS_AS(load_label_metas(tmp.file("nope.cfg")), FileUnreadableError);
  }
}

TEST_CASE("count_label_mentions uses word boundaries") {
  CHECK(count_label_mentions("pharma, then pharma again", Label::pharma) == 2);
  CHECK(count_label_mentions("pharmaceutical companies", Label::pharma) == 0);
  CHECK(count_label_mentions("nonetheless", Label::none) == 0);
  CHECK(count_label_mentions("None.", Label::none) == 1);
  CHECK(count_label_mentions("side-effect: stuff", Label::side_effect) == 1);
  CHECK(count_label_mentions("side effects", Label::side_effect) == 0);
}
