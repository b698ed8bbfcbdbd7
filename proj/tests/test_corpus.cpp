#include <doctest.h>

#include <fstream>
#include <random>

#include "support/testutil.hpp"
#include "vaxkit/corpus.hpp"
#include "vaxkit/csv.hpp"
#include "vaxkit/errors.hpp"

using namespace vaxkit;

namespace {

std::filesystem::path write_file(const testutil::TempDir& tmp, const std::string& name,
                                 const std::string& content) {
  const auto path = tmp.file(name);
  std::ofstream out(path, std::ios::binary);
  out << content;
  return path;
}

}  // namespace

TEST_CASE("csv reader handles quoting") {
  csv::Reader reader("a,\"b,c\",\"d\"\"e\",\"f\ng\"\r\nh,i,j,k\n");
  auto row1 = reader.next_row();
  REQUIRE(row1.has_value());
  CHECK(*row1 == std::vector<std::string>{"a", "b,c", "d\"e", "f\ng"});
  auto row2 = reader.next_row();
  REQUIRE(row2.has_value());
  CHECK(row2->size() == 4);
  CHECK(reader.row_line() == 3);  // quoted newline advanced the line counter
  CHECK(!reader.next_row().has_value());
}

TEST_CASE("csv reader rejects malformed quoting") {
  CHECK_THROWS_AS(csv::Reader("a,b\"c\n").next_row(), MalformedRowError);
  CHECK_THROWS_AS(csv::Reader("\"abc\ndef").next_row(), MalformedRowError);
  CHECK_THROWS_AS(csv::Reader("\"abc\"def\n").next_row(), MalformedRowError);
}

TEST_CASE("load_csv parses a labeled corpus") {
  testutil::TempDir tmp;
  const auto path = write_file(tmp, "train.csv",
                               "id,tweet,labels\n"
                               "t1,\"vaccines, honestly\",pharma political\n"
                               "t2,plain text,none\n");
  const auto records = load_csv(path, true);
  REQUIRE(records.size() == 2);
  CHECK(records[0].id == "t1");
  CHECK(records[0].text == "vaccines, honestly");
  CHECK(records[0].gold == LabelSet{Label::pharma, Label::political});
  CHECK(records[1].gold == LabelSet{Label::none});
}

TEST_CASE("load_csv error paths carry line numbers") {
  testutil::TempDir tmp;

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_csv(tmp.file("absent.csv"), true), FileUnreadableError);
  }
  SUBCASE("duplicate id names the id") {
    const auto path = write_file(tmp, "dup.csv",
                                 "id,tweet,labels\nt1,a,none\nt2,b,none\nt1,c,none\n");
    try {
      load_csv(path, true);
      FAIL("expected DuplicateIdError");
    } catch (const DuplicateIdError& e) {
      CHECK(e.id == "t1");
      CHECK(e.line == 4);
    }
  }
  SUBCASE("wrong column count") {
    const auto path = write_file(tmp, "cols.csv", "id,tweet,labels\nt1,a\n");
    try {
      load_csv(path, true);
      FAIL("expected MalformedRowError");
    } catch (const MalformedRowError& e) {
      CHECK(e.line == 2);
    }
  }
  SUBCASE("unknown label carries the line") {
    const auto path = write_file(tmp, "label.csv", "id,tweet,labels\nt1,a,none\nt2,b,bogus\n");
    try {
      load_csv(path, true);
      FAIL("expected UnknownLabelError");
    } catch (const UnknownLabelError& e) {
      CHECK(e.token == "bogus");
      CHECK(e.line == 3);
    }
  }
  SUBCASE("empty text") {
    const auto path = write_file(tmp, "blank.csv", "id,tweet,labels\nt1,\"  \",none\n");
    CHECK_THROWS_AS(load_csv(path, true), MalformedRowError);
  }
}

TEST_CASE("load_csv supports unlabeled input and headerless files") {
  testutil::TempDir tmp;
  SUBCASE("prediction input without label column") {
    const auto path = write_file(tmp, "test.csv", "id,tweet\nt1,hello\n");
    const auto records = load_csv(path, false);
    REQUIRE(records.size() == 1);
    CHECK(!records[0].gold.has_value());
  }
  SUBCASE("label column present but ignored") {
    const auto path = write_file(tmp, "test2.csv", "id,tweet,labels\nt1,hello,none\n");
    const auto records = load_csv(path, false);
    REQUIRE(records.size() == 1);
    CHECK(!records[0].gold.has_value());
  }
  SUBCASE("headerless positional columns") {
    CsvSchema schema;
    schema.has_header = false;
    const auto path = write_file(tmp, "nohdr.csv", "t1,hello,none\nt2,world,pharma\n");
    const auto records = load_csv(path, true, " ", schema);
    REQUIRE(records.size() == 2);
    CHECK(records[1].gold == LabelSet{Label::pharma});
  }
  SUBCASE("custom column names") {
    CsvSchema schema;
    schema.id_column = "tweet_id";
    schema.text_column = "content";
    schema.label_column = "tags";
    const auto path = write_file(tmp, "named.csv", "tweet_id,content,tags\nt1,hey,none\n");
    const auto records = load_csv(path, true, " ", schema);
    REQUIRE(records.size() == 1);
  }
}

TEST_CASE("corpus write/load round trip with adversarial text") {
  testutil::TempDir tmp;
  std::mt19937 rng(99);
  std::vector<TweetRecord> records;
  for (std::size_t i = 0; i < 60; ++i) {
    records.push_back(
        {testutil::random_id(rng, i), testutil::random_adversarial_text(rng),
         testutil::random_label_set(rng)});
  }
  const auto path = tmp.file("round.csv");
  write_csv(records, path);
  const auto loaded = load_csv(path, true);
  CHECK(loaded == records);

  // A second serialization produces identical bytes.
  const auto path2 = tmp.file("round2.csv");
  write_csv(loaded, path2);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  const std::string bytes_a((std::istreambuf_iterator<char>(a)), {});
  const std::string bytes_b((std::istreambuf_iterator<char>(b)), {});
  CHECK(bytes_a == bytes_b);
}

TEST_CASE("summarize counts exactly") {
  SUBCASE("empty corpus") {
    const auto summary = summarize({});
    CHECK(summary.record_count == 0);
    for (auto c : summary.per_label_counts) CHECK(c == 0);
    CHECK(summary.multi_label_fraction == 0.0);
  }
  SUBCASE("two records, one multi-label") {
    const std::vector<TweetRecord> records = {
        {"a", "x", LabelSet{Label::none}},
        {"b", "y", LabelSet{Label::pharma, Label::political}},
    };
    const auto summary = summarize(records);
    CHECK(summary.record_count == 2);
    CHECK(summary.multi_label_fraction == doctest::Approx(0.5));
    CHECK(summary.per_label_counts[label_index(Label::pharma)] == 1);
    CHECK(summary.per_label_counts[label_index(Label::none)] == 1);
  }
  SUBCASE("missing gold is rejected") {
    const std::vector<TweetRecord> records = {{"a", "x", std::nullopt}};
    CHECK_THROWS_AS(summarize(records), MissingGoldError);
  }
  SUBCASE("planted counts match an independent scan") {
    std::mt19937 rng(4321);
    std::vector<TweetRecord> records;
    for (std::size_t i = 0; i < 100; ++i) {
      records.push_back({"id" + std::to_string(i), "text", testutil::random_label_set(rng)});
    }
    const auto summary = summarize(records);
    // Independent recount.
    std::size_t multi = 0;
    std::array<std::size_t, 12> counts{};
    for (const auto& r : records) {
      std::size_t size = 0;
      for (int b = 0; b < 12; ++b) {
        if (r.gold->bits() & (1u << b)) {
          ++counts[static_cast<std::size_t>(b)];
          ++size;
        }
      }
      if (size >= 2) ++multi;
    }
    CHECK(summary.per_label_counts == counts);
    CHECK(summary.multi_label_fraction == doctest::Approx(multi / 100.0));
    // With every record non-empty, per-label counts sum to >= record count.
    std::size_t total = 0;
    for (auto c : counts) total += c;
    CHECK(total >= summary.record_count);
  }
}
