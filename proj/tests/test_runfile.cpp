#include <doctest.h>

#include <fstream>
#include <random>

#include "support/testutil.hpp"
#include "vaxkit/errors.hpp"
#include "vaxkit/runfile.hpp"

using namespace vaxkit;

TEST_CASE("write_run emits header plus one line per row") {
  testutil::TempDir tmp;
  RunFile run;
  run.method_tag = "two";
  run.rows = {{"a", LabelSet{Label::pharma}}, {"b", LabelSet{Label::none}}};
  const auto path = tmp.file("two.csv");
  write_run(run, path);

  std::ifstream in(path);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "id,labels");
  CHECK(lines[1] == "a,pharma");
  CHECK(lines[2] == "b,none");
}

TEST_CASE("write_run validates before writing") {
  testutil::TempDir tmp;
  const auto path = tmp.file("bad.csv");
  RunFile run;
  run.rows = {{"a", LabelSet{Label::pharma}}, {"b", LabelSet{}}};
  try {
    write_run(run, path);
    FAIL("expected InvariantViolationError");
  } catch (const InvariantViolationError& e) {
    CHECK(e.offending_ids == std::vector<std::string>{"b"});
  }
  CHECK(!std::filesystem::exists(path));

  SUBCASE("duplicate ids are offenders too") {
    RunFile dup;
    dup.rows = {{"a", LabelSet{Label::none}}, {"a", LabelSet{Label::none}}};
    CHECK_THROWS_AS(write_run(dup, path), InvariantViolationError);
  }
}

TEST_CASE("read_run error paths") {
  testutil::TempDir tmp;
  SUBCASE("label typo with line number") {
    const auto path = tmp.file("typo.csv");
    std::ofstream(path) << "id,labels\na,pharma\nb,pharmma\n";
    try {
      read_run(path);
      FAIL("expected UnknownLabelError");
    } catch (const UnknownLabelError& e) {
      CHECK(e.token == "pharmma");
      CHECK(e.line == 3);
    }
  }
  SUBCASE("bad header") {
    const auto path = tmp.file("hdr.csv");
    std::ofstream(path) << "tweet,labels\na,none\n";
    CHECK_THROWS_AS(read_run(path), MalformedRowError);
  }
  SUBCASE("header only is a valid empty run") {
    const auto path = tmp.file("empty.csv");
    std::ofstream(path) << "id,labels\n";
    const auto run = read_run(path);
    CHECK(run.rows.empty());
    CHECK(run.method_tag == "empty");
  }
  SUBCASE("duplicate id") {
    const auto path = tmp.file("dup.csv");
    std::ofstream(path) << "id,labels\na,none\na,pharma\n";
    CHECK_THROWS_AS(read_run(path), DuplicateIdError);
  }
}

TEST_CASE("run file round trip on random content") {
  testutil::TempDir tmp;
  std::mt19937 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    RunFile run;
    run.method_tag = "trial" + std::to_string(trial);
    std::uniform_int_distribution<std::size_t> rows(0, 30);
    const std::size_t n = rows(rng);
    for (std::size_t i = 0; i < n; ++i) {
      run.rows.emplace_back(testutil::random_id(rng, i), testutil::random_label_set(rng));
    }
    const auto path = tmp.file(run.method_tag + ".csv");
    write_run(run, path);
    CHECK(read_run(path) == run);
  }
}

TEST_CASE("round trip of a 486-row run") {
  testutil::TempDir tmp;
  std::mt19937 rng(486);
  RunFile run;
  run.method_tag = "sized";
  for (std::size_t i = 0; i < 486; ++i) {
    run.rows.emplace_back("tweet-" + std::to_string(i), testutil::random_label_set(rng));
  }
  const auto path = tmp.file("sized.csv");
  write_run(run, path);
  CHECK(read_run(path) == run);
}
