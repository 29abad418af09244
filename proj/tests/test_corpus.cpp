#include <algorithm>
#include <set>

#include <doctest.h>

#include "aspectlab/corpus.hpp"
#include "aspectlab/errors.hpp"
#include "aspectlab/rng.hpp"
#include "test_helpers.hpp"

using namespace aspectlab;
using namespace aspectlab::testing;

namespace {

ClauseRecord rec(const std::string& id, const std::string& lemma,
                 Label label = Label::Unlabeled, bool valid = true) {
  ClauseRecord r;
  r.clause_id = id;
  r.verb_lemma = lemma;
  r.gold_label = label;
  r.valid_parse = valid;
  return r;
}

ClauseSet random_clause_set(SplitMix64& rng, std::size_t n, bool labeled) {
  ClauseSet cs;
  cs.provenance = "random";
  for (std::size_t i = 0; i < n; ++i) {
    ClauseRecord r;
    r.clause_id = "c" + std::to_string(i);
    r.verb_lemma = "verb" + std::to_string(rng.next_below(9));
    for (int m = 0; m < kNumMarkers; ++m) {
      if (m == kPastTense || m == kPresentTense) continue;
      r.markers[m] = rng.next_bernoulli(0.3);
    }
    const double tense = rng.next_unit();
    if (tense < 0.4) r.set_marker(kPastTense);
    else if (tense < 0.7) r.set_marker(kPresentTense);
    if (labeled) {
      r.gold_label = rng.next_bernoulli(0.25) ? Label::State : Label::Event;
    }
    r.valid_parse = !rng.next_bernoulli(0.1);
    cs.records.push_back(std::move(r));
  }
  return cs;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("jsonl load keeps file order") {
    TempDir tmp;
    write_file(tmp.path("c.jsonl"),
               R"({"clause_id":"a","verb_lemma":"run","markers":{"not_never":true}})"
               "\n"
               R"({"clause_id":"b","verb_lemma":"walk","gold_label":"event"})"
               "\n"
               R"({"clause_id":"c","verb_lemma":"seem","gold_label":"state","valid_parse":false})"
               "\n");
    const ClauseSet cs = load_clauses(tmp.path("c.jsonl"), ClauseFileFormat::Jsonl);
    REQUIRE(cs.records.size() == 3);
    CHECK(cs.records[0].clause_id == "a");
    CHECK(cs.records[0].marker(kNotNever));
    CHECK(cs.records[1].gold_label == Label::Event);
    CHECK(cs.records[2].gold_label == Label::State);
    CHECK_FALSE(cs.records[2].valid_parse);  // retained but flagged
  }

  TEST_CASE("jsonl errors carry the offending line") {
    TempDir tmp;
    SUBCASE("missing verb_lemma") {
      write_file(tmp.path("c.jsonl"),
                 R"({"clause_id":"a","verb_lemma":"run"})"
                 "\n"
                 R"({"clause_id":"b"})"
                 "\n");
      try {
        load_clauses(tmp.path("c.jsonl"), ClauseFileFormat::Jsonl);
        FAIL("expected FormatError");
      } catch (const FormatError& e) {
        CHECK(e.line == 2);
        CHECK(e.reason.find("verb_lemma") != std::string::npos);
      }
    }
    SUBCASE("duplicate clause_id") {
      write_file(tmp.path("c.jsonl"),
                 R"({"clause_id":"a","verb_lemma":"run"})"
                 "\n"
                 R"({"clause_id":"a","verb_lemma":"walk"})"
                 "\n");
      CHECK_THROWS_AS(load_clauses(tmp.path("c.jsonl"), ClauseFileFormat::Jsonl),
                      DuplicateClauseIdError);
    }
    SUBCASE("unknown marker") {
      write_file(tmp.path("c.jsonl"),
                 R"({"clause_id":"a","verb_lemma":"run","markers":{"bogus":true}})"
                 "\n");
      CHECK_THROWS_AS(load_clauses(tmp.path("c.jsonl"), ClauseFileFormat::Jsonl),
                      FormatError);
    }
    SUBCASE("both tenses set") {
      write_file(
          tmp.path("c.jsonl"),
          R"({"clause_id":"a","verb_lemma":"run","markers":{"past_tense":true,"present_tense":true}})"
          "\n");
      CHECK_THROWS_AS(load_clauses(tmp.path("c.jsonl"), ClauseFileFormat::Jsonl),
                      FormatError);
    }
    SUBCASE("missing file") {
      CHECK_THROWS_AS(load_clauses(tmp.path("nope.jsonl"), ClauseFileFormat::Jsonl),
                      FileNotFoundError);
    }
  }

  TEST_CASE("tsv requires the exact header") {
    TempDir tmp;
    write_file(tmp.path("c.tsv"), "clause_id\tverb\nx\ty\n");
    CHECK_THROWS_AS(load_clauses(tmp.path("c.tsv"), ClauseFileFormat::Tsv), FormatError);
  }

  TEST_CASE("round trip through both formats") {
    SplitMix64 rng(99);
    TempDir tmp;
    const ClauseSet original = random_clause_set(rng, 120, true);
    for (const auto format : {ClauseFileFormat::Jsonl, ClauseFileFormat::Tsv}) {
      const auto path = tmp.path(format == ClauseFileFormat::Jsonl ? "c.jsonl" : "c.tsv");
      write_clauses(original, path, format);
      const ClauseSet reloaded = load_clauses(path, format);
      CHECK(reloaded.records == original.records);
    }
  }

  TEST_CASE("reference fixture loads with the published clause total") {
    TempDir tmp;
    const ClauseSet fixture = reference_fixture();
    write_clauses(fixture, tmp.path("ref.jsonl"), ClauseFileFormat::Jsonl);
    const ClauseSet loaded = load_clauses(tmp.path("ref.jsonl"), ClauseFileFormat::Jsonl);
    CHECK(loaded.records.size() == 6811);  // 2131 + 1895 + 1608 + 1177
  }

  TEST_CASE("filter removes excluded lemmas and invalid parses") {
    SplitConfig cfg;
    SUBCASE("lemma exclusion") {
      ClauseSet cs;
      cs.records = {rec("1", "be"), rec("2", "be"), rec("3", "have"), rec("4", "run")};
      const ClauseSet out = filter_clauses(cs, cfg);
      REQUIRE(out.records.size() == 1);
      CHECK(out.records[0].verb_lemma == "run");
      CHECK(out.provenance.find("removed_excluded_lemma=3") != std::string::npos);
    }
    SUBCASE("validity filter") {
      ClauseSet cs;
      for (int i = 0; i < 10; ++i) cs.records.push_back(rec("c" + std::to_string(i), "go"));
      cs.records[1].valid_parse = false;
      cs.records[4].valid_parse = false;
      cs.records[7].valid_parse = false;
      const ClauseSet out = filter_clauses(cs, cfg);
      CHECK(out.records.size() == 7);
      CHECK(out.provenance.find("removed_invalid_parse=3") != std::string::npos);
    }
  }

  TEST_CASE("filter reproduces the corpus-wide breakdown") {
    // 97,973 clauses of which 23,409 are "be" and 7,882 are "have"
    ClauseSet cs;
    cs.records.reserve(97973);
    auto add = [&](const char* lemma, int n) {
      for (int i = 0; i < n; ++i) {
        cs.records.push_back(
            rec(std::string(lemma) + std::to_string(i), lemma, Label::Unlabeled));
      }
    };
    add("be", 23409);
    add("have", 7882);
    add("tell", 33341);
    add("go", 33341);
    REQUIRE(cs.records.size() == 97973);
    const ClauseSet out = filter_clauses(cs, SplitConfig{});
    CHECK(out.records.size() == 66682);
  }

  TEST_CASE("filter is idempotent") {
    SplitMix64 rng(5);
    const ClauseSet cs = random_clause_set(rng, 200, false);
    SplitConfig cfg;
    cfg.exclude_lemmas = {"verb0", "verb3"};
    const ClauseSet once = filter_clauses(cs, cfg);
    const ClauseSet twice = filter_clauses(once, cfg);
    CHECK(once.records == twice.records);
  }

  TEST_CASE("split honors the floor rule and the published 739/739 shape") {
    SplitConfig cfg;
    cfg.seed = 11;
    SUBCASE("1478 -> 739 + 739") {
      ClauseSet cs;
      for (int i = 0; i < 1478; ++i) {
        cs.records.push_back(rec("c" + std::to_string(i), "go",
                                 i % 6 == 0 ? Label::State : Label::Event));
      }
      const auto [train, test] = split_train_test(cs, cfg);
      CHECK(train.records.size() == 739);
      CHECK(test.records.size() == 739);
    }
    SUBCASE("5 -> 2 + 3") {
      ClauseSet cs;
      for (int i = 0; i < 5; ++i) {
        cs.records.push_back(rec("c" + std::to_string(i), "go", Label::Event));
      }
      const auto [train, test] = split_train_test(cs, cfg);
      CHECK(train.records.size() == 2);
      CHECK(test.records.size() == 3);
    }
  }

  TEST_CASE("split is deterministic per seed") {
    SplitMix64 rng(17);
    const ClauseSet cs = random_clause_set(rng, 101, true);
    SplitConfig cfg;
    cfg.seed = 424242;
    const auto first = split_train_test(cs, cfg);
    const auto second = split_train_test(cs, cfg);
    CHECK(first.first.records == second.first.records);
    CHECK(first.second.records == second.second.records);

    cfg.seed = 424243;
    const auto moved = split_train_test(cs, cfg);
    CHECK(moved.first.records != first.first.records);  // overwhelmingly likely
  }

  TEST_CASE("split partitions the input for any seed") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 1 + rng.next_below(60);
      const ClauseSet cs = random_clause_set(rng, n, true);
      SplitConfig cfg;
      cfg.seed = rng.next_u64();
      const auto [train, test] = split_train_test(cs, cfg);
      CHECK(train.records.size() + test.records.size() == n);

      std::multiset<std::string> ids;
      for (const auto& r : cs.records) ids.insert(r.clause_id);
      std::multiset<std::string> got;
      for (const auto& r : train.records) got.insert(r.clause_id);
      for (const auto& r : test.records) got.insert(r.clause_id);
      CHECK(ids == got);
    }
  }

  TEST_CASE("split rejects unlabeled records and bad fractions") {
    ClauseSet cs;
    cs.records = {rec("only", "go", Label::Unlabeled)};
    SplitConfig cfg;
    try {
      split_train_test(cs, cfg);
      FAIL("expected UnlabeledRecordError");
    } catch (const UnlabeledRecordError& e) {
      CHECK(e.clause_id == "only");
    }

    cs.records[0].gold_label = Label::Event;
    cfg.train_fraction = {1, 1};
    CHECK_THROWS_AS(split_train_test(cs, cfg), DomainError);
    cfg.train_fraction = {0, 2};
    CHECK_THROWS_AS(split_train_test(cs, cfg), DomainError);
  }
}
