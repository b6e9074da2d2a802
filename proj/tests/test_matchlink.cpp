#include <catch2/catch_amalgamated.hpp>

#include "dexdid/matchlink.hpp"

using namespace dexdid;

TEST_CASE("name normalization lowercases, strips punctuation, collapses spaces") {
  REQUIRE(normalize_name("Pickle Finance!") == "pickle finance");
  REQUIRE(normalize_name("  Multi--Chain  Capital  ") == "multichain capital");
  REQUIRE(normalize_name("WEB3 DAO") == "web3 dao");
  REQUIRE(normalize_name("...") == "");
  REQUIRE(normalize_name("") == "");
}

TEST_CASE("3-gram chunking runs per word and keeps short words whole") {
  REQUIRE(chunk3("pickle") == std::set<std::string>{"pic", "ick", "ckl", "kle"});
  REQUIRE(chunk3("ab cd") == std::set<std::string>{"ab", "cd"});
  REQUIRE(chunk3("a bc def") == std::set<std::string>{"a", "bc", "def"});
  REQUIRE(chunk3("") == std::set<std::string>{});
}

TEST_CASE("jaccard overlap on chunk sets") {
  REQUIRE(jaccard(chunk3("pickle"), chunk3("pickles")) == Catch::Approx(0.8).epsilon(1e-12));
  REQUIRE(jaccard(chunk3("pickle"), chunk3("pickle")) == 1.0);
  REQUIRE(jaccard(chunk3("pickle"), chunk3("yearn")) == 0.0);
  REQUIRE(jaccard({}, {}) == 0.0);
}

TEST_CASE("match rules fire in id, name, keyword order with inclusive thresholds") {
  std::vector<TokenEntry> tokens = {
      {"pickle", "Pickle"},            // id exact
      {"pickles", "unrelated"},        // id score exactly 0.8
      {"pf-token", "Pickle Finance"},  // name exact, id dissimilar
      {"hv1", "Harvest Finance"},      // keyword + name score exactly 0.5
      {"hv2", "Harvest Group"},        // 0.625 name score, no keyword
      {"hv3", "Harvest Protocol"},     // keyword but name score below 0.5
  };

  auto rows = match_actors({"pickle"}, tokens);
  auto find = [&](const std::string& id) {
    for (const auto& r : rows)
      if (r.token_id == id) return r;
    FAIL("missing token row " + id);
    return MatchCandidate{};
  };

  REQUIRE(find("pickle").matched);
  REQUIRE(find("pickle").rule == "id_0.8");
  REQUIRE(find("pickles").score_id == Catch::Approx(0.8).epsilon(1e-12));
  REQUIRE(find("pickles").matched);
  REQUIRE(find("pickles").rule == "id_0.8");

  auto finance = match_actors({"pickle finance"}, tokens);
  for (const auto& r : finance)
    if (r.token_id == "pf-token") {
      REQUIRE(r.score_name == 1.0);
      REQUIRE(r.matched);
      REQUIRE(r.rule == "name_0.7");
    }

  auto harvest = match_actors({"harvest"}, tokens);
  for (const auto& r : harvest) {
    if (r.token_id == "hv1") {
      REQUIRE(r.score_name == Catch::Approx(0.5).epsilon(1e-12));
      REQUIRE(r.matched);
      REQUIRE(r.rule == "keyword_0.5");
    }
    if (r.token_id == "hv2") {
      REQUIRE(r.score_name == Catch::Approx(0.625).epsilon(1e-12));
      REQUIRE_FALSE(r.matched);
      REQUIRE(r.rule.empty());
    }
    if (r.token_id == "hv3") {
      REQUIRE(r.score_name < 0.5);
      REQUIRE_FALSE(r.matched);
    }
  }
}

TEST_CASE("custom keywords and thresholds override the defaults") {
  std::vector<TokenEntry> tokens = {{"qs", "QuickSwap"}};

  // 4 of 7 chunks shared: 0.571, below the name rule, above the keyword rule.
  auto plain = match_actors({"quicks"}, tokens);
  REQUIRE(plain[0].score_name == Catch::Approx(4.0 / 7.0).epsilon(1e-12));
  REQUIRE_FALSE(plain[0].matched);

  auto swapped = match_actors({"quicks"}, tokens, {"swap"});
  REQUIRE(swapped[0].matched);
  REQUIRE(swapped[0].rule == "keyword_0.5");

  MatchThresholds strict{0.9, 0.9, 0.9};
  auto none = match_actors({"pickle"}, {{"pickles", "Pickles"}}, default_keywords(), strict);
  REQUIRE_FALSE(none[0].matched);
}

TEST_CASE("candidates come out sorted by actor then token id") {
  auto rows = match_actors({"zeta", "alpha"}, {{"t2", "B"}, {"t1", "A"}});
  REQUIRE(rows.size() == 4);
  REQUIRE(rows[0].actor == "alpha");
  REQUIRE(rows[0].token_id == "t1");
  REQUIRE(rows[1].actor == "alpha");
  REQUIRE(rows[1].token_id == "t2");
  REQUIRE(rows[2].actor == "zeta");
  REQUIRE(rows[2].token_id == "t1");
  REQUIRE(rows[3].actor == "zeta");
  REQUIRE(rows[3].token_id == "t2");
}
