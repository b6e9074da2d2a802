// Worked example: link incident actor names to token listings.
//
// Shows the trigram-overlap matcher on a small hand-made table: exact ticker
// hits, fuzzy name hits, and the weaker keyword-assisted rule for names that
// only share a stem with their token.

#include <cstdio>
#include <vector>

#include "dexdid/matchlink.hpp"

using namespace dexdid;

int main() {
  std::vector<std::string> actors = {
      "Pickle",
      "Pickle Finance",
      "Harvest",
      "Compound",
  };
  std::vector<TokenEntry> tokens = {
      {"pickle", "Pickle Finance"},
      {"farm", "Harvest Finance"},
      {"comp", "Compound"},
      {"uni", "Uniswap"},
  };

  auto results = match_actors(actors, tokens);
  std::printf("%-20s %-8s %-18s %6s %6s  %s\n", "actor", "token", "token name", "id", "name",
              "rule");
  for (const auto& r : results) {
    if (!r.matched) continue;
    std::printf("%-20s %-8s %-18s %6.2f %6.2f  %s\n", r.actor.c_str(), r.token_id.c_str(),
                r.token_name.c_str(), r.score_id, r.score_name, r.rule.c_str());
  }

  std::size_t matched = 0;
  for (const auto& r : results)
    if (r.matched) ++matched;
  std::printf("\n%zu of %zu actor-token pairs matched\n", matched, results.size());
  return 0;
}
