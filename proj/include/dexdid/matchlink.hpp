#pragma once

#include <algorithm>
#include <cctype>
#include <set>
#include <string>
#include <vector>

/*
 * Name linkage between incident actor names and token listings. Names are
 * normalized, split into 3-character word chunks, and compared by Jaccard
 * overlap. A pair matches when the id score reaches 0.8, the name score
 * reaches 0.7, or the token name carries a domain keyword and the name
 * score reaches 0.5. Every scored pair is emitted so a human can review the
 * borderline ones; nothing is auto-committed.
 */

namespace dexdid {

struct TokenEntry {
  std::string token_id;
  std::string token_name;
};

struct MatchCandidate {
  std::string actor;
  std::string token_id;
  std::string token_name;
  double score_id = 0.0;
  double score_name = 0.0;
  bool matched = false;
  std::string rule;  // "id_0.8", "name_0.7", "keyword_0.5", or empty
};

struct MatchThresholds {
  double id = 0.8;
  double name = 0.7;
  double keyword_name = 0.5;
};

inline const std::vector<std::string>& default_keywords() {
  static const std::vector<std::string> kw = {"dao", "network", "finance", "protocol"};
  return kw;
}

// Lowercase, strip everything outside [a-z0-9 ], collapse runs of spaces.
inline std::string normalize_name(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (unsigned char c : text) {
    char lc = static_cast<char>(std::tolower(c));
    if (lc == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if ((lc >= 'a' && lc <= 'z') || (lc >= '0' && lc <= '9')) {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(lc);
    }
  }
  return out;
}

// All contiguous 3-grams per word; words shorter than 3 characters count
// whole.
inline std::set<std::string> chunk3(const std::string& normalized) {
  std::set<std::string> chunks;
  std::size_t i = 0;
  while (i < normalized.size()) {
    std::size_t j = normalized.find(' ', i);
    if (j == std::string::npos) j = normalized.size();
    std::size_t len = j - i;
    if (len > 0) {
      if (len < 3) chunks.insert(normalized.substr(i, len));
      else
        for (std::size_t p = i; p + 3 <= j; ++p) chunks.insert(normalized.substr(p, 3));
    }
    i = j + 1;
  }
  return chunks;
}

inline double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t inter = 0;
  for (const auto& x : a) inter += b.count(x);
  std::size_t uni = a.size() + b.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Score every actor against every token. Output ordered by (actor, token_id)
// so results do not depend on input order.
inline std::vector<MatchCandidate> match_actors(
    const std::vector<std::string>& actors, const std::vector<TokenEntry>& tokens,
    const std::vector<std::string>& keywords = default_keywords(),
    const MatchThresholds& thresholds = {}) {
  std::vector<MatchCandidate> out;
  out.reserve(actors.size() * tokens.size());
  for (const auto& actor : actors) {
    auto actor_chunks = chunk3(normalize_name(actor));
    for (const auto& token : tokens) {
      MatchCandidate cand;
      cand.actor = actor;
      cand.token_id = token.token_id;
      cand.token_name = token.token_name;
      std::string norm_name = normalize_name(token.token_name);
      cand.score_id = jaccard(actor_chunks, chunk3(normalize_name(token.token_id)));
      cand.score_name = jaccard(actor_chunks, chunk3(norm_name));

      bool has_keyword = false;
      for (const auto& kw : keywords)
        if (!kw.empty() && norm_name.find(kw) != std::string::npos) {
          has_keyword = true;
          break;
        }

      if (cand.score_id >= thresholds.id) {
        cand.matched = true;
        cand.rule = "id_0.8";
      } else if (cand.score_name >= thresholds.name) {
        cand.matched = true;
        cand.rule = "name_0.7";
      } else if (has_keyword && cand.score_name >= thresholds.keyword_name) {
        cand.matched = true;
        cand.rule = "keyword_0.5";
      }
      out.push_back(std::move(cand));
    }
  }
  std::sort(out.begin(), out.end(), [](const MatchCandidate& a, const MatchCandidate& b) {
    if (a.actor != b.actor) return a.actor < b.actor;
    return a.token_id < b.token_id;
  });
  return out;
}

}  // namespace dexdid
