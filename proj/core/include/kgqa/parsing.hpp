#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace kgqa {

// Extracts the first bracketed, quoted-string list embedded in `text`
// (single or double quotes, surrounding prose tolerated), drops entries not
// in `allowed`, truncates to the first k, and preserves the model's order.
// "[]" is a valid empty result. Throws ParseError when no list literal is
// found.
std::vector<std::string> parse_relation_list(const std::string& text,
                                             const std::set<std::string>& allowed, int k);

// Extracts the first brace-delimited map of quoted keys to numeric values.
// Values are clamped into [0,1]; keys outside `candidates` are dropped;
// candidates missing from the map default to 0.0, so every candidate gets a
// score. Throws ParseError when no map literal is found.
std::map<std::string, double> parse_score_map(const std::string& text,
                                              const std::set<std::string>& candidates);

}  // namespace kgqa
