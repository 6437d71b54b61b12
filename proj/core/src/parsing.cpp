#include "kgqa/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

#include "kgqa/errors.hpp"

namespace kgqa {

namespace {

// Cursor over the candidate literal. All parse_* helpers return nullopt on a
// malformed literal so the caller can resume scanning for the next one.
struct Cursor {
    const std::string& text;
    std::size_t pos;

    bool done() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
};

std::optional<std::string> parse_quoted(Cursor& c) {
    if (c.done()) return std::nullopt;
    char quote = c.peek();
    if (quote != '"' && quote != '\'') return std::nullopt;
    ++c.pos;
    std::string out;
    while (!c.done()) {
        char ch = c.text[c.pos++];
        if (ch == quote) return out;
        if (ch == '\\' && !c.done()) {
            char esc = c.text[c.pos++];
            switch (esc) {
                case 'n': out += '\n'; break;
                case 't': out += '\t'; break;
                default: out += esc; break;  // \" \' \\ and anything else: literal
            }
            continue;
        }
        out += ch;
    }
    return std::nullopt;  // unterminated
}

std::optional<double> parse_number(Cursor& c) {
    if (c.done()) return std::nullopt;
    const char* begin = c.text.c_str() + c.pos;
    char* end = nullptr;
    double value = std::strtod(begin, &end);
    if (end == begin) return std::nullopt;
    c.pos += static_cast<std::size_t>(end - begin);
    return value;
}

// ["a", 'b'] with optional trailing comma, python-style.
std::optional<std::vector<std::string>> parse_list_at(const std::string& text, std::size_t start) {
    Cursor c{text, start};
    if (c.done() || c.peek() != '[') return std::nullopt;
    ++c.pos;
    std::vector<std::string> items;
    c.skip_ws();
    if (!c.done() && c.peek() == ']') return items;
    while (true) {
        c.skip_ws();
        auto item = parse_quoted(c);
        if (!item) return std::nullopt;
        items.push_back(std::move(*item));
        c.skip_ws();
        if (c.done()) return std::nullopt;
        if (c.peek() == ']') return items;
        if (c.peek() != ',') return std::nullopt;
        ++c.pos;
        c.skip_ws();
        if (!c.done() && c.peek() == ']') return items;  // trailing comma
    }
}

// {"a": 0.9, 'b': 1} with optional trailing comma.
std::optional<std::vector<std::pair<std::string, double>>> parse_map_at(const std::string& text,
                                                                        std::size_t start) {
    Cursor c{text, start};
    if (c.done() || c.peek() != '{') return std::nullopt;
    ++c.pos;
    std::vector<std::pair<std::string, double>> entries;
    c.skip_ws();
    if (!c.done() && c.peek() == '}') return entries;
    while (true) {
        c.skip_ws();
        auto key = parse_quoted(c);
        if (!key) return std::nullopt;
        c.skip_ws();
        if (c.done() || c.peek() != ':') return std::nullopt;
        ++c.pos;
        c.skip_ws();
        auto value = parse_number(c);
        if (!value) return std::nullopt;
        entries.emplace_back(std::move(*key), *value);
        c.skip_ws();
        if (c.done()) return std::nullopt;
        if (c.peek() == '}') return entries;
        if (c.peek() != ',') return std::nullopt;
        ++c.pos;
        c.skip_ws();
        if (!c.done() && c.peek() == '}') return entries;
    }
}

}  // namespace

std::vector<std::string> parse_relation_list(const std::string& text,
                                             const std::set<std::string>& allowed, int k) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '[') continue;
        auto items = parse_list_at(text, i);
        if (!items) continue;
        std::vector<std::string> result;
        for (auto& item : *items) {
            if (allowed.count(item) == 0) continue;  // fidelity rule
            if (std::find(result.begin(), result.end(), item) != result.end()) continue;
            result.push_back(std::move(item));
            if (static_cast<int>(result.size()) == k) break;
        }
        return result;
    }
    throw ParseError("no bracketed relation list found in completion");
}

std::map<std::string, double> parse_score_map(const std::string& text,
                                              const std::set<std::string>& candidates) {
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        auto entries = parse_map_at(text, i);
        if (!entries) continue;
        std::map<std::string, double> result;
        for (const auto& name : candidates) result[name] = 0.0;
        for (auto& [key, value] : *entries) {
            if (candidates.count(key) == 0) continue;
            result[key] = std::isnan(value) ? 0.0 : std::clamp(value, 0.0, 1.0);
        }
        return result;
    }
    throw ParseError("no brace-delimited score map found in completion");
}

}  // namespace kgqa
