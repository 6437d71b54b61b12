#include "kgqa/prompts.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "kgqa/errors.hpp"

namespace kgqa {

namespace {

std::size_t kind_index(PromptKind kind) { return static_cast<std::size_t>(kind); }

bool is_placeholder_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

// Returns the placeholder name starting at text[pos] == '{', or empty if the
// brace does not open a `{identifier}` token.
std::string placeholder_at(const std::string& text, std::size_t pos) {
    std::size_t i = pos + 1;
    if (i >= text.size() || !(text[i] >= 'a' && text[i] <= 'z')) return {};
    std::size_t start = i;
    while (i < text.size() && is_placeholder_char(text[i])) ++i;
    if (i >= text.size() || text[i] != '}') return {};
    return text.substr(start, i - start);
}

}  // namespace

const char* kind_name(PromptKind kind) {
    switch (kind) {
        case PromptKind::ContextGeneration: return "ContextGeneration";
        case PromptKind::TrajectorySummary: return "TrajectorySummary";
        case PromptKind::PatternExtraction: return "PatternExtraction";
        case PromptKind::CandidateRetrieval: return "CandidateRetrieval";
        case PromptKind::Reranking: return "Reranking";
    }
    return "Unknown";
}

PromptKind kind_from_name(const std::string& name) {
    for (PromptKind kind : kAllPromptKinds) {
        if (name == kind_name(kind)) return kind;
    }
    throw InputError("unknown prompt kind: " + name);
}

const char* template_filename(PromptKind kind) {
    switch (kind) {
        case PromptKind::ContextGeneration: return "context_generation.txt";
        case PromptKind::TrajectorySummary: return "trajectory_summary.txt";
        case PromptKind::PatternExtraction: return "pattern_extraction.txt";
        case PromptKind::CandidateRetrieval: return "candidate_retrieval.txt";
        case PromptKind::Reranking: return "reranking.txt";
    }
    throw InputError("unknown prompt kind");
}

const std::vector<std::string>& expected_placeholders(PromptKind kind) {
    static const std::vector<std::string> context = {"question", "relations_list"};
    static const std::vector<std::string> summary = {"explored_path", "question",
                                                     "reason_for_termination"};
    static const std::vector<std::string> pattern = {"trajectory_summaries"};
    static const std::vector<std::string> retrieval = {"candidate_relations", "context_narrative",
                                                       "k", "question"};
    static const std::vector<std::string> rerank = {"exploration_experience", "historical_path",
                                                    "question", "top_k_relations"};
    switch (kind) {
        case PromptKind::ContextGeneration: return context;
        case PromptKind::TrajectorySummary: return summary;
        case PromptKind::PatternExtraction: return pattern;
        case PromptKind::CandidateRetrieval: return retrieval;
        case PromptKind::Reranking: return rerank;
    }
    throw InputError("unknown prompt kind");
}

std::vector<std::string> scan_placeholders(const std::string& text) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '{') continue;
        std::string name = placeholder_at(text, i);
        if (!name.empty()) names.push_back(name);
    }
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    return names;
}

TemplateSet TemplateSet::load(const std::string& directory) {
    std::map<PromptKind, std::string> texts;
    for (PromptKind kind : kAllPromptKinds) {
        std::string path = directory + "/" + template_filename(kind);
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("cannot open prompt template: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        texts[kind] = buf.str();
    }
    return from_strings(texts);
}

TemplateSet TemplateSet::from_strings(const std::map<PromptKind, std::string>& texts) {
    TemplateSet set;
    for (PromptKind kind : kAllPromptKinds) {
        auto it = texts.find(kind);
        if (it == texts.end()) {
            throw InputError(std::string("no template text for kind ") + kind_name(kind));
        }
        PromptTemplate tmpl;
        tmpl.text = it->second;
        tmpl.placeholders = scan_placeholders(tmpl.text);

        const auto& expected = expected_placeholders(kind);
        for (const auto& name : expected) {
            if (!std::binary_search(tmpl.placeholders.begin(), tmpl.placeholders.end(), name)) {
                throw TemplateError(std::string(kind_name(kind)) +
                                        " template is missing a placeholder",
                                    name);
            }
        }
        for (const auto& name : tmpl.placeholders) {
            if (!std::binary_search(expected.begin(), expected.end(), name)) {
                throw TemplateError(std::string(kind_name(kind)) +
                                        " template declares an unexpected placeholder",
                                    name);
            }
        }
        set.templates_[kind_index(kind)] = std::move(tmpl);
    }
    return set;
}

const PromptTemplate& TemplateSet::get(PromptKind kind) const {
    return templates_[kind_index(kind)];
}

std::string render_prompt(const TemplateSet& templates, PromptKind kind, const FieldMap& fields) {
    const PromptTemplate& tmpl = templates.get(kind);

    for (const auto& name : tmpl.placeholders) {
        if (fields.find(name) == fields.end()) {
            throw TemplateError(std::string(kind_name(kind)) + " render is missing a field", name);
        }
    }
    for (const auto& [name, value] : fields) {
        if (!std::binary_search(tmpl.placeholders.begin(), tmpl.placeholders.end(), name)) {
            throw TemplateError(std::string(kind_name(kind)) + " render has an extra field", name);
        }
    }

    // Single pass, so substituted values are never re-scanned.
    std::string out;
    out.reserve(tmpl.text.size());
    for (std::size_t i = 0; i < tmpl.text.size(); ++i) {
        if (tmpl.text[i] == '{') {
            std::string name = placeholder_at(tmpl.text, i);
            if (!name.empty()) {
                out += fields.at(name);
                i += name.size() + 1;  // skip past "name}"
                continue;
            }
        }
        out += tmpl.text[i];
    }
    return out;
}

std::string format_relation_set(const std::vector<std::string>& relations) {
    std::ostringstream out;
    out << '{';
    for (std::size_t i = 0; i < relations.size(); ++i) {
        if (i) out << ", ";
        out << '"' << relations[i] << '"';
    }
    out << '}';
    return out.str();
}

}  // namespace kgqa
