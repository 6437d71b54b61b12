#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace kgqa {

// One tag per prompt template the pipeline uses.
enum class PromptKind {
    ContextGeneration,
    TrajectorySummary,
    PatternExtraction,
    CandidateRetrieval,
    Reranking,
};

inline constexpr std::size_t kPromptKindCount = 5;
inline constexpr std::array<PromptKind, kPromptKindCount> kAllPromptKinds = {
    PromptKind::ContextGeneration, PromptKind::TrajectorySummary, PromptKind::PatternExtraction,
    PromptKind::CandidateRetrieval, PromptKind::Reranking};

const char* kind_name(PromptKind kind);
PromptKind kind_from_name(const std::string& name);  // throws InputError on unknown names

// The on-disk file each kind loads from, relative to the template directory.
const char* template_filename(PromptKind kind);

// Placeholder names each template must declare, sorted.
const std::vector<std::string>& expected_placeholders(PromptKind kind);

using FieldMap = std::map<std::string, std::string>;

struct PromptTemplate {
    std::string text;
    std::vector<std::string> placeholders;  // sorted, unique
};

// The five templates, loaded from a directory of text files. Placeholders are
// `{name}` tokens where name is a lowercase identifier; braces around anything
// else (quoted strings, literals in examples) are left alone.
class TemplateSet {
public:
    // Reads one file per kind; throws InputError when a file is missing and
    // TemplateError when a template's placeholders differ from the contract.
    static TemplateSet load(const std::string& directory);

    // Builds from in-memory text, same validation. Keys must cover all kinds.
    static TemplateSet from_strings(const std::map<PromptKind, std::string>& texts);

    const PromptTemplate& get(PromptKind kind) const;

private:
    std::array<PromptTemplate, kPromptKindCount> templates_;
};

// Scans `text` for `{identifier}` placeholder tokens, sorted and deduplicated.
std::vector<std::string> scan_placeholders(const std::string& text);

// Substitutes every placeholder with its field value. Throws TemplateError
// naming the field when one is missing from `fields` or when `fields`
// carries a name the template does not declare.
std::string render_prompt(const TemplateSet& templates, PromptKind kind, const FieldMap& fields);

// Formats a relation collection the way the templates' examples do:
// {"relation.a", "relation.b"}  — or {} when empty.
std::string format_relation_set(const std::vector<std::string>& relations);

}  // namespace kgqa
