#include "kgqa/narrator.hpp"

#include <cctype>

namespace kgqa {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

}  // namespace

Narrative generate_context(const std::string& question, const RelationSequence& sequence,
                           Gateway& gateway) {
    if (sequence.empty()) {
        return {kStartOfPathNarrative, 0};
    }
    CompletionResult result = gateway.run(PromptKind::ContextGeneration,
                                          {{"question", question},
                                           {"relations_list", format_relation_set(sequence.relations)}});
    std::string text = trimmed(result.text);
    if (text.empty()) {
        throw EmptyCompletionError("context generation returned an empty narrative");
    }
    return {std::move(text), sequence.size()};
}

}  // namespace kgqa
