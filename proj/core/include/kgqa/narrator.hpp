#pragma once

#include <string>

#include "kgqa/llm.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

// The canned narrative for a path that has not taken a step yet.
inline constexpr const char* kStartOfPathNarrative = "This is the start of the path.";

// A natural-language rendering of the relation sequence in the question's
// context, regenerated whenever the sequence length changes.
struct Narrative {
    std::string text;
    std::size_t for_step = 0;  // |R| at generation time
};

// Turns (question, relation sequence) into a contextual narrative. The empty
// sequence short-circuits to kStartOfPathNarrative with no LLM call; anything
// else costs exactly one ContextGeneration call. Throws EmptyCompletionError
// when the model returns only whitespace.
Narrative generate_context(const std::string& question, const RelationSequence& sequence,
                           Gateway& gateway);

}  // namespace kgqa
