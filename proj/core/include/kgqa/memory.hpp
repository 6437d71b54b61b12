#pragma once

#include <string>
#include <vector>

#include "kgqa/llm.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

// In the pattern-extraction prompt, only this many of the most recent
// summaries are rendered, to bound prompt size.
inline constexpr std::size_t kMaxSummariesInPrompt = 10;

// Returned by current_priors() while no consolidation has happened yet;
// never stored in the priors themselves.
inline constexpr const char* kNoPriorsSentinel = "No prior exploration experience yet.";

// One terminated trajectory's natural-language post-mortem.
struct TrajectorySummary {
    std::string text;
    RelationSequence source_sequence;
    std::string termination_reason;  // "Max depth reached" | "No expandable relations"
};

// The consolidated experiential text plus the summaries it was distilled
// from. Value-semantic: consolidation returns a new instance, so a failed
// update leaves the previous priors untouched.
class ExplorationPriors {
public:
    ExplorationPriors() = default;
    ExplorationPriors(std::string text, std::vector<TrajectorySummary> summaries, int version)
        : text_(std::move(text)), summaries_(std::move(summaries)), version_(version) {}

    const std::string& text() const { return text_; }
    const std::vector<TrajectorySummary>& summaries() const { return summaries_; }
    int version() const { return version_; }
    bool empty() const { return summaries_.empty(); }

    // Persistence schema: {"version", "text", "summaries":
    // [{"text", "relations", "reason"}]}.
    std::string to_json_text() const;
    static ExplorationPriors from_json_text(const std::string& json_text);
    void save_file(const std::string& path) const;
    static ExplorationPriors load_file(const std::string& path);

private:
    std::string text_;
    std::vector<TrajectorySummary> summaries_;
    int version_ = 0;
};

// Summarizes one terminated trajectory (one TrajectorySummary call).
// Throws ContractViolation — before any call is charged — when the
// trajectory is still Active.
TrajectorySummary summarize_trajectory(const std::string& question, const Trajectory& traj,
                                       Gateway& gateway);

// Folds a new summary into the priors with one PatternExtraction call over
// the most recent summaries (newest last, bulleted). Returns the updated
// priors; on gateway failure the exception propagates and the input priors
// are unchanged.
ExplorationPriors consolidate(const ExplorationPriors& priors, TrajectorySummary new_summary,
                              Gateway& gateway);

// The priors text, or the sentinel when nothing has been consolidated yet.
std::string current_priors(const ExplorationPriors& priors);

}  // namespace kgqa
