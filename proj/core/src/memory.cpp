#include "kgqa/memory.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace kgqa {

using nlohmann::json;

std::string ExplorationPriors::to_json_text() const {
    json summaries = json::array();
    for (const auto& s : summaries_) {
        summaries.push_back({
            {"text", s.text},
            {"relations", s.source_sequence.relations},
            {"reason", s.termination_reason},
        });
    }
    json doc = {{"version", version_}, {"text", text_}, {"summaries", summaries}};
    return doc.dump(2) + "\n";
}

ExplorationPriors ExplorationPriors::from_json_text(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("priors file is not valid JSON: ") + e.what());
    }
    try {
        std::vector<TrajectorySummary> summaries;
        for (const auto& item : doc.at("summaries")) {
            TrajectorySummary s;
            s.text = item.at("text").get<std::string>();
            s.source_sequence.relations = item.at("relations").get<std::vector<std::string>>();
            s.termination_reason = item.at("reason").get<std::string>();
            summaries.push_back(std::move(s));
        }
        return ExplorationPriors(doc.at("text").get<std::string>(), std::move(summaries),
                                 doc.at("version").get<int>());
    } catch (const json::exception& e) {
        throw SchemaError(std::string("priors file schema: ") + e.what());
    }
}

void ExplorationPriors::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write priors file: " + path);
    out << to_json_text();
}

ExplorationPriors ExplorationPriors::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open priors file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

TrajectorySummary summarize_trajectory(const std::string& question, const Trajectory& traj,
                                       Gateway& gateway) {
    if (traj.status == TrajectoryStatus::Active) {
        throw ContractViolation("summarize_trajectory called on an Active trajectory");
    }
    std::string reason = termination_reason(traj.status);
    CompletionResult result =
        gateway.run(PromptKind::TrajectorySummary,
                    {{"question", question},
                     {"explored_path", traj.sequence.joined(" → ")},
                     {"reason_for_termination", reason}});
    if (result.text.empty()) {
        throw EmptyCompletionError("trajectory summary came back empty");
    }
    return {result.text, traj.sequence, std::move(reason)};
}

ExplorationPriors consolidate(const ExplorationPriors& priors, TrajectorySummary new_summary,
                              Gateway& gateway) {
    std::vector<TrajectorySummary> summaries = priors.summaries();
    summaries.push_back(std::move(new_summary));

    // Render at most the last kMaxSummariesInPrompt summaries, newest last.
    std::size_t begin =
        summaries.size() > kMaxSummariesInPrompt ? summaries.size() - kMaxSummariesInPrompt : 0;
    std::ostringstream bullets;
    for (std::size_t i = begin; i < summaries.size(); ++i) {
        bullets << "- " << summaries[i].text << "\n";
    }

    CompletionResult result = gateway.run(PromptKind::PatternExtraction,
                                          {{"trajectory_summaries", bullets.str()}});
    if (result.text.empty()) {
        throw EmptyCompletionError("pattern extraction came back empty");
    }
    return ExplorationPriors(result.text, std::move(summaries), priors.version() + 1);
}

std::string current_priors(const ExplorationPriors& priors) {
    return priors.text().empty() ? kNoPriorsSentinel : priors.text();
}

}  // namespace kgqa
