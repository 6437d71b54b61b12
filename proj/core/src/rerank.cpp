#include "kgqa/rerank.hpp"

#include <algorithm>
#include <set>

#include "kgqa/parsing.hpp"

namespace kgqa {

std::vector<std::string> retrieve_candidates(const std::string& question,
                                             const Narrative& narrative,
                                             const std::vector<std::string>& neighborhood, int k,
                                             Gateway& gateway) {
    if (neighborhood.empty()) {
        throw ContractViolation("retrieve_candidates requires a non-empty neighborhood");
    }
    FieldMap fields = {{"question", question},
                       {"context_narrative", narrative.text},
                       {"candidate_relations", format_relation_set(neighborhood)},
                       {"k", std::to_string(k)}};
    std::set<std::string> allowed(neighborhood.begin(), neighborhood.end());

    CompletionResult result = gateway.run(PromptKind::CandidateRetrieval, fields);
    try {
        return parse_relation_list(result.text, allowed, k);
    } catch (const ParseError&) {
        gateway.count_reask();
    }
    result = gateway.run(PromptKind::CandidateRetrieval, fields);
    try {
        return parse_relation_list(result.text, allowed, k);
    } catch (const ParseError&) {
        return {};  // degraded: non-expandable
    }
}

ScoredCandidates rank_candidates(const std::string& question, const RelationSequence& sequence,
                                 const std::vector<std::string>& candidates,
                                 const std::string& priors_text, Gateway& gateway) {
    if (candidates.empty()) {
        throw ContractViolation("rank_candidates requires a non-empty candidate list");
    }
    FieldMap fields = {{"question", question},
                       {"historical_path", sequence.joined(" → ", "(empty)")},
                       {"top_k_relations", format_relation_set(candidates)},
                       {"exploration_experience", priors_text}};
    std::set<std::string> candidate_set(candidates.begin(), candidates.end());

    ScoredCandidates scored;
    std::map<std::string, double> scores;

    CompletionResult result = gateway.run(PromptKind::Reranking, fields);
    try {
        scores = parse_score_map(result.text, candidate_set);
    } catch (const ParseError&) {
        gateway.count_reask();
        result = gateway.run(PromptKind::Reranking, fields);
        try {
            scores = parse_score_map(result.text, candidate_set);
        } catch (const ParseError&) {
            for (const auto& name : candidate_set) scores[name] = 0.0;
            scored.degraded = true;
        }
    }

    scored.entries.assign(scores.begin(), scores.end());
    std::sort(scored.entries.begin(), scored.entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return scored;
}

std::vector<Trajectory> expand(const Trajectory& traj, const ScoredCandidates& scored,
                               const KnowledgeGraph& graph, double zeta) {
    if (traj.status != TrajectoryStatus::Active) {
        throw ContractViolation("expand called on a terminated trajectory");
    }
    std::vector<Trajectory> children;
    for (const auto& [relation, score] : scored.entries) {
        if (score < zeta) continue;
        EntityFrontier next = graph.traverse(traj.frontier, relation);
        if (next.empty()) continue;

        Trajectory child;
        child.question_id = traj.question_id;
        child.origin = traj.origin;
        child.sequence = append(traj.sequence, relation);
        child.frontier = std::move(next);
        child.step_scores = traj.step_scores;
        child.step_scores.push_back(score);
        children.push_back(std::move(child));
    }
    return children;
}

}  // namespace kgqa
