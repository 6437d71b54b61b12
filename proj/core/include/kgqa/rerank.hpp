#pragma once

#include <string>
#include <utility>
#include <vector>

#include "kgqa/kg.hpp"
#include "kgqa/llm.hpp"
#include "kgqa/narrator.hpp"
#include "kgqa/trajectory.hpp"

namespace kgqa {

// The re-ranked candidate set for one step: relations with their relevance
// scores, ordered by descending score (ties lexicographic), each appearing
// at most once.
struct ScoredCandidates {
    std::vector<std::pair<std::string, double>> entries;
    Narrative narrative_used;
    int priors_version = 0;
    bool degraded = false;  // scoring fell back to all-zero after parse failures
};

// Stage 1: asks the model for up to k relations out of the neighborhood,
// conditioned on the narrative. The result is drawn strictly from the
// neighborhood. One parse failure triggers a single identical re-ask
// (charged, counted via gateway.count_reask()); a second failure degrades to
// an empty set, which the caller treats as non-expandable.
std::vector<std::string> retrieve_candidates(const std::string& question,
                                             const Narrative& narrative,
                                             const std::vector<std::string>& neighborhood, int k,
                                             Gateway& gateway);

// Stage 2: scores the retrieved candidates in one call, conditioned on the
// relation sequence so far and the exploration priors text. Every candidate
// receives a score (missing ones default to 0). Same single re-ask policy;
// a second parse failure scores everything 0 and flags the result degraded.
ScoredCandidates rank_candidates(const std::string& question, const RelationSequence& sequence,
                                 const std::vector<std::string>& candidates,
                                 const std::string& priors_text, Gateway& gateway);

// Branch expansion: for each candidate with score >= zeta (inclusive), in
// scored order, traverses the graph and emits a child trajectory when the
// traversal is non-empty. Throws ContractViolation on a non-Active parent.
std::vector<Trajectory> expand(const Trajectory& traj, const ScoredCandidates& scored,
                               const KnowledgeGraph& graph, double zeta);

}  // namespace kgqa
