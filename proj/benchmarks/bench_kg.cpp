#include <benchmark/benchmark.h>

#include <random>
#include <sstream>

#include "kgqa/kg.hpp"

using namespace kgqa;

namespace {

// A layered synthetic graph: fan_out children per node, `depth` layers deep.
std::vector<Triple> synthetic_triples(int depth, int fan_out) {
    std::vector<Triple> triples;
    std::mt19937_64 rng(1234);
    std::vector<std::string> layer = {"root"};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::string> next;
        for (const auto& node : layer) {
            for (int c = 0; c < fan_out; ++c) {
                std::string child = node + "." + std::to_string(c);
                triples.push_back({node, "rel" + std::to_string(rng() % 16), child});
                next.push_back(child);
            }
        }
        layer = std::move(next);
    }
    return triples;
}

std::string to_tsv(const std::vector<Triple>& triples) {
    std::ostringstream out;
    for (const auto& t : triples) {
        out << t.subject << '\t' << t.relation << '\t' << t.object << '\n';
    }
    return out.str();
}

void BM_LoadGraph(benchmark::State& state) {
    std::string tsv = to_tsv(synthetic_triples(static_cast<int>(state.range(0)), 6));
    for (auto _ : state) {
        std::istringstream in(tsv);
        KnowledgeGraph g = KnowledgeGraph::load(in);
        benchmark::DoNotOptimize(g.triple_count());
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(tsv.size()));
}
BENCHMARK(BM_LoadGraph)->Arg(3)->Arg(5);

void BM_Traverse(benchmark::State& state) {
    KnowledgeGraph g = KnowledgeGraph::from_triples(synthetic_triples(5, 6));
    EntityFrontier frontier({"root"});
    auto relations = g.outgoing_relations(frontier);
    std::size_t i = 0;
    for (auto _ : state) {
        EntityFrontier out = g.traverse(frontier, relations[i++ % relations.size()]);
        benchmark::DoNotOptimize(out.size());
    }
}
BENCHMARK(BM_Traverse);

void BM_OutgoingRelations(benchmark::State& state) {
    KnowledgeGraph g = KnowledgeGraph::from_triples(synthetic_triples(4, 8));
    EntityFrontier frontier = g.traverse(g.traverse(EntityFrontier({"root"}), "rel0"), "rel1");
    if (frontier.empty()) frontier = EntityFrontier({"root"});
    for (auto _ : state) {
        auto relations = g.outgoing_relations(frontier);
        benchmark::DoNotOptimize(relations.size());
    }
}
BENCHMARK(BM_OutgoingRelations);

void BM_ExtractSubgraph(benchmark::State& state) {
    KnowledgeGraph g = KnowledgeGraph::from_triples(synthetic_triples(6, 4));
    for (auto _ : state) {
        KnowledgeGraph sub = g.extract_subgraph({"root"}, static_cast<int>(state.range(0)));
        benchmark::DoNotOptimize(sub.triple_count());
    }
}
BENCHMARK(BM_ExtractSubgraph)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
