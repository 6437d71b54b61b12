#include "kgqa/kg.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "kgqa/errors.hpp"

namespace kgqa {

EntityFrontier::EntityFrontier(std::vector<std::string> entities) {
    for (auto& e : entities) insert(e);
}

void EntityFrontier::insert(const std::string& entity) {
    if (index_.insert(entity).second) entities_.push_back(entity);
}

KnowledgeGraph KnowledgeGraph::from_triples(std::vector<Triple> triples) {
    std::sort(triples.begin(), triples.end());
    triples.erase(std::unique(triples.begin(), triples.end()), triples.end());

    KnowledgeGraph g;
    g.triples_ = std::move(triples);
    for (const auto& t : g.triples_) {
        g.entities_.insert(t.subject);
        g.entities_.insert(t.object);
        g.relations_.insert(t.relation);
        g.adjacency_[t.subject].emplace_back(t.relation, t.object);
    }
    // triples_ is sorted, so each adjacency list already came out sorted by
    // (relation, object); no per-entity re-sort needed.
    return g;
}

KnowledgeGraph KnowledgeGraph::load(std::istream& in, const std::string& source_name) {
    std::vector<Triple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            if (tab == std::string::npos) {
                fields.push_back(line.substr(start));
                break;
            }
            fields.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (fields.size() != 3) {
            throw ParseError(source_name + ": expected 3 TAB-separated fields, got " +
                                 std::to_string(fields.size()),
                             line_no);
        }
        for (const auto& f : fields) {
            if (f.empty()) {
                throw ParseError(source_name + ": empty identifier field", line_no);
            }
        }
        triples.push_back({std::move(fields[0]), std::move(fields[1]), std::move(fields[2])});
    }
    if (triples.empty()) {
        throw EmptyGraphError(source_name + ": no triples found");
    }
    return from_triples(std::move(triples));
}

KnowledgeGraph KnowledgeGraph::load_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open triple file: " + path);
    return load(in, path);
}

void KnowledgeGraph::save(std::ostream& out) const {
    for (const auto& t : triples_) {
        out << t.subject << '\t' << t.relation << '\t' << t.object << '\n';
    }
}

void KnowledgeGraph::save_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write triple file: " + path);
    save(out);
}

std::vector<std::string> KnowledgeGraph::outgoing_relations(const EntityFrontier& frontier) const {
    std::set<std::string> relations;
    for (const auto& entity : frontier) {
        auto it = adjacency_.find(entity);
        if (it == adjacency_.end()) continue;
        for (const auto& [relation, object] : it->second) relations.insert(relation);
    }
    return {relations.begin(), relations.end()};
}

EntityFrontier KnowledgeGraph::traverse(const EntityFrontier& frontier,
                                        const std::string& relation) const {
    EntityFrontier result;
    for (const auto& entity : frontier) {
        auto it = adjacency_.find(entity);
        if (it == adjacency_.end()) continue;
        const auto& edges = it->second;
        auto lo = std::lower_bound(edges.begin(), edges.end(),
                                   std::pair<std::string, std::string>{relation, std::string{}});
        for (auto e = lo; e != edges.end() && e->first == relation; ++e) {
            result.insert(e->second);
        }
    }
    return result;
}

KnowledgeGraph KnowledgeGraph::extract_subgraph(const std::vector<std::string>& topics,
                                                int hops) const {
    if (hops < 1) throw InputError("subgraph hops must be >= 1");

    std::vector<std::string> present;
    std::vector<std::string> missing;
    for (const auto& t : topics) {
        (has_entity(t) ? present : missing).push_back(t);
    }
    if (present.empty()) {
        std::ostringstream msg;
        msg << "no topic entity present in graph:";
        for (const auto& m : missing) msg << ' ' << m;
        throw InputError(msg.str());
    }

    // BFS over outgoing edges; a triple belongs to the subgraph iff its
    // subject is reachable within hops-1 steps.
    std::unordered_map<std::string, int> depth;
    std::deque<std::string> queue;
    for (const auto& t : present) {
        if (depth.emplace(t, 0).second) queue.push_back(t);
    }

    std::vector<Triple> collected;
    while (!queue.empty()) {
        std::string entity = std::move(queue.front());
        queue.pop_front();
        int d = depth[entity];
        if (d >= hops) continue;
        auto it = adjacency_.find(entity);
        if (it == adjacency_.end()) continue;
        for (const auto& [relation, object] : it->second) {
            collected.push_back({entity, relation, object});
            if (depth.emplace(object, d + 1).second) queue.push_back(object);
        }
    }
    return from_triples(std::move(collected));
}

}  // namespace kgqa
