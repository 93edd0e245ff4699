#include "dense/dataio.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "dense/errors.hpp"

namespace dense {

std::int32_t Vocab::add(const std::string& name) {
    auto it = ids_.find(name);
    if (it != ids_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    ids_.emplace(name, id);
    names_.push_back(name);
    return id;
}

std::int32_t Vocab::lookup(const std::string& name) const {
    auto it = ids_.find(name);
    return it == ids_.end() ? -1 : it->second;
}

RelationId Dataset::inverse_relation(RelationId r) const {
    if (!augmented_) throw ConfigError("inverse_relation: dataset is not reciprocal-augmented");
    const auto base = base_relation_count();
    return r < base ? r + base : r - base;
}

const std::vector<EntityId>* Dataset::true_tails(EntityId head, RelationId r) const {
    auto it = tails_by_head_rel_.find(key(head, r));
    return it == tails_by_head_rel_.end() ? nullptr : &it->second;
}

const std::vector<EntityId>* Dataset::true_heads(EntityId tail, RelationId r) const {
    auto it = heads_by_tail_rel_.find(key(tail, r));
    return it == heads_by_tail_rel_.end() ? nullptr : &it->second;
}

void Dataset::rebuild_true_index() {
    tails_by_head_rel_.clear();
    heads_by_tail_rel_.clear();
    const auto base = base_relation_count();
    auto insert = [&](const Triple& t) {
        tails_by_head_rel_[key(t.head, t.relation)].push_back(t.tail);
        heads_by_tail_rel_[key(t.tail, t.relation)].push_back(t.head);
        if (augmented_) {
            // The reversed fact is equally true under the inverse twin, for
            // every split, so head queries rewritten through the twin see
            // exactly the filter a direct head query would.
            const RelationId inv = t.relation < base ? t.relation + base : t.relation - base;
            tails_by_head_rel_[key(t.tail, inv)].push_back(t.head);
            heads_by_tail_rel_[key(t.head, inv)].push_back(t.tail);
        }
    };
    for (const auto& t : train) insert(t);
    for (const auto& t : valid) insert(t);
    for (const auto& t : test) insert(t);
    auto dedupe = [](std::unordered_map<std::uint64_t, std::vector<EntityId>>& index) {
        for (auto& [_, v] : index) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }
    };
    dedupe(tails_by_head_rel_);
    dedupe(heads_by_tail_rel_);
}

std::vector<Triple> load_triples(const std::string& path, Vocab& entities, Vocab& relations,
                                 bool extend) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open triple file: " + path);

    std::vector<Triple> triples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto tab1 = line.find('\t');
        const auto tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        const auto tab3 = tab2 == std::string::npos ? std::string::npos : line.find('\t', tab2 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos || tab3 != std::string::npos)
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected exactly 3 tab-separated fields");

        const std::string h = line.substr(0, tab1);
        const std::string r = line.substr(tab1 + 1, tab2 - tab1 - 1);
        const std::string t = line.substr(tab2 + 1);

        Triple triple;
        if (extend) {
            triple.head = entities.add(h);
            triple.relation = relations.add(r);
            triple.tail = entities.add(t);
        } else {
            triple.head = entities.lookup(h);
            triple.relation = relations.lookup(r);
            triple.tail = entities.lookup(t);
            if (triple.head < 0 || triple.relation < 0 || triple.tail < 0)
                throw DataError(path + ":" + std::to_string(line_no) +
                                ": name not in vocabulary");
        }
        triples.push_back(triple);
    }
    return triples;
}

Dataset build_dataset(const std::string& train_path, const std::string& valid_path,
                      const std::string& test_path) {
    Dataset ds;
    ds.train = load_triples(train_path, ds.entities, ds.relations, true);
    ds.valid = load_triples(valid_path, ds.entities, ds.relations, true);
    ds.test = load_triples(test_path, ds.entities, ds.relations, true);
    ds.rebuild_true_index();
    return ds;
}

void augment_reciprocal(Dataset& ds) {
    if (ds.reciprocal_augmented())
        throw DataError("augment_reciprocal: dataset is already augmented");

    const auto base = ds.relation_count();
    for (std::int32_t r = 0; r < base; ++r) {
        const std::string inv_name = ds.relations.name(r) + "_inv";
        if (ds.relations.lookup(inv_name) >= 0)
            throw DataError("augment_reciprocal: relation name collision on " + inv_name);
        ds.relations.add(inv_name);
    }

    const auto n_train = ds.train.size();
    ds.train.reserve(2 * n_train);
    for (std::size_t i = 0; i < n_train; ++i) {
        const Triple& t = ds.train[i];
        ds.train.push_back({t.tail, t.relation + base, t.head});
    }
    ds.mark_augmented();
    ds.rebuild_true_index();
}

NegativeBatch sample_negatives(const Triple& triple, int n, std::int32_t entity_count, Side side,
                               Rng& rng) {
    if (n < 1) throw ConfigError("sample_negatives: negative sample count must be >= 1");
    if (entity_count < 2) throw ConfigError("sample_negatives: need at least 2 entities");

    NegativeBatch batch;
    batch.positive = triple;
    batch.side = side;
    batch.corrupted_entities.resize(n);
    std::uniform_int_distribution<std::int32_t> pick(0, entity_count - 1);
    for (int i = 0; i < n; ++i) batch.corrupted_entities[i] = pick(rng);
    return batch;
}

std::string dataset_stats_json(const Dataset& ds) {
    std::ostringstream out;
    out << "{\"entities\": " << ds.entity_count() << ", \"relations\": " << ds.relation_count()
        << ", \"base_relations\": " << ds.base_relation_count()
        << ", \"train\": " << ds.train.size() << ", \"valid\": " << ds.valid.size()
        << ", \"test\": " << ds.test.size() << ", \"reciprocal_augmented\": "
        << (ds.reciprocal_augmented() ? "true" : "false") << "}";
    return out.str();
}

std::vector<char> filtered_candidates(const Triple& query, Side side, const Dataset& ds) {
    std::vector<char> mask(ds.entity_count(), 0);
    const std::vector<EntityId>* known =
        side == Side::Tail ? ds.true_tails(query.head, query.relation)
                           : ds.true_heads(query.tail, query.relation);
    if (known) {
        for (const EntityId e : *known) mask[e] = 1;
    }
    const EntityId gold = side == Side::Tail ? query.tail : query.head;
    mask[gold] = 0;
    return mask;
}

}  // namespace dense
