#include "dense/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>

#include "dense/errors.hpp"
#include "dense/util.hpp"

namespace dense {

double rank_query(const ModelParams& params, const Triple& query, Side side, const Dataset& ds,
                  bool filtered) {
    const EntityId fixed = side == Side::Tail ? query.head : query.tail;
    const EntityId gold = side == Side::Tail ? query.tail : query.head;
    const std::vector<double> scores = score_against_all(params, fixed, query.relation, side);
    const std::vector<char> mask = filtered ? filtered_candidates(query, side, ds)
                                            : std::vector<char>(params.entity_count(), 0);

    const double gold_score = scores[gold];
    std::size_t better = 0;
    std::size_t ties = 0;
    for (EntityId e = 0; e < params.entity_count(); ++e) {
        if (mask[e] || e == gold) continue;
        if (scores[e] > gold_score)
            ++better;
        else if (scores[e] == gold_score)
            ++ties;
    }
    return 1.0 + static_cast<double>(better) + static_cast<double>(ties) / 2.0;
}

RankingMetrics metrics_from_ranks(const std::vector<double>& ranks) {
    if (ranks.empty()) throw NumericError("metrics_from_ranks: no ranks");
    RankingMetrics m;
    m.count = ranks.size();
    double mr = 0.0, mrr = 0.0, h1 = 0.0, h3 = 0.0, h10 = 0.0;
    for (const double r : ranks) {
        mr += r;
        mrr += 1.0 / r;
        h1 += r <= 1.0 ? 1.0 : 0.0;
        h3 += r <= 3.0 ? 1.0 : 0.0;
        h10 += r <= 10.0 ? 1.0 : 0.0;
    }
    const double n = static_cast<double>(ranks.size());
    m.mr = mr / n;
    m.mrr = mrr / n;
    m.hits1 = h1 / n;
    m.hits3 = h3 / n;
    m.hits10 = h10 / n;
    return m;
}

double hits_at(const std::vector<double>& ranks, int cutoff) {
    if (cutoff < 1) throw ConfigError("hits_at: cutoff must be >= 1");
    if (ranks.empty()) throw NumericError("hits_at: no ranks");
    std::size_t hit = 0;
    for (const double r : ranks)
        if (r <= static_cast<double>(cutoff)) ++hit;
    return static_cast<double>(hit) / static_cast<double>(ranks.size());
}

RankingMetrics evaluate(const ModelParams& params, const std::vector<Triple>& split,
                        const Dataset& ds, int workers,
                        std::vector<PerRelationRow>* per_relation, bool filtered) {
    if (split.empty()) throw DataError("evaluate: empty split");

    // Two queries per triple, tail first then head.
    std::vector<double> ranks(2 * split.size(), 0.0);
    parallel_for(split.size(), workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const Triple& t = split[i];
            ranks[2 * i] = rank_query(params, t, Side::Tail, ds, filtered);
            if (ds.reciprocal_augmented()) {
                const Triple rewritten{t.tail, ds.inverse_relation(t.relation), t.head};
                ranks[2 * i + 1] = rank_query(params, rewritten, Side::Tail, ds, filtered);
            } else {
                ranks[2 * i + 1] = rank_query(params, t, Side::Head, ds, filtered);
            }
        }
    });

    if (per_relation) {
        const auto base = ds.base_relation_count();
        std::vector<double> mrr_sum(base, 0.0);
        std::vector<std::size_t> counts(base, 0);
        for (std::size_t i = 0; i < split.size(); ++i) {
            const RelationId r = split[i].relation % base;
            mrr_sum[r] += 1.0 / ranks[2 * i] + 1.0 / ranks[2 * i + 1];
            counts[r] += 2;
        }
        per_relation->clear();
        for (RelationId r = 0; r < base; ++r) {
            if (counts[r] == 0) continue;
            PerRelationRow row;
            row.relation = r;
            row.name = ds.relations.name(r);
            row.split_fraction = static_cast<double>(counts[r]) / static_cast<double>(ranks.size());
            row.mrr = mrr_sum[r] / static_cast<double>(counts[r]);
            row.count = counts[r];
            per_relation->push_back(row);
        }
    }
    return metrics_from_ranks(ranks);
}

std::string metrics_to_json(const RankingMetrics& m) {
    std::ostringstream out;
    out.precision(10);
    out << "{\"mr\": " << m.mr << ", \"mrr\": " << m.mrr << ", \"hits1\": " << m.hits1
        << ", \"hits3\": " << m.hits3 << ", \"hits10\": " << m.hits10 << ", \"count\": " << m.count
        << "}";
    return out.str();
}

}  // namespace dense
