#include "dense/model.hpp"

#include <cmath>
#include <string>

#include "dense/errors.hpp"

namespace dense {

namespace {

void check_entity(const ModelParams& p, EntityId e, const char* who) {
    if (e < 0 || e >= p.entity_count())
        throw NumericError(std::string(who) + ": entity id out of range: " + std::to_string(e));
}

void check_relation(const ModelParams& p, RelationId r, const char* who) {
    if (r < 0 || r >= p.relation_count())
        throw NumericError(std::string(who) + ": relation id out of range: " + std::to_string(r));
}

}  // namespace

ModelParams::ModelParams(std::int32_t entity_count, std::int32_t relation_count, std::int32_t k,
                         bool scaling)
    : entity_count_(entity_count),
      relation_count_(relation_count),
      k_(k),
      scaling_(scaling),
      entity_(static_cast<std::size_t>(entity_count) * k * 3, 0.0),
      relation_(static_cast<std::size_t>(relation_count) * k * 4, 0.0) {
    if (entity_count < 1 || relation_count < 1 || k < 1)
        throw ConfigError("ModelParams: entity, relation, and unit counts must be >= 1");
}

Quaternion ModelParams::relation_quat(RelationId r, std::int32_t i) const {
    const double* p = relation_unit_raw(r, i);
    Quaternion q{p[0], p[1], p[2], p[3]};
    if (!scaling_) {
        const double n = q.norm();
        if (n == 0.0) throw InvalidOperatorError("relation_quat: zero relation unit");
        return q * (1.0 / n);
    }
    return q;
}

void ModelParams::floor_relation_norm(RelationId r, std::int32_t i) {
    double* p = relation_unit_raw(r, i);
    const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3]);
    if (n >= kRelationNormFloor) return;
    if (n == 0.0) {
        p[0] = kRelationNormFloor;
    } else {
        const double s = kRelationNormFloor / n;
        for (int j = 0; j < 4; ++j) p[j] *= s;
    }
}

void ModelParams::floor_relation_norms() {
    for (std::int32_t r = 0; r < relation_count_; ++r)
        for (std::int32_t i = 0; i < k_; ++i) floor_relation_norm(r, i);
}

ModelParams init_params(std::int32_t entity_count, std::int32_t relation_count, std::int32_t k,
                        Rng& rng, bool scaling) {
    ModelParams params(entity_count, relation_count, k, scaling);
    const double bound = 1.0 / std::sqrt(2.0 * k);
    std::uniform_real_distribution<double> unif(-bound, bound);
    for (double& v : params.entity_table()) v = unif(rng);
    for (double& v : params.relation_table()) v = unif(rng);
    params.floor_relation_norms();
    return params;
}

double score(const ModelParams& params, EntityId h, RelationId r, EntityId t) {
    check_entity(params, h, "score");
    check_entity(params, t, "score");
    check_relation(params, r, "score");

    double forward_sq = 0.0;
    double backward_sq = 0.0;
    for (std::int32_t i = 0; i < params.k(); ++i) {
        const Quaternion q = params.relation_quat(r, i);
        const Vec3 hv = params.entity_vec(h, i);
        const Vec3 tv = params.entity_vec(t, i);
        const Vec3 fwd = apply_operator(q, hv) - tv;
        const Vec3 bwd = apply_inverse_operator(q, tv) - hv;
        forward_sq += fwd.dot(fwd);
        backward_sq += bwd.dot(bwd);
    }
    return -0.5 * (std::sqrt(forward_sq) + std::sqrt(backward_sq));
}

std::vector<double> score_against_all(const ModelParams& params, EntityId fixed, RelationId r,
                                      Side side) {
    check_entity(params, fixed, "score_against_all");
    check_relation(params, r, "score_against_all");

    const std::int32_t k = params.k();
    // Anchor each unit once: u = O(r)h for tail queries, v = O(r^-1)t for
    // head queries. Per unit the residual against u (resp. v) gives one
    // distance directly and the other after weighting by 1/s^2 (resp. s^2).
    std::vector<double> anchor(static_cast<std::size_t>(k) * 3);
    std::vector<double> weight(k);
    for (std::int32_t i = 0; i < k; ++i) {
        const Quaternion q = params.relation_quat(r, i);
        const Vec3 fv = params.entity_vec(fixed, i);
        const Vec3 a = side == Side::Tail ? apply_operator(q, fv) : apply_inverse_operator(q, fv);
        anchor[i * 3 + 0] = a.x;
        anchor[i * 3 + 1] = a.y;
        anchor[i * 3 + 2] = a.z;
        const double s = params.scaling() ? q.norm() : 1.0;
        weight[i] = side == Side::Tail ? 1.0 / (s * s) : s * s;
    }

    const std::int32_t n_entities = params.entity_count();
    std::vector<double> scores(n_entities);
    for (EntityId e = 0; e < n_entities; ++e) {
        const double* cand = params.entity_unit(e, 0);
        double plain_sq = 0.0;
        double weighted_sq = 0.0;
        for (std::int32_t i = 0; i < k; ++i) {
            const double dx = cand[i * 3 + 0] - anchor[i * 3 + 0];
            const double dy = cand[i * 3 + 1] - anchor[i * 3 + 1];
            const double dz = cand[i * 3 + 2] - anchor[i * 3 + 2];
            const double d2 = dx * dx + dy * dy + dz * dz;
            plain_sq += d2;
            weighted_sq += d2 * weight[i];
        }
        scores[e] = -0.5 * (std::sqrt(plain_sq) + std::sqrt(weighted_sq));
    }
    return scores;
}

}  // namespace dense
