#include "dense/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>

#include "dense/errors.hpp"
#include "dense/eval.hpp"
#include "dense/rot3.hpp"
#include "dense/util.hpp"

namespace dense {

void TrainingConfig::validate() const {
    if (k < 1) throw ConfigError("config: k must be >= 1");
    if (batch_size < 1) throw ConfigError("config: batch size must be >= 1");
    if (negatives < 1) throw ConfigError("config: negative sample count must be >= 1");
    if (gamma <= 0.0) throw ConfigError("config: margin gamma must be > 0");
    if (adv_temperature < 0.0) throw ConfigError("config: adversarial temperature must be >= 0");
    if (learning_rate <= 0.0) throw ConfigError("config: learning rate must be > 0");
    if (max_steps < 0) throw ConfigError("config: max steps must be >= 0");
    if (workers < 1) throw ConfigError("config: workers must be >= 1");
}

double* GradientTables::entity_row(EntityId e, std::int32_t k) {
    auto [it, inserted] = entity.try_emplace(e);
    if (inserted) it->second.assign(static_cast<std::size_t>(k) * 3, 0.0);
    return it->second.data();
}

double* GradientTables::relation_row(RelationId r, std::int32_t k) {
    auto [it, inserted] = relation.try_emplace(r);
    if (inserted) it->second.assign(static_cast<std::size_t>(k) * 4, 0.0);
    return it->second.data();
}

void GradientTables::add_scaled(const GradientTables& other, double factor) {
    for (const auto& [e, row] : other.entity) {
        auto [it, inserted] = entity.try_emplace(e);
        if (inserted) it->second.assign(row.size(), 0.0);
        for (std::size_t i = 0; i < row.size(); ++i) it->second[i] += factor * row[i];
    }
    for (const auto& [r, row] : other.relation) {
        auto [it, inserted] = relation.try_emplace(r);
        if (inserted) it->second.assign(row.size(), 0.0);
        for (std::size_t i = 0; i < row.size(); ++i) it->second[i] += factor * row[i];
    }
}

OptimizerState OptimizerState::make(const ModelParams& params, const TrainingConfig& cfg) {
    OptimizerState st;
    st.entity_m.assign(params.entity_table().size(), 0.0);
    st.entity_v.assign(params.entity_table().size(), 0.0);
    st.relation_m.assign(params.relation_table().size(), 0.0);
    st.relation_v.assign(params.relation_table().size(), 0.0);
    st.learning_rate = cfg.learning_rate;
    return st;
}

std::vector<double> adversarial_weights(const std::vector<double>& neg_scores, double alpha) {
    if (neg_scores.empty()) throw ConfigError("adversarial_weights: empty score vector");
    std::vector<double> w(neg_scores.size());
    double hi = -std::numeric_limits<double>::infinity();
    for (const double s : neg_scores) hi = std::max(hi, alpha * s);
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = std::exp(alpha * neg_scores[j] - hi);
        sum += w[j];
    }
    for (double& x : w) x /= sum;
    return w;
}

namespace {

Triple corrupted_triple(const Triple& positive, Side side, EntityId candidate) {
    return side == Side::Tail ? Triple{positive.head, positive.relation, candidate}
                              : Triple{candidate, positive.relation, positive.tail};
}

std::vector<double> negative_weights(const std::vector<double>& neg_scores,
                                     const TrainingConfig& cfg) {
    if (!cfg.ablation.adversarial)
        return std::vector<double>(neg_scores.size(), 1.0 / static_cast<double>(neg_scores.size()));
    return adversarial_weights(neg_scores, cfg.adv_temperature);
}

// --- anchored forward/backward -------------------------------------------
//
// A triple's score only touches the relation through the per-unit map
//   tail corruption:  u = s * R(q) h        (anchor on the head)
//   head corruption:  v = (1/s) * R(q^-1) t (anchor on the tail)
// with s = |Q| (or 1 under the scaling ablation). Both maps are evaluated
// through pure Hamilton products -- R(q)w = vec(Q W conj(Q)) / |Q|^2 -- so
// the backward pass is the chain of the product adjoints
//   C = A x B   =>   gA = gC x conj(B),  gB = conj(A) x gC
// plus the quotient rule for the |Q| powers.

struct AnchorChain {
    Quaternion Q;   // raw relation unit
    Quaternion P1;  // first Hamilton product
    Quaternion P2;  // second Hamilton product
    double n = 1.0;     // |Q|
    double s = 1.0;     // effective scale
    Vec3 out;           // u or v
};

AnchorChain anchor_forward(const Quaternion& Q, const Vec3& w, bool scaling, Side side) {
    AnchorChain ch;
    ch.Q = Q;
    ch.n = Q.norm();
    if (ch.n == 0.0) throw InvalidOperatorError("anchor_forward: zero relation unit");
    const Quaternion W{0.0, w.x, w.y, w.z};
    double denom;
    if (side == Side::Tail) {
        ch.P1 = hamilton(Q, W);
        ch.P2 = hamilton(ch.P1, Q.conjugate());
        denom = scaling ? ch.n : ch.n * ch.n;
    } else {
        ch.P1 = hamilton(Q.conjugate(), W);
        ch.P2 = hamilton(ch.P1, Q);
        denom = scaling ? ch.n * ch.n * ch.n : ch.n * ch.n;
    }
    ch.s = scaling ? ch.n : 1.0;
    const double inv = 1.0 / denom;
    ch.out = {ch.P2.b * inv, ch.P2.c * inv, ch.P2.d * inv};
    return ch;
}

void anchor_backward(const AnchorChain& ch, const Vec3& w, bool scaling, Side side,
                     const Vec3& g_out, double g_s, Quaternion& gQ, Vec3& gw) {
    const Quaternion W{0.0, w.x, w.y, w.z};
    const double n = ch.n;
    const double dot_go = g_out.dot(ch.out);

    double denom, gn;
    if (side == Side::Tail) {
        denom = scaling ? n : n * n;
        gn = scaling ? -dot_go / n : -2.0 * dot_go / n;
    } else {
        denom = scaling ? n * n * n : n * n;
        gn = scaling ? -3.0 * dot_go / n : -2.0 * dot_go / n;
    }
    if (scaling) gn += g_s;

    const double inv = 1.0 / denom;
    const Quaternion gP2{0.0, g_out.x * inv, g_out.y * inv, g_out.z * inv};
    if (side == Side::Tail) {
        // P2 = P1 x conj(Q); P1 = Q x W
        const Quaternion gP1 = hamilton(gP2, ch.Q);
        gQ = hamilton(ch.P1.conjugate(), gP2).conjugate();
        const Quaternion gq1 = hamilton(gP1, W.conjugate());
        gQ = gQ + gq1;
        const Quaternion gW = hamilton(ch.Q.conjugate(), gP1);
        gw = {gW.b, gW.c, gW.d};
    } else {
        // P2 = P1 x Q; P1 = conj(Q) x W
        const Quaternion gP1 = hamilton(gP2, ch.Q.conjugate());
        gQ = hamilton(ch.P1.conjugate(), gP2);
        const Quaternion gq1 = hamilton(gP1, W.conjugate()).conjugate();
        gQ = gQ + gq1;
        const Quaternion gW = hamilton(ch.Q, gP1);
        gw = {gW.b, gW.c, gW.d};
    }
    gQ = gQ + ch.Q * (gn / n);
}

// Squared residual sums against the anchor, plain and scale-weighted.
struct ResidualNorms {
    double plain_sq = 0.0;
    double weighted_sq = 0.0;
};

double score_from_residuals(const ResidualNorms& rn) {
    return -0.5 * (std::sqrt(rn.plain_sq) + std::sqrt(rn.weighted_sq));
}

// Scratch for one positive's backward pass, reused across calls on the
// same thread. residuals caches candidate - anchor per unit so the
// gradient pass reads L2 instead of re-fetching entity rows.
struct BackwardScratch {
    std::vector<AnchorChain> chain;
    std::vector<double> residuals;  // (n_neg + 1) * k * 3, gold first
    std::vector<ResidualNorms> norms;
    std::vector<double> scores;
    std::vector<double> g_cand;
    std::vector<Vec3> g_anchor;
    std::vector<double> g_scale;
};

// Loss and gradients for one positive + its negatives, accumulated into
// `sink` with the given factor. Returns the loss value.
double backward_into(const ModelParams& params, const Triple& positive,
                     const NegativeBatch& negatives, const TrainingConfig& cfg,
                     GradientTables& sink, double factor, BackwardScratch& scratch) {
    const std::int32_t k = params.k();
    const Side side = negatives.side;
    const bool scaling = params.scaling();
    const EntityId anchor_entity = side == Side::Tail ? positive.head : positive.tail;
    const EntityId gold = side == Side::Tail ? positive.tail : positive.head;
    const RelationId rel = positive.relation;

    scratch.chain.resize(k);
    std::vector<AnchorChain>& chain = scratch.chain;
    for (std::int32_t i = 0; i < k; ++i) {
        const double* q = params.relation_unit_raw(rel, i);
        chain[i] =
            anchor_forward({q[0], q[1], q[2], q[3]}, params.entity_vec(anchor_entity, i), scaling, side);
    }

    const std::size_t n_neg = negatives.corrupted_entities.size();
    const std::size_t n_cand = n_neg + 1;
    const std::size_t row = static_cast<std::size_t>(k) * 3;
    scratch.residuals.resize(n_cand * row);
    scratch.norms.assign(n_cand, ResidualNorms{});
    scratch.scores.resize(n_cand);

    auto candidate_id = [&](std::size_t c) {
        return c == 0 ? gold : negatives.corrupted_entities[c - 1];
    };
    for (std::size_t c = 0; c < n_cand; ++c) {
        const double* cand = params.entity_unit(candidate_id(c), 0);
        double* res = scratch.residuals.data() + c * row;
        ResidualNorms& rn = scratch.norms[c];
        for (std::int32_t i = 0; i < k; ++i) {
            const double dx = cand[i * 3 + 0] - chain[i].out.x;
            const double dy = cand[i * 3 + 1] - chain[i].out.y;
            const double dz = cand[i * 3 + 2] - chain[i].out.z;
            res[i * 3 + 0] = dx;
            res[i * 3 + 1] = dy;
            res[i * 3 + 2] = dz;
            const double d2 = dx * dx + dy * dy + dz * dz;
            const double s = chain[i].s;
            rn.plain_sq += d2;
            rn.weighted_sq += side == Side::Tail ? d2 / (s * s) : d2 * (s * s);
        }
        scratch.scores[c] = score_from_residuals(rn);
    }
    const double f_pos = scratch.scores[0];
    const std::vector<double> neg_scores(scratch.scores.begin() + 1, scratch.scores.end());

    const std::vector<double> weights = negative_weights(neg_scores, cfg);
    double loss_value = softplus(-(cfg.gamma + f_pos));
    for (std::size_t j = 0; j < n_neg; ++j)
        loss_value += weights[j] * softplus(cfg.gamma + neg_scores[j]);

    // d loss / d f per candidate; the adversarial weights stay constant.
    scratch.g_cand.resize(n_cand);
    scratch.g_cand[0] = -sigmoid(-(cfg.gamma + f_pos));
    for (std::size_t j = 0; j < n_neg; ++j)
        scratch.g_cand[j + 1] = weights[j] * sigmoid(cfg.gamma + neg_scores[j]);

    scratch.g_anchor.assign(k, Vec3{});
    scratch.g_scale.assign(k, 0.0);
    std::vector<Vec3>& g_anchor = scratch.g_anchor;
    std::vector<double>& g_scale = scratch.g_scale;

    for (std::size_t c = 0; c < n_cand; ++c) {
        const ResidualNorms& rn = scratch.norms[c];
        const double g_f = scratch.g_cand[c];
        const double d1 = std::max(std::sqrt(side == Side::Tail ? rn.plain_sq : rn.weighted_sq),
                                   kDistanceEpsilon);
        const double d2 = std::max(std::sqrt(side == Side::Tail ? rn.weighted_sq : rn.plain_sq),
                                   kDistanceEpsilon);
        double* cand_grad = sink.entity_row(candidate_id(c), k);
        const double* res = scratch.residuals.data() + c * row;
        for (std::int32_t i = 0; i < k; ++i) {
            const double s = chain[i].s;
            const Vec3 d{res[i * 3 + 0], res[i * 3 + 1], res[i * 3 + 2]};
            double coeff;  // d f / d (residual vector), as a scalar multiplier on d
            if (side == Side::Tail) {
                coeff = -0.5 * (1.0 / d1 + 1.0 / (s * s * d2));
                if (scaling)
                    g_scale[i] += g_f * d.dot(d) / (2.0 * s * s * s * d2);
            } else {
                coeff = -0.5 * (s * s / d1 + 1.0 / d2);
                if (scaling)
                    g_scale[i] -= g_f * s * d.dot(d) / (2.0 * d1);
            }
            const Vec3 gc = d * (g_f * coeff);
            cand_grad[i * 3 + 0] += factor * gc.x;
            cand_grad[i * 3 + 1] += factor * gc.y;
            cand_grad[i * 3 + 2] += factor * gc.z;
            g_anchor[i] = g_anchor[i] - gc;
        }
    }

    double* rel_grad = sink.relation_row(rel, k);
    double* anchor_grad = sink.entity_row(anchor_entity, k);
    for (std::int32_t i = 0; i < k; ++i) {
        Quaternion gQ;
        Vec3 gw;
        anchor_backward(chain[i], params.entity_vec(anchor_entity, i), scaling, side, g_anchor[i],
                        g_scale[i], gQ, gw);
        rel_grad[i * 4 + 0] += factor * gQ.a;
        rel_grad[i * 4 + 1] += factor * gQ.b;
        rel_grad[i * 4 + 2] += factor * gQ.c;
        rel_grad[i * 4 + 3] += factor * gQ.d;
        anchor_grad[i * 3 + 0] += factor * gw.x;
        anchor_grad[i * 3 + 1] += factor * gw.y;
        anchor_grad[i * 3 + 2] += factor * gw.z;
    }
    return loss_value;
}

}  // namespace

double loss_with_weights(const ModelParams& params, const Triple& positive,
                         const NegativeBatch& negatives, const std::vector<double>& weights,
                         const TrainingConfig& cfg) {
    if (weights.size() != negatives.corrupted_entities.size())
        throw ConfigError("loss_with_weights: weight count does not match negatives");
    double value = softplus(-(cfg.gamma + score(params, positive.head, positive.relation,
                                                positive.tail)));
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const Triple neg = corrupted_triple(positive, negatives.side,
                                            negatives.corrupted_entities[j]);
        value += weights[j] * softplus(cfg.gamma + score(params, neg.head, neg.relation, neg.tail));
    }
    return value;
}

double loss(const ModelParams& params, const Triple& positive, const NegativeBatch& negatives,
            const TrainingConfig& cfg) {
    std::vector<double> neg_scores(negatives.corrupted_entities.size());
    for (std::size_t j = 0; j < neg_scores.size(); ++j) {
        const Triple neg = corrupted_triple(positive, negatives.side,
                                            negatives.corrupted_entities[j]);
        neg_scores[j] = score(params, neg.head, neg.relation, neg.tail);
    }
    return loss_with_weights(params, positive, negatives, negative_weights(neg_scores, cfg), cfg);
}

BackwardResult backward(const ModelParams& params, const Triple& positive,
                        const NegativeBatch& negatives, const TrainingConfig& cfg) {
    BackwardResult result;
    BackwardScratch scratch;
    result.loss = backward_into(params, positive, negatives, cfg, result.grads, 1.0, scratch);
    return result;
}

void adam_step(ModelParams& params, const GradientTables& grads, OptimizerState& state,
               const TrainingConfig& cfg) {
    state.step += 1;
    const double bias1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bias2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    const double lr = state.learning_rate;

    // Rows are disjoint parameter blocks, so they can be updated from any
    // number of workers; results are bit-identical to the sequential order.
    struct RowTask {
        bool is_entity;
        std::int64_t id;
        const double* grad;
    };
    std::vector<RowTask> tasks;
    tasks.reserve(grads.entity.size() + grads.relation.size());
    for (const auto& [e, row] : grads.entity) tasks.push_back({true, e, row.data()});
    for (const auto& [r, row] : grads.relation) tasks.push_back({false, r, row.data()});

    const std::size_t ek = static_cast<std::size_t>(params.k()) * 3;
    const std::size_t rk = static_cast<std::size_t>(params.k()) * 4;
    std::atomic<std::int64_t> bad_id{-1};
    std::atomic<bool> bad_is_entity{false};

    parallel_for(tasks.size(), cfg.workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t) {
            const RowTask& task = tasks[t];
            const std::size_t len = task.is_entity ? ek : rk;
            const std::size_t base = static_cast<std::size_t>(task.id) * len;
            double* param = (task.is_entity ? params.entity_table() : params.relation_table()).data() + base;
            double* m = (task.is_entity ? state.entity_m : state.relation_m).data() + base;
            double* v = (task.is_entity ? state.entity_v : state.relation_v).data() + base;
            const double* g = task.grad;
            for (std::size_t i = 0; i < len; ++i) {
                if (!std::isfinite(g[i])) {
                    bad_id.store(task.id);
                    bad_is_entity.store(task.is_entity);
                    return;
                }
                m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
                v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
                const double m_hat = m[i] / bias1;
                const double v_hat = v[i] / bias2;
                param[i] -= lr * m_hat / (std::sqrt(v_hat) + cfg.adam_epsilon);
            }
            if (!task.is_entity) {
                for (std::int32_t i = 0; i < params.k(); ++i)
                    params.floor_relation_norm(static_cast<RelationId>(task.id), i);
            }
        }
    });

    if (bad_id.load() >= 0)
        throw NumericError(std::string("adam_step: non-finite gradient on ") +
                           (bad_is_entity.load() ? "entity " : "relation ") +
                           std::to_string(bad_id.load()));
}

double lr_schedule(OptimizerState& state, double epoch_loss, const TrainingConfig& cfg) {
    if (epoch_loss < state.best_epoch_loss) {
        state.best_epoch_loss = epoch_loss;
        state.epochs_since_improvement = 0;
    } else {
        state.epochs_since_improvement += 1;
        if (state.epochs_since_improvement >= cfg.lr_patience_epochs) {
            state.learning_rate *= 0.5;
            state.epochs_since_improvement = 0;
        }
    }
    return state.learning_rate;
}

TrainResult train(const Dataset& ds, const TrainingConfig& cfg) {
    cfg.validate();
    if (ds.train.empty()) throw DataError("train: empty training split");

    Rng master(cfg.seed);
    ModelParams params = init_params(ds.entity_count(), ds.relation_count(), cfg.k, master,
                                     cfg.ablation.scaling);

    TrainResult result;
    result.best_params = params;
    result.final_params = params;
    if (cfg.max_steps == 0) return result;

    OptimizerState state = OptimizerState::make(params, cfg);
    const std::int64_t steps_per_epoch =
        cfg.steps_per_epoch > 0
            ? cfg.steps_per_epoch
            : static_cast<std::int64_t>((ds.train.size() + cfg.batch_size - 1) / cfg.batch_size);

    std::vector<std::size_t> order(ds.train.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), master);
    std::size_t cursor = 0;

    double epoch_loss_accum = 0.0;
    std::int64_t steps_in_epoch = 0;
    std::int64_t epoch_index = 0;
    double best_mrr = -std::numeric_limits<double>::infinity();
    int strikes = 0;
    bool stop = false;

    std::vector<Triple> batch(cfg.batch_size);
    for (std::int64_t step = 1; step <= cfg.max_steps && !stop; ++step) {
        const Side side = step % 2 == 1 ? Side::Tail : Side::Head;
        for (std::int32_t b = 0; b < cfg.batch_size; ++b) {
            if (cursor == order.size()) {
                std::shuffle(order.begin(), order.end(), master);
                cursor = 0;
            }
            batch[b] = ds.train[order[cursor++]];
        }

        const double inv_b = 1.0 / static_cast<double>(cfg.batch_size);
        std::vector<GradientTables> sinks(std::max(1, cfg.workers));
        std::vector<double> losses(sinks.size(), 0.0);
        parallel_for_chunks(batch.size(), cfg.workers,
                            [&](std::size_t chunk_idx, std::size_t begin, std::size_t end) {
                                BackwardScratch scratch;
                                for (std::size_t slot = begin; slot < end; ++slot) {
                                    Rng rng(mix_seed(
                                        mix_seed(cfg.seed ^ mix_seed(static_cast<std::uint64_t>(step))) ^
                                        slot));
                                    const NegativeBatch negs =
                                        sample_negatives(batch[slot], cfg.negatives,
                                                         ds.entity_count(), side, rng);
                                    losses[chunk_idx] += inv_b * backward_into(
                                        params, batch[slot], negs, cfg, sinks[chunk_idx], inv_b,
                                        scratch);
                                }
                            });

        GradientTables& merged = sinks[0];
        double batch_loss = losses[0];
        for (std::size_t c = 1; c < sinks.size(); ++c) {
            merged.add_scaled(sinks[c], 1.0);
            batch_loss += losses[c];
        }
        adam_step(params, merged, state, cfg);
        result.steps_run = step;

        epoch_loss_accum += batch_loss;
        steps_in_epoch += 1;
        if (steps_in_epoch == steps_per_epoch || step == cfg.max_steps) {
            const double epoch_loss = epoch_loss_accum / static_cast<double>(steps_in_epoch);
            lr_schedule(state, epoch_loss, cfg);
            epoch_index += 1;
            TrainLogRecord record{step, epoch_loss, state.learning_rate, std::nullopt};
            if (cfg.eval_every_epochs > 0 && epoch_index % cfg.eval_every_epochs == 0 &&
                !ds.valid.empty()) {
                const RankingMetrics m = evaluate(params, ds.valid, ds, cfg.workers);
                record.valid_mrr = m.mrr;
                if (m.mrr > best_mrr) {
                    best_mrr = m.mrr;
                    result.best_params = params;
                    strikes = 0;
                } else if (++strikes >= cfg.early_stop_patience) {
                    stop = true;
                }
            }
            result.log.push_back(record);
            epoch_loss_accum = 0.0;
            steps_in_epoch = 0;
        }
    }

    result.final_params = params;
    if (std::isinf(best_mrr)) {
        result.best_params = result.final_params;
    } else {
        result.best_valid_mrr = best_mrr;
    }
    return result;
}

}  // namespace dense
