// Acceptance suite: one line per criterion, PASS / FAIL / SKIP, nonzero
// exit when anything fails. Benchmark-dependent criteria skip with a notice
// when DENSE_DATA_DIR does not point at the triple files.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dense/analysis.hpp"
#include "dense/dataio.hpp"
#include "dense/eval.hpp"
#include "dense/model.hpp"
#include "dense/rot3.hpp"
#include "dense/train.hpp"
#include "dense/util.hpp"
#include "support/oracles.hpp"
#include "support/synthetic_kg.hpp"

using namespace dense;

namespace {

struct Outcome {
    enum Kind { Pass, Fail, Skip } kind = Fail;
    std::string detail;
};

Outcome pass(const std::string& detail) { return {Outcome::Pass, detail}; }
Outcome fail(const std::string& detail) { return {Outcome::Fail, detail}; }
Outcome skip(const std::string& detail) { return {Outcome::Skip, detail}; }

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(4);
    out << v;
    return out.str();
}

int acceptance_workers() {
    const char* env = std::getenv("DENSE_WORKERS");
    if (env != nullptr) return std::max(1, std::atoi(env));
    return default_workers();
}

// --- criterion 1: rotation group properties -------------------------------

Quaternion random_quat(Rng& rng) {
    std::uniform_real_distribution<double> unif(-10.0, 10.0);
    return {unif(rng), unif(rng), unif(rng), unif(rng)};
}

Quaternion random_unit(Rng& rng) {
    std::uniform_real_distribution<double> psi(0.0, kTwoPi);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> phi(0.0, kTwoPi);
    return unit_quat(psi(rng), std::acos(u(rng)), phi(rng));
}

Outcome criterion_rotation_properties() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(20240101);
    double worst = 0.0;

    for (int trial = 0; trial < 10000; ++trial) {
        const Quaternion p = random_quat(rng);
        const Quaternion q = random_quat(rng);
        worst = std::max(worst, std::abs(hamilton(p, q).norm() - p.norm() * q.norm()));

        const Quaternion u1 = random_unit(rng);
        const Quaternion u2 = random_unit(rng);
        const Mat3 m = rotation_matrix(u1);

        Mat3 mt;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) mt(r, c) = m(c, r);
        const Mat3 mtm = mt.multiply(m);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                worst = std::max(worst, std::abs(mtm(r, c) - (r == c ? 1.0 : 0.0)));
        worst = std::max(worst, std::abs(m.det() - 1.0));

        const Mat3 lhs = rotation_matrix(hamilton(u2, u1));
        const Mat3 rhs = rotation_matrix(u2).multiply(m);
        for (int i = 0; i < 9; ++i) worst = std::max(worst, std::abs(lhs.m[i] - rhs.m[i]));

        const Mat3 neg = rotation_matrix(u1 * -1.0);
        for (int i = 0; i < 9; ++i)
            if (neg.m[i] != m.m[i]) return fail("double cover not bit-exact");

        if (p.norm() > 1e-3) {
            const AxisAngleScaling d = decompose(p);
            if (!d.degenerate) {
                const Quaternion rebuilt = unit_quat(d.psi, d.theta, d.phi) * d.scale;
                worst = std::max(worst, std::min((rebuilt - p).norm(), (rebuilt + p).norm()));
            }
        }
    }

    // order-swapped quarter turns about z and x move (1,0,0) differently
    const Quaternion qz = unit_quat(kPi / 2.0, 0.0, 0.0);
    const Quaternion qx = unit_quat(kPi / 2.0, kPi / 2.0, 0.0);
    const Vec3 h{1, 0, 0};
    const Vec3 z_then_x = rotate_sandwich(hamilton(qx, qz), h);
    const Vec3 x_then_z = rotate_sandwich(hamilton(qz, qx), h);
    const double separation = (z_then_x - x_then_z).norm();

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (worst >= 1e-8) return fail("max deviation " + fmt(worst) + " >= 1e-8");
    if (separation <= 0.5) return fail("non-commutativity witness separation " + fmt(separation));
    if (elapsed >= 10.0) return fail("runtime " + fmt(elapsed) + "s >= 10s");
    return pass("max deviation " + fmt(worst) + ", witness separation " + fmt(separation) + ", " +
                fmt(elapsed) + "s");
}

// --- criterion 2: gradient correctness ------------------------------------

Outcome criterion_gradients() {
    const auto t0 = std::chrono::steady_clock::now();
    Rng rng(424242);
    std::uniform_int_distribution<EntityId> ent(0, 5);
    std::uniform_int_distribution<RelationId> rel(0, 3);

    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const bool scaling = trial % 2 == 0;
        ModelParams params = init_params(6, 4, 3, rng, scaling);
        TrainingConfig cfg;
        cfg.k = 3;
        cfg.gamma = 2.0;
        cfg.negatives = 4;
        cfg.adv_temperature = trial % 3 == 0 ? 0.0 : 0.7;
        cfg.ablation.scaling = scaling;

        NegativeBatch negs;
        negs.positive = {ent(rng), rel(rng), ent(rng)};
        negs.side = trial % 2 == 0 ? Side::Tail : Side::Head;
        negs.corrupted_entities.resize(4);
        for (EntityId& e : negs.corrupted_entities) e = ent(rng);

        std::vector<double> neg_scores(4);
        for (std::size_t j = 0; j < 4; ++j) {
            const Triple neg = negs.side == Side::Tail
                                   ? Triple{negs.positive.head, negs.positive.relation,
                                            negs.corrupted_entities[j]}
                                   : Triple{negs.corrupted_entities[j], negs.positive.relation,
                                            negs.positive.tail};
            neg_scores[j] = score(params, neg.head, neg.relation, neg.tail);
        }
        const std::vector<double> weights = adversarial_weights(neg_scores, cfg.adv_temperature);

        const BackwardResult analytic = backward(params, negs.positive, negs, cfg);
        const auto objective = [&]() {
            return loss_with_weights(params, negs.positive, negs, weights, cfg);
        };
        // relative error floored at 1e-3 magnitude: central differences at
        // step 1e-6 carry ~1e-10 absolute noise
        auto check = [&](double g, double* coord) {
            const double fd = oracles::central_difference(objective, coord, 1e-6);
            worst = std::max(worst,
                             std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-3}));
        };
        for (const auto& [e, row] : analytic.grads.entity)
            for (std::size_t i = 0; i < row.size(); ++i)
                check(row[i], params.entity_unit(e, 0) + i);
        for (const auto& [r, row] : analytic.grads.relation)
            for (std::size_t i = 0; i < row.size(); ++i)
                check(row[i], params.relation_unit_raw(r, 0) + i);
    }

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (worst >= 1e-5) return fail("max relative error " + fmt(worst) + " >= 1e-5");
    if (elapsed >= 30.0) return fail("runtime " + fmt(elapsed) + "s >= 30s");
    return pass("max relative error " + fmt(worst) + ", " + fmt(elapsed) + "s");
}

// --- criterion 3: ranking oracle equivalence ------------------------------

Outcome criterion_ranking() {
    // fixture arithmetic
    const RankingMetrics m = metrics_from_ranks({1.0, 2.0, 4.0});
    if (std::abs(m.mrr - 0.5833333333333333) > 1e-9) return fail("MRR fixture " + fmt(m.mrr));
    if (std::abs(m.mr - 2.3333333333333335) > 1e-9) return fail("MR fixture " + fmt(m.mr));
    if (std::abs(m.hits1 - 1.0 / 3.0) > 1e-12 || std::abs(m.hits3 - 2.0 / 3.0) > 1e-12 ||
        std::abs(m.hits10 - 1.0) > 1e-12)
        return fail("hits fixture");

    int queries = 0;
    Rng seed_rng(777);
    for (int dataset_idx = 0; queries < 10000; ++dataset_idx) {
        const std::int32_t entities = 4 + dataset_idx % 7;
        Dataset ds;
        for (int i = 0; i < entities; ++i) ds.entities.add("e" + std::to_string(i));
        for (int i = 0; i < 2; ++i) ds.relations.add("r" + std::to_string(i));
        Rng rng(seed_rng());
        std::uniform_int_distribution<EntityId> ent(0, entities - 1);
        std::uniform_int_distribution<RelationId> rel(0, 1);
        std::uniform_int_distribution<int> split(0, 5);
        for (int i = 0; i < 30; ++i) {
            const Triple t{ent(rng), rel(rng), ent(rng)};
            const int s = split(rng);
            (s <= 3 ? ds.train : s == 4 ? ds.valid : ds.test).push_back(t);
        }
        if (ds.valid.empty() || ds.test.empty()) continue;
        ds.rebuild_true_index();
        Rng prng(seed_rng());
        const ModelParams params = init_params(entities, 2, 2, prng);

        auto run_split = [&](const std::vector<Triple>& split_triples) -> bool {
            for (const Triple& q : split_triples) {
                for (const Side side : {Side::Tail, Side::Head}) {
                    const double got = rank_query(params, q, side, ds);
                    const double want = oracles::brute_force_rank(params, q, side, ds);
                    ++queries;
                    if (got != want) return false;
                }
            }
            return true;
        };
        if (!run_split(ds.valid) || !run_split(ds.test))
            return fail("rank mismatch vs sort oracle on dataset " + std::to_string(dataset_idx));
    }
    return pass(std::to_string(queries) + " queries matched the sort oracle exactly");
}

// --- criterion 4: pattern recovery on synthetic graphs --------------------

TrainingConfig desk_config(std::uint64_t seed) {
    TrainingConfig cfg;
    cfg.k = 16;
    cfg.batch_size = 128;
    cfg.negatives = 64;
    cfg.gamma = 6.0;
    cfg.adv_temperature = 0.5;
    cfg.learning_rate = 0.1;
    cfg.max_steps = 10000;
    cfg.lr_patience_epochs = 400;
    cfg.eval_every_epochs = 30;
    cfg.early_stop_patience = 12;
    cfg.seed = seed;
    // Gradient summation order follows the worker chunking, so the worker
    // count is pinned to keep these runs and their thresholds reproducible
    // on any machine.
    cfg.workers = 2;
    return cfg;
}

Outcome criterion_symmetry_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    Dataset ds = synth::make_symmetric_kg(60, 150, 0.3, 43);
    augment_reciprocal(ds);
    const TrainingConfig cfg = desk_config(1);
    const TrainResult r = train(ds, cfg);
    const RankingMetrics m = evaluate(r.best_params, ds.test, ds, cfg.workers);
    const SymmetryDeviation dev = symmetry_deviation(relation_geometry(r.best_params, 0));
    const double med_scale_dev = median(dev.scale_dev);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string detail = "test MRR " + fmt(m.mrr) + ", median scale_dev " +
                               fmt(med_scale_dev) + ", " + fmt(elapsed) + "s";
    if (m.mrr < 0.95) return fail(detail + " (MRR < 0.95)");
    if (med_scale_dev >= 0.1) return fail(detail + " (scale_dev >= 0.1)");
    if (elapsed >= 300.0) return fail(detail + " (over 5 min)");
    return pass(detail);
}

Outcome criterion_inversion_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    Dataset ds = synth::make_inverse_kg(60, 240, 0.3, 44);
    augment_reciprocal(ds);
    TrainingConfig cfg = desk_config(1);
    cfg.eval_every_epochs = 100;
    const TrainResult r = train(ds, cfg);
    const PairAlignment a = inverse_alignment(relation_geometry(r.best_params, 0),
                                              relation_geometry(r.best_params, 1));
    std::vector<double> abs_psi;
    for (const double p : a.psi_sum) abs_psi.push_back(std::abs(p));
    const double med_psi = median(abs_psi);
    const double med_scale = median(a.scale_prod);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string detail = "median |psi_sum| " + fmt(med_psi) + " rad, median scale_prod " +
                               fmt(med_scale) + ", " + fmt(elapsed) + "s";
    if (med_psi >= 0.3) return fail(detail + " (|psi_sum| >= 0.3)");
    if (med_scale < 0.85 || med_scale > 1.15) return fail(detail + " (scale_prod outside [0.85, 1.15])");
    if (elapsed >= 300.0) return fail(detail + " (over 5 min)");
    return pass(detail);
}

Outcome criterion_composition_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    Dataset ds = synth::make_composition_kg(60, 3, 0.25, 45);
    augment_reciprocal(ds);
    const TrainingConfig cfg = desk_config(1);
    const TrainResult r = train(ds, cfg);
    const CompositionAlignment c =
        composition_alignment(r.best_params, 0, 0, 1, CompositionVariant::DoubleAngle);
    std::vector<double> abs_psi;
    for (const double p : c.psi_diff) abs_psi.push_back(std::abs(p));
    const double med_psi = median(abs_psi);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const std::string detail =
        "median |psi(r3) - 2 psi(r1)| " + fmt(med_psi) + " rad, " + fmt(elapsed) + "s";
    if (med_psi >= 0.4) return fail(detail + " (>= 0.4)");
    if (elapsed >= 300.0) return fail(detail + " (over 5 min)");
    return pass(detail);
}

// --- criterion 5: bounded benchmark run -----------------------------------

std::filesystem::path dataset_dir(const std::string& name) {
    const char* root = std::getenv("DENSE_DATA_DIR");
    if (root == nullptr) return {};
    const auto dir = std::filesystem::path(root) / name;
    return std::filesystem::exists(dir / "train.txt") ? dir : std::filesystem::path{};
}

Outcome criterion_bounded_benchmark() {
    const auto dir = dataset_dir("wn18rr");
    if (dir.empty())
        return skip("wn18rr triple files not found (set DENSE_DATA_DIR); the bounded run needs "
                    "the benchmark download");

    const auto run_once = [&](bool scaling) {
        Dataset ds = build_dataset((dir / "train.txt").string(), (dir / "valid.txt").string(),
                                   (dir / "test.txt").string());
        augment_reciprocal(ds);
        TrainingConfig cfg;
        cfg.k = 50;
        cfg.batch_size = 512;
        cfg.gamma = 6.0;
        cfg.negatives = 128;
        cfg.adv_temperature = 0.5;
        cfg.learning_rate = 0.1;
        cfg.max_steps = 20000;
        cfg.eval_every_epochs = 10;
        cfg.early_stop_patience = 3;
        cfg.seed = 1;
        cfg.workers = acceptance_workers();
        cfg.ablation.scaling = scaling;
        const TrainResult r = train(ds, cfg);
        return std::isnan(r.best_valid_mrr)
                   ? evaluate(r.best_params, ds.valid, ds, cfg.workers).mrr
                   : r.best_valid_mrr;
    };

    const double dense_mrr = run_once(true);
    const double ablated_mrr = run_once(false);
    const std::string detail = "valid MRR " + fmt(dense_mrr) + " (full) vs " + fmt(ablated_mrr) +
                               " (-scaling)";
    if (dense_mrr < 0.30) return fail(detail + " (full model below 0.30)");
    if (!(dense_mrr > ablated_mrr || std::abs(dense_mrr - ablated_mrr) <= 0.005))
        return fail(detail + " (-scaling run better by more than 0.005)");
    return pass(detail);
}

// --- criterion 6: ablation plumbing ---------------------------------------

Outcome criterion_ablation_plumbing() {
    Rng rng(31337);
    ModelParams params = init_params(12, 4, 5, rng);
    TrainingConfig cfg;
    cfg.k = 5;
    cfg.gamma = 4.0;
    cfg.negatives = 6;
    cfg.adv_temperature = 0.8;

    NegativeBatch negs;
    negs.positive = {0, 1, 2};
    negs.side = Side::Tail;
    negs.corrupted_entities = {3, 4, 5, 6, 7, 8};

    // adversarial off equals the uniform-weight objective to 1e-12
    cfg.ablation.adversarial = false;
    const double ablated = loss(params, negs.positive, negs, cfg);
    const std::vector<double> uniform(negs.corrupted_entities.size(),
                                      1.0 / negs.corrupted_entities.size());
    const double uniform_loss = loss_with_weights(params, negs.positive, negs, uniform, cfg);
    if (std::abs(ablated - uniform_loss) > 1e-12)
        return fail("adv-off loss differs from uniform formula by " +
                    fmt(std::abs(ablated - uniform_loss)));

    // scaling off: every relation unit used in the forward pass at norm 1
    Rng rng2(4242);
    const ModelParams projected = init_params(12, 4, 5, rng2, /*scaling=*/false);
    double worst_norm_dev = 0.0;
    for (RelationId r = 0; r < projected.relation_count(); ++r)
        for (std::int32_t i = 0; i < projected.k(); ++i)
            worst_norm_dev = std::max(worst_norm_dev,
                                      std::abs(projected.relation_quat(r, i).norm() - 1.0));
    if (worst_norm_dev > 1e-9)
        return fail("scaling-off effective norms deviate by " + fmt(worst_norm_dev));

    // reciprocal off: relation vocabulary stays at the raw count
    Dataset ds = synth::make_symmetric_kg(10, 20, 0.2, 5);
    const auto raw_count = ds.relation_count();
    Dataset augmented = ds;
    augment_reciprocal(augmented);
    if (augmented.relation_count() != 2 * raw_count)
        return fail("augmented relation count is not 2R");

    std::string detail = "adv-off exact within 1e-12, projected norms within " +
                         fmt(worst_norm_dev) + ", vocab " + std::to_string(raw_count) + " -> " +
                         std::to_string(augmented.relation_count());

    const auto wn18rr = dataset_dir("wn18rr");
    if (!wn18rr.empty()) {
        const Dataset wn = build_dataset((wn18rr / "train.txt").string(),
                                         (wn18rr / "valid.txt").string(),
                                         (wn18rr / "test.txt").string());
        if (wn.relation_count() != 11)
            return fail("wn18rr raw relation count " + std::to_string(wn.relation_count()));
        detail += ", wn18rr raw vocabulary 11";
    }
    return pass(detail);
}

// --- criterion 7: triangle mining -----------------------------------------

Outcome criterion_triangles() {
    // three-triple fixture
    {
        Dataset ds;
        for (int i = 0; i < 3; ++i) ds.entities.add("e" + std::to_string(i));
        ds.relations.add("r");
        ds.train = {{0, 0, 1}, {1, 0, 2}, {0, 0, 2}};
        ds.rebuild_true_index();
        const TriangleSet tris = mine_triangles(ds, 0, 0, 0);
        if (tris.triangles.size() != 1 || tris.triangles[0] != std::array<EntityId, 3>{0, 1, 2})
            return fail("three-triple fixture produced " + std::to_string(tris.triangles.size()) +
                        " triangles");
    }

    std::size_t compared = 0;
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Dataset ds;
        const int entities = 40;
        for (int i = 0; i < entities; ++i) ds.entities.add("e" + std::to_string(i));
        for (int i = 0; i < 3; ++i) ds.relations.add("r" + std::to_string(i));
        Rng rng(seed);
        std::uniform_int_distribution<EntityId> ent(0, entities - 1);
        std::uniform_int_distribution<RelationId> rel(0, 2);
        const int triples = 500 + static_cast<int>(seed) * 300;  // up to 2000
        for (int i = 0; i < triples; ++i) ds.train.push_back({ent(rng), rel(rng), ent(rng)});
        ds.rebuild_true_index();

        for (RelationId r1 = 0; r1 < 3; ++r1)
            for (RelationId r2 = 0; r2 < 3; ++r2)
                for (RelationId r3 = 0; r3 < 3; ++r3) {
                    auto got = mine_triangles(ds, r1, r2, r3).triangles;
                    auto want = oracles::nested_loop_triangles(ds, r1, r2, r3);
                    std::sort(got.begin(), got.end());
                    std::sort(want.begin(), want.end());
                    if (got != want)
                        return fail("mismatch vs nested-loop oracle at seed " +
                                    std::to_string(seed));
                    compared += want.size();
                }
    }
    return pass("fixture exact; " + std::to_string(compared) +
                " oracle triangles matched on datasets up to 2000 triples");
}

// --- criterion 8: loader fixtures ------------------------------------------

Outcome criterion_loader_fixtures() {
    const auto wn18 = dataset_dir("wn18");
    const auto wn18rr = dataset_dir("wn18rr");
    if (wn18.empty() && wn18rr.empty())
        return skip("benchmark triple files not found (set DENSE_DATA_DIR to a directory with "
                    "wn18/ and wn18rr/)");

    std::string detail;
    if (!wn18rr.empty()) {
        const Dataset ds = build_dataset((wn18rr / "train.txt").string(),
                                         (wn18rr / "valid.txt").string(),
                                         (wn18rr / "test.txt").string());
        if (ds.train.size() != 86835 || ds.valid.size() != 3034 || ds.test.size() != 3134)
            return fail("wn18rr split sizes " + std::to_string(ds.train.size()) + "/" +
                        std::to_string(ds.valid.size()) + "/" + std::to_string(ds.test.size()));
        if (ds.entity_count() != 40943 || ds.relation_count() != 11)
            return fail("wn18rr vocabulary " + std::to_string(ds.entity_count()) + "/" +
                        std::to_string(ds.relation_count()));
        detail += "wn18rr 86835/3034/3134, 40943 entities, 11 relations";
    }
    if (!wn18.empty()) {
        const Dataset ds = build_dataset((wn18 / "train.txt").string(),
                                         (wn18 / "valid.txt").string(),
                                         (wn18 / "test.txt").string());
        if (ds.train.size() != 141442 || ds.valid.size() != 5000 || ds.test.size() != 5000)
            return fail("wn18 split sizes wrong");
        if (ds.entity_count() != 40943 || ds.relation_count() != 18)
            return fail("wn18 vocabulary wrong");
        if (!detail.empty()) detail += "; ";
        detail += "wn18 141442/5000/5000, 40943 entities, 18 relations";
    }
    return pass(detail);
}

}  // namespace

int main() {
    struct Criterion {
        std::string label;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"1 rotation-group property suite", criterion_rotation_properties},
        {"2 analytic gradients vs finite differences", criterion_gradients},
        {"3 filtered ranking vs sort oracle + metric fixture", criterion_ranking},
        {"4a symmetric-relation recovery", criterion_symmetry_recovery},
        {"4b inverse-pair recovery", criterion_inversion_recovery},
        {"4c two-hop composition recovery", criterion_composition_recovery},
        {"5 bounded wn18rr run vs -scaling", criterion_bounded_benchmark},
        {"6 ablation plumbing", criterion_ablation_plumbing},
        {"7 triangle miner vs nested-loop oracle", criterion_triangles},
        {"8 benchmark loader fixtures", criterion_loader_fixtures},
    };

    int failures = 0;
    for (const auto& criterion : criteria) {
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome = fail(std::string("exception: ") + e.what());
        }
        const char* tag = outcome.kind == Outcome::Pass ? "PASS"
                          : outcome.kind == Outcome::Skip ? "SKIP"
                                                          : "FAIL";
        std::printf("%s criterion %s: %s\n", tag, criterion.label.c_str(),
                    outcome.detail.c_str());
        std::fflush(stdout);
        if (outcome.kind == Outcome::Fail) ++failures;
    }
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all runnable criteria passed\n");
    return 0;
}
