#include "dense/commands.hpp"

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "dense/analysis.hpp"
#include "dense/checkpoint.hpp"
#include "dense/errors.hpp"
#include "dense/eval.hpp"

namespace dense {

namespace fs = std::filesystem;
using nlohmann::json;

DatasetPaths resolve_dataset_paths(const RunConfig& rc) {
    DatasetPaths paths{rc.train_file, rc.valid_file, rc.test_file};
    if (!rc.dataset.empty()) {
        if (rc.data_root.empty())
            throw ConfigError("--dataset requires --data-root pointing at the benchmark files");
        const fs::path base = fs::path(rc.data_root) / rc.dataset;
        if (paths.train.empty()) paths.train = (base / "train.txt").string();
        if (paths.valid.empty()) paths.valid = (base / "valid.txt").string();
        if (paths.test.empty()) paths.test = (base / "test.txt").string();
    }
    if (paths.train.empty() || paths.valid.empty() || paths.test.empty())
        throw ConfigError("no dataset given: use --data-root/--dataset or --train-file, "
                          "--valid-file, --test-file");
    return paths;
}

Dataset load_run_dataset(const RunConfig& rc, bool reciprocal) {
    const DatasetPaths paths = resolve_dataset_paths(rc);
    Dataset ds = build_dataset(paths.train, paths.valid, paths.test);
    if (reciprocal) augment_reciprocal(ds);
    return ds;
}

namespace {

void ensure_output_dir(const RunConfig& rc) {
    std::error_code ec;
    fs::create_directories(rc.output_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + rc.output_dir);
}

void echo_config(const RunConfig& rc) {
    if (rc.effective_config.empty()) return;
    std::ofstream out(fs::path(rc.output_dir) / "effective_config.txt");
    out << rc.effective_config;
}

std::string sanitize(const std::string& name) {
    std::string s = name;
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

RelationId resolve_relation(const Dataset& ds, const std::string& name) {
    const auto id = ds.relations.lookup(name);
    if (id >= 0) return id;
    std::string known = "unknown relation name '" + name + "'; known relations:";
    for (std::int32_t r = 0; r < ds.base_relation_count(); ++r)
        known += " " + ds.relations.name(r);
    throw ConfigError(known);
}

void write_json_file(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_per_relation_csv(const fs::path& path, const std::vector<PerRelationRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << "relation_name,test_fraction,mrr\n";
    out.precision(10);
    for (const auto& row : rows)
        out << row.name << "," << row.split_fraction << "," << row.mrr << "\n";
}

json metrics_json(const RankingMetrics& m) {
    return json{{"mr", m.mr},       {"mrr", m.mrr},     {"hits1", m.hits1},
                {"hits3", m.hits3}, {"hits10", m.hits10}, {"count", m.count}};
}

}  // namespace

namespace {

void write_dataset_stats(const RunConfig& rc, const Dataset& ds) {
    const std::string stats = dataset_stats_json(ds);
    std::cerr << "dataset: " << stats << "\n";
    std::ofstream out(fs::path(rc.output_dir) / "dataset_stats.json");
    out << stats << "\n";
}

}  // namespace

void cmd_train(const RunConfig& rc) {
    ensure_output_dir(rc);
    echo_config(rc);
    const Dataset ds = load_run_dataset(rc, rc.train.ablation.reciprocal);
    write_dataset_stats(rc, ds);

    const TrainResult result = train(ds, rc.train);

    const fs::path out_dir(rc.output_dir);
    save_checkpoint(result.best_params, (out_dir / "checkpoint_best.bin").string());
    save_checkpoint(result.final_params, (out_dir / "checkpoint_final.bin").string());

    std::ofstream log(out_dir / "train_log.jsonl");
    for (const auto& rec : result.log) {
        json j{{"step", rec.step}, {"loss", rec.loss}, {"lr", rec.lr}};
        if (rec.valid_mrr) j["valid_mrr"] = *rec.valid_mrr;
        log << j.dump() << "\n";
    }

    if (!ds.valid.empty() && result.steps_run > 0) {
        const RankingMetrics m = evaluate(result.best_params, ds.valid, ds, rc.train.workers);
        std::cout << metrics_json(m).dump() << "\n";
        write_json_file(out_dir / "valid_metrics.json", metrics_json(m));
    }
}

void cmd_eval(const RunConfig& rc) {
    ensure_output_dir(rc);
    echo_config(rc);
    if (rc.checkpoint.empty()) throw ConfigError("eval requires --checkpoint");
    const ModelParams params = load_checkpoint(rc.checkpoint);

    // Reciprocal augmentation is recovered from the checkpoint shape.
    Dataset ds = load_run_dataset(rc, false);
    if (params.relation_count() == 2 * ds.relation_count()) {
        augment_reciprocal(ds);
    } else if (params.relation_count() != ds.relation_count()) {
        throw NumericError("checkpoint relation table (" + std::to_string(params.relation_count()) +
                           ") does not match dataset (" + std::to_string(ds.relation_count()) +
                           " relations, " + std::to_string(2 * ds.relation_count()) +
                           " augmented)");
    }
    if (params.entity_count() != ds.entity_count())
        throw NumericError("checkpoint entity table (" + std::to_string(params.entity_count()) +
                           ") does not match dataset (" + std::to_string(ds.entity_count()) + ")");
    write_dataset_stats(rc, ds);

    if (rc.split != "valid" && rc.split != "test")
        throw ConfigError("unknown split '" + rc.split + "' (expected valid or test)");
    const std::vector<Triple>& split = rc.split == "valid" ? ds.valid : ds.test;

    std::vector<PerRelationRow> per_relation;
    const RankingMetrics m =
        evaluate(params, split, ds, rc.train.workers, &per_relation, !rc.raw);

    std::cout << metrics_json(m).dump() << "\n";
    const fs::path out_dir(rc.output_dir);
    write_json_file(out_dir / "metrics.json", metrics_json(m));
    write_per_relation_csv(out_dir / "per_relation.csv", per_relation);
}

void cmd_analyze(const RunConfig& rc) {
    ensure_output_dir(rc);
    echo_config(rc);
    if (rc.checkpoint.empty()) throw ConfigError("analyze requires --checkpoint");
    const ModelParams params = load_checkpoint(rc.checkpoint);

    Dataset ds = load_run_dataset(rc, false);
    if (params.relation_count() == 2 * ds.relation_count()) {
        augment_reciprocal(ds);
    } else if (params.relation_count() != ds.relation_count()) {
        throw NumericError("checkpoint relation table (" + std::to_string(params.relation_count()) +
                           ") does not match dataset (" + std::to_string(ds.relation_count()) +
                           " relations)");
    }
    if (params.entity_count() != ds.entity_count())
        throw NumericError("checkpoint entity table (" + std::to_string(params.entity_count()) +
                           ") does not match dataset (" + std::to_string(ds.entity_count()) + ")");

    const fs::path out_dir(rc.output_dir);
    json manifest = json::array();

    auto hist = [&](const std::vector<double>& values, const std::string& file,
                    const json& params_meta) {
        export_histogram(values, rc.bins, (out_dir / file).string());
        json entry = params_meta;
        entry["file"] = file;
        entry["bins"] = rc.bins;
        entry["values"] = values.size();
        manifest.push_back(entry);
    };

    auto masked = [](const std::vector<double>& values, const std::vector<char>& ok) {
        std::vector<double> kept;
        for (std::size_t i = 0; i < values.size(); ++i)
            if (ok[i]) kept.push_back(values[i]);
        return kept;
    };

    for (const std::string& name : rc.geometry) {
        const RelationId r = resolve_relation(ds, name);
        const RelationGeometry g = relation_geometry(params, r);
        const std::string tag = sanitize(name);
        std::ofstream values(out_dir / ("geometry_" + tag + ".csv"));
        values << "dimension,scale,psi,theta,phi,degenerate\n";
        values.precision(12);
        for (std::size_t i = 0; i < g.scale.size(); ++i)
            values << i << "," << g.scale[i] << "," << g.psi[i] << "," << g.theta[i] << ","
                   << g.phi[i] << "," << static_cast<int>(g.degenerate[i]) << "\n";
        manifest.push_back(
            {{"analysis", "geometry"}, {"relation", name}, {"file", "geometry_" + tag + ".csv"}});
        hist(g.scale, "geometry_" + tag + "_scale_hist.csv",
             {{"analysis", "geometry"}, {"relation", name}, {"quantity", "scale"}});
        hist(g.psi, "geometry_" + tag + "_psi_hist.csv",
             {{"analysis", "geometry"}, {"relation", name}, {"quantity", "psi"}});
    }

    for (const std::string& name : rc.symmetry) {
        const RelationId r = resolve_relation(ds, name);
        const RelationGeometry g = relation_geometry(params, r);
        const SymmetryDeviation dev = symmetry_deviation(g);
        const std::string tag = sanitize(name);
        std::ofstream values(out_dir / ("symmetry_" + tag + ".csv"));
        values << "dimension,scale,psi,scale_dev,angle_dev\n";
        values.precision(12);
        for (std::size_t i = 0; i < g.scale.size(); ++i)
            values << i << "," << g.scale[i] << "," << g.psi[i] << "," << dev.scale_dev[i] << ","
                   << dev.angle_dev[i] << "\n";
        manifest.push_back(
            {{"analysis", "symmetry"}, {"relation", name}, {"file", "symmetry_" + tag + ".csv"}});
        hist(g.scale, "symmetry_" + tag + "_scale_hist.csv",
             {{"analysis", "symmetry"}, {"relation", name}, {"quantity", "scale"}});
        hist(g.psi, "symmetry_" + tag + "_psi_hist.csv",
             {{"analysis", "symmetry"}, {"relation", name}, {"quantity", "psi"}});
    }

    if (!rc.inverse.empty()) {
        if (rc.inverse.size() != 2) throw ConfigError("--inverse expects exactly 2 relation names");
        const RelationId r1 = resolve_relation(ds, rc.inverse[0]);
        const RelationId r2 = resolve_relation(ds, rc.inverse[1]);
        const PairAlignment a =
            inverse_alignment(relation_geometry(params, r1), relation_geometry(params, r2));
        const std::string tag = sanitize(rc.inverse[0]) + "__" + sanitize(rc.inverse[1]);
        std::ofstream values(out_dir / ("inverse_" + tag + ".csv"));
        values << "dimension,psi_sum,psi_sum_raw,scale_prod,theta_diff,phi_diff,axis_ok\n";
        values.precision(12);
        for (std::size_t i = 0; i < a.psi_sum.size(); ++i)
            values << i << "," << a.psi_sum[i] << "," << a.psi_sum_raw[i] << "," << a.scale_prod[i]
                   << "," << a.theta_diff[i] << "," << a.phi_diff[i] << ","
                   << static_cast<int>(a.axis_ok[i]) << "\n";
        const json meta{{"analysis", "inverse"},
                        {"relations", rc.inverse},
                        {"axis_excluded", a.axis_excluded}};
        json values_meta = meta;
        values_meta["file"] = "inverse_" + tag + ".csv";
        manifest.push_back(values_meta);
        hist(a.psi_sum, "inverse_" + tag + "_psi_sum_hist.csv",
             json{{"analysis", "inverse"}, {"relations", rc.inverse}, {"quantity", "psi_sum"}});
        hist(a.scale_prod, "inverse_" + tag + "_scale_prod_hist.csv",
             json{{"analysis", "inverse"}, {"relations", rc.inverse}, {"quantity", "scale_prod"}});
        hist(masked(a.theta_diff, a.axis_ok), "inverse_" + tag + "_theta_diff_hist.csv",
             json{{"analysis", "inverse"},
                  {"relations", rc.inverse},
                  {"quantity", "theta_diff"},
                  {"axis_excluded", a.axis_excluded}});
        hist(masked(a.phi_diff, a.axis_ok), "inverse_" + tag + "_phi_diff_hist.csv",
             json{{"analysis", "inverse"},
                  {"relations", rc.inverse},
                  {"quantity", "phi_diff"},
                  {"axis_excluded", a.axis_excluded}});
    }

    if (!rc.composition.empty()) {
        if (rc.composition.size() != 3)
            throw ConfigError("--composition expects exactly 3 relation names");
        const RelationId r1 = resolve_relation(ds, rc.composition[0]);
        const RelationId r2 = resolve_relation(ds, rc.composition[1]);
        const RelationId r3 = resolve_relation(ds, rc.composition[2]);
        const CompositionVariant variant = parse_composition_variant(rc.variant);
        const CompositionAlignment a = composition_alignment(params, r1, r2, r3, variant);
        const std::string tag = sanitize(rc.composition[0]) + "__" + sanitize(rc.composition[1]) +
                                "__" + sanitize(rc.composition[2]);
        std::ofstream values(out_dir / ("composition_" + tag + ".csv"));
        values << "dimension,scale_diff,psi_diff,psi_diff_raw,theta_diff,phi_diff,axis_ok\n";
        values.precision(12);
        for (std::size_t i = 0; i < a.scale_diff.size(); ++i)
            values << i << "," << a.scale_diff[i] << "," << a.psi_diff[i] << ","
                   << a.psi_diff_raw[i] << "," << a.theta_diff[i] << "," << a.phi_diff[i] << ","
                   << static_cast<int>(a.axis_ok[i]) << "\n";
        const json base{{"analysis", "composition"},
                        {"relations", rc.composition},
                        {"variant", rc.variant}};
        json values_meta = base;
        values_meta["file"] = "composition_" + tag + ".csv";
        values_meta["axis_excluded"] = a.axis_excluded;
        manifest.push_back(values_meta);
        auto with_quantity = [&base](const std::string& q) {
            json j = base;
            j["quantity"] = q;
            return j;
        };
        hist(a.scale_diff, "composition_" + tag + "_scale_diff_hist.csv", with_quantity("scale_diff"));
        hist(a.psi_diff, "composition_" + tag + "_psi_diff_hist.csv", with_quantity("psi_diff"));
        hist(masked(a.theta_diff, a.axis_ok), "composition_" + tag + "_theta_diff_hist.csv",
             with_quantity("theta_diff"));
        hist(masked(a.phi_diff, a.axis_ok), "composition_" + tag + "_phi_diff_hist.csv",
             with_quantity("phi_diff"));
    }

    if (!rc.collinearity.empty()) {
        if (rc.collinearity.size() != 3)
            throw ConfigError("--collinearity expects exactly 3 relation names");
        const RelationId r1 = resolve_relation(ds, rc.collinearity[0]);
        const RelationId r2 = resolve_relation(ds, rc.collinearity[1]);
        const RelationId r3 = resolve_relation(ds, rc.collinearity[2]);
        const TriangleSet tris = mine_triangles(ds, r1, r2, r3);
        const std::string tag = sanitize(rc.collinearity[0]) + "__" + sanitize(rc.collinearity[1]) +
                                "__" + sanitize(rc.collinearity[2]);
        std::ofstream tri_csv(out_dir / ("triangles_" + tag + ".csv"));
        tri_csv << "x,y,z\n";
        for (const auto& t : tris.triangles)
            tri_csv << ds.entities.name(t[0]) << "," << ds.entities.name(t[1]) << ","
                    << ds.entities.name(t[2]) << "\n";
        manifest.push_back({{"analysis", "triangles"},
                            {"relations", rc.collinearity},
                            {"file", "triangles_" + tag + ".csv"},
                            {"count", tris.triangles.size()}});
        if (!tris.triangles.empty()) {
            const EntityAxisAlignment align = entity_axis_alignment(params, tris);
            hist(align.theta_diff, "collinearity_" + tag + "_theta_diff_hist.csv",
                 json{{"analysis", "collinearity"},
                      {"relations", rc.collinearity},
                      {"quantity", "theta_diff"},
                      {"skipped", align.skipped}});
        }
    }

    write_json_file(out_dir / "manifest.json", manifest);
    std::cout << "wrote " << manifest.size() << " analysis artifacts to " << rc.output_dir << "\n";
}

}  // namespace dense
