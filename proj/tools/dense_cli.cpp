// dense: train, evaluate, and analyze rotation+scaling knowledge-graph
// embeddings from the command line.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numeric
// failure. DENSE_SEED overrides the config-file seed; command-line flags
// override both.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dense/commands.hpp"
#include "dense/errors.hpp"
#include "dense/util.hpp"

namespace {

std::string config_path;  // value of --config on the active subcommand

void add_dataset_options(CLI::App* cmd, dense::RunConfig& rc) {
    cmd->add_option("--data-root", rc.data_root, "Directory holding <dataset>/{train,valid,test}.txt");
    cmd->add_option("--dataset", rc.dataset, "Dataset shorthand (wn18, wn18rr, fb15k-237, yago3-10)");
    cmd->add_option("--train-file", rc.train_file, "Explicit training triples path");
    cmd->add_option("--valid-file", rc.valid_file, "Explicit validation triples path");
    cmd->add_option("--test-file", rc.test_file, "Explicit test triples path");
    cmd->add_option("-o,--output-dir", rc.output_dir, "Output directory")->capture_default_str();
    cmd->add_option("--config", config_path,
                    "Flat key = value config file; flags and DENSE_SEED take precedence");
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Applies `key = value` lines to options of the active subcommand that were
// not already set on the command line or through the environment.
void apply_flat_config(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw dense::ConfigError("cannot open config file: " + path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line.resize(comment);
        line = trimmed(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw dense::ConfigError(path + ":" + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trimmed(line.substr(0, eq));
        std::string value = trimmed(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key == "config") continue;
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw dense::ConfigError(path + ":" + std::to_string(line_no) + ": unknown key '" +
                                     key + "'");
        if (opt->count() > 0) continue;
        opt->add_result(value);
        try {
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw dense::ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void add_common_run_options(CLI::App* cmd, dense::RunConfig& rc) {
    cmd->add_option("--workers", rc.train.workers,
                    "Parallel workers (1 for bit-reproducible runs)")
        ->capture_default_str();
    cmd->add_option("--seed", rc.train.seed, "Random seed")
        ->envname("DENSE_SEED")
        ->capture_default_str();
}

std::vector<std::string> parse_ablations(const std::string& list) {
    std::vector<std::string> out;
    std::string item;
    for (const char c : list) {
        if (c == ',') {
            if (!item.empty()) out.push_back(item);
            item.clear();
        } else {
            item += c;
        }
    }
    if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Knowledge-graph embedding with per-unit 3-D rotation and scaling operators"};
    app.require_subcommand(1);

    dense::RunConfig rc;
    rc.train.workers = dense::default_workers();
    std::string ablate_spec;

    CLI::App* train_cmd = app.add_subcommand("train", "Train a model and write checkpoints");
    add_dataset_options(train_cmd, rc);
    add_common_run_options(train_cmd, rc);
    train_cmd->add_option("-k,--k", rc.train.k, "Embedding units per entity/relation")
        ->capture_default_str();
    train_cmd->add_option("-b,--batch", rc.train.batch_size, "Positives per optimizer step")
        ->capture_default_str();
    train_cmd->add_option("-g,--gamma", rc.train.gamma, "Fixed margin")->capture_default_str();
    train_cmd->add_option("-n,--neg", rc.train.negatives, "Negative samples per positive")
        ->capture_default_str();
    train_cmd->add_option("-a,--adv-temp", rc.train.adv_temperature,
                          "Self-adversarial sampling temperature")
        ->capture_default_str();
    train_cmd->add_option("--lr", rc.train.learning_rate, "Initial learning rate")
        ->capture_default_str();
    train_cmd->add_option("--max-steps", rc.train.max_steps, "Optimizer step budget")
        ->capture_default_str();
    train_cmd->add_option("--steps-per-epoch", rc.train.steps_per_epoch,
                          "Steps per epoch for the decay/early-stop counters "
                          "(0: ceil(|train|/batch))")
        ->capture_default_str();
    train_cmd->add_option("--eval-every", rc.train.eval_every_epochs,
                          "Validate every this many epochs (0: never)")
        ->capture_default_str();
    train_cmd->add_option("--lr-patience", rc.train.lr_patience_epochs,
                          "Epochs without loss improvement before halving the rate")
        ->capture_default_str();
    train_cmd->add_option("--early-stop-patience", rc.train.early_stop_patience,
                          "Consecutive non-improving validations before stopping")
        ->capture_default_str();
    train_cmd->add_option("--ablate", ablate_spec,
                          "Comma list from {scaling, reciprocal, adv} to disable");

    CLI::App* eval_cmd = app.add_subcommand("eval", "Filtered link-prediction metrics");
    add_dataset_options(eval_cmd, rc);
    add_common_run_options(eval_cmd, rc);
    eval_cmd->add_option("-c,--checkpoint", rc.checkpoint, "Checkpoint to evaluate")->required();
    eval_cmd->add_option("--split", rc.split, "valid or test")->capture_default_str();
    eval_cmd->add_flag("--raw", rc.raw, "Rank without filtering known true triples (debugging)");

    CLI::App* analyze_cmd = app.add_subcommand("analyze", "Geometric analyses to CSV");
    add_dataset_options(analyze_cmd, rc);
    add_common_run_options(analyze_cmd, rc);
    analyze_cmd->add_option("-c,--checkpoint", rc.checkpoint, "Checkpoint to analyze")->required();
    analyze_cmd->add_option("--geometry", rc.geometry, "Relation names: per-dimension polar form");
    analyze_cmd->add_option("--symmetry", rc.symmetry, "Relation names: symmetry deviations");
    analyze_cmd->add_option("--inverse", rc.inverse, "Two relation names: inverse-pair alignment")
        ->expected(2);
    analyze_cmd
        ->add_option("--composition", rc.composition, "Three relation names: r1 r2 r3 alignment")
        ->expected(3);
    analyze_cmd->add_option("--variant", rc.variant,
                            "compare-to-r3 | compare-to-r1 | compare-to-r2 | scale-square | "
                            "double-angle")
        ->capture_default_str();
    analyze_cmd
        ->add_option("--collinearity", rc.collinearity,
                     "Three relation names: mine triangles, compare entity vs axis directions")
        ->expected(3);
    analyze_cmd->add_option("--bins", rc.bins, "Histogram bins")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc_code = app.exit(e);
        return rc_code == 0 ? 0 : 1;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        if (!config_path.empty()) apply_flat_config(active, config_path);

        for (const std::string& item : parse_ablations(ablate_spec)) {
            if (item == "scaling")
                rc.train.ablation.scaling = false;
            else if (item == "reciprocal")
                rc.train.ablation.reciprocal = false;
            else if (item == "adv" || item == "adversarial")
                rc.train.ablation.adversarial = false;
            else
                throw dense::ConfigError("unknown ablation '" + item +
                                         "' (expected scaling, reciprocal, adv)");
        }

        rc.effective_config = active->config_to_str(true, false);

        if (train_cmd->parsed()) {
            dense::cmd_train(rc);
        } else if (eval_cmd->parsed()) {
            dense::cmd_eval(rc);
        } else if (analyze_cmd->parsed()) {
            dense::cmd_analyze(rc);
        }
        return 0;
    } catch (const dense::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const dense::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
