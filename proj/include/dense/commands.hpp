#pragma once

#include <string>
#include <vector>

#include "dense/train.hpp"

// Batch front-end plumbing shared by the CLI binary and the end-to-end
// tests: dataset resolution, checkpoint/log/CSV emission, and the three
// subcommands.

namespace dense {

struct RunConfig {
    // Dataset location: either data_root + dataset shorthand resolving to
    // <data_root>/<dataset>/{train,valid,test}.txt, or explicit file paths.
    std::string data_root;
    std::string dataset;
    std::string train_file, valid_file, test_file;

    std::string output_dir = "out";
    std::string checkpoint;        // input checkpoint for eval / analyze
    std::string split = "test";    // eval split: "valid" or "test"
    bool raw = false;              // unfiltered ranking, debugging only

    TrainingConfig train;

    // Analysis requests (relation names as they appear in the triple files).
    std::vector<std::string> geometry;
    std::vector<std::string> symmetry;
    std::vector<std::string> inverse;       // exactly 2 when set
    std::vector<std::string> composition;   // exactly 3 when set
    std::string variant = "compare-to-r3";
    std::vector<std::string> collinearity;  // exactly 3 when set
    int bins = 40;

    // Echoed verbatim into the output directory for reproducibility.
    std::string effective_config;
};

// Resolved triple-file paths for the run.
struct DatasetPaths {
    std::string train, valid, test;
};
DatasetPaths resolve_dataset_paths(const RunConfig& rc);

Dataset load_run_dataset(const RunConfig& rc, bool reciprocal);

// Trains, writes checkpoint_best.bin / checkpoint_final.bin /
// train_log.jsonl / effective_config.txt under output_dir, and prints the
// final validation metrics.
void cmd_train(const RunConfig& rc);

// Filtered metrics on the chosen split to stdout, metrics.json and
// per_relation.csv under output_dir.
void cmd_eval(const RunConfig& rc);

// Geometry / symmetry / inverse / composition / collinearity CSV bundle
// plus manifest.json under output_dir.
void cmd_analyze(const RunConfig& rc);

}  // namespace dense
