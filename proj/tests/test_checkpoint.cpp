#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "dense/checkpoint.hpp"
#include "dense/errors.hpp"

using namespace dense;

namespace {

std::string temp_path(const std::string& name) {
    const auto dir =
        std::filesystem::temp_directory_path() / ("dense_ckpt_" + std::to_string(std::rand()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace

TEST_CASE("checkpoint roundtrip is bit-exact") {
    Rng rng(77);
    const ModelParams original = init_params(9, 4, 3, rng, /*scaling=*/true);
    const std::string path = temp_path("model.bin");
    save_checkpoint(original, path);

    const ModelParams loaded = load_checkpoint(path);
    CHECK(loaded.entity_count() == original.entity_count());
    CHECK(loaded.relation_count() == original.relation_count());
    CHECK(loaded.k() == original.k());
    CHECK(loaded.scaling() == original.scaling());
    CHECK(loaded.entity_table() == original.entity_table());
    CHECK(loaded.relation_table() == original.relation_table());
    std::filesystem::remove_all(std::filesystem::path(path).parent_path());
}

TEST_CASE("checkpoint preserves the scaling flag") {
    Rng rng(78);
    const ModelParams ablated = init_params(3, 2, 2, rng, /*scaling=*/false);
    const std::string path = temp_path("ablated.bin");
    save_checkpoint(ablated, path);
    CHECK_FALSE(load_checkpoint(path).scaling());
    std::filesystem::remove_all(std::filesystem::path(path).parent_path());
}

TEST_CASE("checkpoint rejects bad files") {
    CHECK_THROWS_AS(load_checkpoint("/nonexistent/model.bin"), DataError);

    const std::string garbage = temp_path("garbage.bin");
    {
        std::ofstream out(garbage, std::ios::binary);
        out << "not a checkpoint at all";
    }
    CHECK_THROWS_AS(load_checkpoint(garbage), DataError);

    // valid header, truncated payload
    Rng rng(79);
    const ModelParams original = init_params(4, 2, 2, rng);
    const std::string path = temp_path("truncated.bin");
    save_checkpoint(original, path);
    const auto full_size = std::filesystem::file_size(path);
    std::filesystem::resize_file(path, full_size - 16);
    CHECK_THROWS_AS(load_checkpoint(path), DataError);
    std::filesystem::remove_all(std::filesystem::path(path).parent_path());
    std::filesystem::remove_all(std::filesystem::path(garbage).parent_path());
}
