#pragma once

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "sri/synthesis.hpp"

// Helpers shared by the unit and acceptance suites.

namespace sri_test {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

// Loads tests/fixtures/corpus: every file listed in manifest.json, with its
// repo and star count.
inline std::vector<sri::CorpusFile> load_fixture_corpus() {
    const std::filesystem::path dir =
        std::filesystem::path(SRI_TEST_DATA_DIR) / "fixtures" / "corpus";
    const auto manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));

    std::vector<sri::CorpusFile> corpus;
    for (const auto& [name, meta] : manifest.items()) {
        sri::CorpusFile file;
        file.path = name;
        file.content = read_file(dir / name);
        file.repo = meta.at("repo").get<std::string>();
        file.stars = meta.at("stars").get<long long>();
        corpus.push_back(std::move(file));
    }
    if (corpus.size() < 50)
        throw std::runtime_error("fixture corpus unexpectedly small");
    return corpus;
}

}  // namespace sri_test
