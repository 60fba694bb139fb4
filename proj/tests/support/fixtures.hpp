#pragma once

#include <filesystem>
#include <string>

#include <unistd.h>

#include "attackscore/catalog.hpp"
#include "attackscore/labels.hpp"
#include "attackscore/stix.hpp"

namespace fixtures {

inline std::filesystem::path data_dir() { return ATTACKSCORE_DATA_DIR; }
inline std::filesystem::path sample_bundle() { return data_dir() / "fixtures/sample_enterprise_bundle.json"; }
inline std::filesystem::path minimal_bundle() { return data_dir() / "fixtures/minimal_bundle.json"; }
inline std::filesystem::path revoked_bundle() { return data_dir() / "fixtures/revoked_bundle.json"; }
inline std::filesystem::path seed_labels() { return data_dir() / "seed_labels.tsv"; }
inline std::filesystem::path reference_assessment() { return data_dir() / "reference.assessment"; }
inline std::filesystem::path golden(const std::string& name) { return data_dir() / "golden" / name; }

inline attackscore::LabeledCatalog sample_catalog()
{
    const auto catalog = attackscore::load_stix_bundle(sample_bundle());
    const auto labels = attackscore::load_labels(seed_labels());
    return attackscore::resolve(catalog, labels.labels);
}

// The sample catalog padded with synthetic techniques to exactly `total`
// scoreable entries.
inline attackscore::LabeledCatalog padded_catalog(std::size_t total)
{
    auto catalog = attackscore::load_stix_bundle(sample_bundle());
    for (int n = 9000; catalog.techniques.size() < total; ++n) {
        catalog.techniques.push_back(
            {"T" + std::to_string(n), "Synthetic " + std::to_string(n), {"execution"}, false, false});
    }
    const auto labels = attackscore::load_labels(seed_labels());
    return attackscore::resolve(catalog, labels.labels);
}

// Unique scratch directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("attackscore-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() { std::filesystem::remove_all(path_); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
