#pragma once

#include "kpls/dataset.hpp"

#include <filesystem>
#include <random>
#include <string>

namespace test {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path path() const { return path_; }
    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    std::filesystem::path path_;
};

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// Path of the CLI binary under test (KPLSKIT_CLI env), empty if not set.
std::string cli_path();

/// Runs the CLI with the given argument string; returns the exit status.
/// Captured stdout+stderr goes to *output when provided.
int run_cli(const std::string& args, const TempDir& dir, std::string* output = nullptr);

kpls::Matrix random_matrix(std::mt19937_64& rng, kpls::Index rows, kpls::Index cols);
kpls::Vector random_vector(std::mt19937_64& rng, kpls::Index size);

kpls::Dataset random_dataset(std::mt19937_64& rng, kpls::Index rows, kpls::Index cols,
                             bool with_response = true);

} // namespace test
