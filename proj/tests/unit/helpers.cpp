#include "helpers.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <sys/wait.h>
#include <unistd.h>

namespace test {

namespace {
std::atomic<int> counter{0};
}

TempDir::TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("kplskit-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
    if (!out) throw std::runtime_error("cannot write test file " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read test file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string cli_path() {
    const char* env = std::getenv("KPLSKIT_CLI");
    return env ? env : "";
}

int run_cli(const std::string& args, const TempDir& dir, std::string* output) {
    const std::string capture = dir.file("cli-output-" + std::to_string(counter++) + ".txt");
    const std::string command = "'" + cli_path() + "' " + args + " > '" + capture + "' 2>&1";
    const int status = std::system(command.c_str());
    if (output) *output = read_file(capture);
    if (WIFEXITED(status)) return WEXITSTATUS(status);
    return -1;
}

kpls::Matrix random_matrix(std::mt19937_64& rng, kpls::Index rows, kpls::Index cols) {
    std::normal_distribution<double> normal;
    kpls::Matrix m(rows, cols);
    for (kpls::Index i = 0; i < rows; ++i)
        for (kpls::Index j = 0; j < cols; ++j) m(i, j) = normal(rng);
    return m;
}

kpls::Vector random_vector(std::mt19937_64& rng, kpls::Index size) {
    std::normal_distribution<double> normal;
    kpls::Vector v(size);
    for (kpls::Index i = 0; i < size; ++i) v[i] = normal(rng);
    return v;
}

kpls::Dataset random_dataset(std::mt19937_64& rng, kpls::Index rows, kpls::Index cols,
                             bool with_response) {
    kpls::Dataset data;
    data.features = random_matrix(rng, rows, cols);
    if (with_response) data.response = random_vector(rng, rows);
    for (kpls::Index i = 0; i < rows; ++i) data.sample_ids.push_back("s" + std::to_string(i + 1));
    for (kpls::Index j = 0; j < cols; ++j)
        data.feature_names.push_back("f" + std::to_string(j + 1));
    return data;
}

} // namespace test
