#include "support/paths.hpp"

#include <atomic>
#include <chrono>

namespace testsupport {

std::filesystem::path source_root() { return PDNET_SOURCE_DIR; }

std::filesystem::path fixture(const std::string& relative) {
    return source_root() / "tests" / "fixtures" / relative;
}

std::filesystem::path data_file(const std::string& relative) {
    return source_root() / "data" / relative;
}

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("pdnet_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace testsupport
