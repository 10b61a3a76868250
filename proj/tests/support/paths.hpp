#pragma once

#include <filesystem>
#include <string>

namespace testsupport {

std::filesystem::path source_root();
std::filesystem::path fixture(const std::string& relative);
std::filesystem::path data_file(const std::string& relative);

// Unique directory under the system temp root, removed on destruction.
class TempDir {
  public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

  private:
    std::filesystem::path path_;
};

}  // namespace testsupport
