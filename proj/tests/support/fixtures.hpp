#pragma once

#include <filesystem>
#include <string>

namespace fixtures {

inline std::string path(const std::string& name) {
    return std::string(OPSUM_FIXTURE_DIR) + "/" + name;
}

// scratch directory for tests that write artifacts
inline std::string scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("opsum_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir.string();
}

}  // namespace fixtures
