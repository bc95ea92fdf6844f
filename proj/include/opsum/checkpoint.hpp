#pragma once

#include <map>
#include <string>
#include <vector>

#include "opsum/math.hpp"

namespace opsum {

// Self-describing binary tensor container shared by all model checkpoints.
// Layout: magic, version, JSON metadata (kind, config scalars/strings,
// tensor manifest), then the raw row-major float64 payload. Save/load is
// bit-exact.
struct Checkpoint {
    std::string kind;
    std::map<std::string, std::string> strings;
    std::map<std::string, double> scalars;
    std::map<std::string, std::vector<std::string>> string_lists;
    std::map<std::string, Vec> number_lists;
    // insertion-ordered tensor list
    std::vector<std::pair<std::string, Mat>> tensors;

    void add_tensor(const std::string& name, Mat m) { tensors.emplace_back(name, std::move(m)); }
    const Mat& tensor(const std::string& name) const;
    bool has_tensor(const std::string& name) const;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace opsum
