#pragma once

#include "kzu/suite.hpp"

#include <filesystem>
#include <optional>
#include <string>

namespace kzu::cli {

// Bumping this invalidates every stored entry (it is part of each key).
inline constexpr const char* kCacheVersion = "kzu-cache-3";

// Content-addressed JSON store: an entry's file name is the SHA-256 of the version and of the
// content that determines it. A disabled cache (empty directory) never hits.
class Cache {
public:
    explicit Cache(std::filesystem::path dir = {});

    bool enabled() const { return !dir_.empty(); }
    static std::string key(const std::string& kind, const Json& content);

    // Corrupt or mismatched entries are reported on stderr and treated as misses.
    std::optional<Json> load(const std::string& kind, const Json& content);
    void store(const std::string& kind, const Json& content, const Json& payload);

    int hits() const { return hits_; }
    int misses() const { return misses_; }

private:
    std::filesystem::path path_for(const std::string& kind, const Json& content) const;

    std::filesystem::path dir_;
    int hits_ = 0;
    int misses_ = 0;
};

// Write to a temporary file in the same directory, then rename over the target.
void write_atomic(const std::filesystem::path& path, const std::string& text);

// {algebra, weights, level, points, invariants, basis_matrix}; basis = invariants * basis_matrix.
Json block_space_to_json(const Instance& inst, const BlockSpace& bs);
BlockSpace block_space_from_json(const Instance& inst, const Json& j);

}  // namespace kzu::cli
