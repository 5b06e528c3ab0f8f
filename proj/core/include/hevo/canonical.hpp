#pragma once

#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "hevo/error.hpp"

namespace hevo {

// nlohmann::json keeps object keys in a std::map, so dump() without indentation
// is already key-sorted and whitespace-free: that is the canonical encoding.
using Json = nlohmann::json;

inline std::string canonical(const Json& j) { return j.dump(); }

template <typename T>
std::string canonical_of(const T& value) {
  return Json(value).dump();
}

// Parses text as JSON; malformed input or trailing garbage raises
// Error(code) with the given context in the message.
Json parse_json(std::string_view text, ErrorCode code, std::string_view context);

std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t value);

// Deterministic child seed derived from a parent seed and a path of indices.
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

// Uniform draw in [0, n) from a seeded generator; n > 0.
std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t n);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);
std::vector<std::string> split_lines(std::string_view text);

}  // namespace hevo
