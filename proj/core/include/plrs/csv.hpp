#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

namespace plrs {

/// Shortest decimal form that round-trips a double (17 significant digits).
std::string format_double(double value);

/// Comment header stamped on every CSV artifact: digest, seed, tool version.
void write_csv_preamble(std::ostream& out, const std::string& config_digest,
                        std::uint64_t seed);

/// Writes `text` to `path` through a temporary file renamed on success, so
/// failed runs leave no partial outputs behind.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace plrs
