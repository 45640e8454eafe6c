#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace holodepth {

/// Ordered `key=value` lines as used by every sidecar and metadata file.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

std::string format_key_values(const KeyValues& entries);

/// Parses `key=value` lines; blank lines and '#' comments are skipped.
/// Throws ParseError with the byte offset of the first malformed line.
std::map<std::string, std::string> parse_key_values(const std::string& text);

std::string read_text_file(const std::filesystem::path& path);
std::vector<unsigned char> read_binary_file(const std::filesystem::path& path);

/// Writes via a temporary sibling file and rename, so readers never see a
/// half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::string& bytes);

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double value);
double parse_double(const std::string& text, const std::string& what);
long long parse_int(const std::string& text, const std::string& what);

/// Looks up a required key; throws ParseError naming it when absent.
const std::string& require_key(const std::map<std::string, std::string>& kv, const std::string& key,
                               const std::string& file);

}  // namespace holodepth
