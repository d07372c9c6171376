#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace atomlens::table {

enum class OutputFormat { dsv, kv };

OutputFormat parse_format(const std::string& name);

// Space-separated table with '#'-prefixed metadata header lines.
class Writer {
  public:
    Writer(std::string config_hash, std::uint64_t seed);

    void meta(const std::string& key, const std::string& value);
    void columns(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);
    void row_text(const std::vector<std::string>& cells);

    // key-value payload for OutputFormat::kv
    void kv(const std::string& key, double value);
    void kv_text(const std::string& key, const std::string& value);

    void save(const std::string& path, OutputFormat format) const;

  private:
    std::string config_hash_;
    std::uint64_t seed_;
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::pair<std::string, std::string>> kv_;
};

// deterministic text rendering of doubles (%.10g)
std::string format_double(double value);

// FNV-1a 64-bit hash, hex-encoded; used to fingerprint config files
std::string fnv1a_hex(const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace atomlens::table
