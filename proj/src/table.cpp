#include "atomlens/table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "atomlens/errors.hpp"

namespace atomlens::table {

OutputFormat parse_format(const std::string& name) {
    if (name == "dsv") return OutputFormat::dsv;
    if (name == "kv") return OutputFormat::kv;
    throw ConfigError("unknown output format '" + name + "' (expected dsv or kv)");
}

Writer::Writer(std::string config_hash, std::uint64_t seed)
    : config_hash_(std::move(config_hash)), seed_(seed) {}

void Writer::meta(const std::string& key, const std::string& value) {
    meta_.emplace_back(key, value);
}

void Writer::columns(const std::vector<std::string>& names) { columns_ = names; }

void Writer::row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_double(v));
    rows_.push_back(std::move(cells));
}

void Writer::row_text(const std::vector<std::string>& cells) { rows_.push_back(cells); }

void Writer::kv(const std::string& key, double value) {
    kv_.emplace_back(key, format_double(value));
}

void Writer::kv_text(const std::string& key, const std::string& value) {
    kv_.emplace_back(key, value);
}

void Writer::save(const std::string& path, OutputFormat format) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write output file: " + path);
    out << "# config_hash " << config_hash_ << "\n";
    out << "# seed " << seed_ << "\n";
    for (const auto& [k, v] : meta_) out << "# " << k << " " << v << "\n";
    for (const auto& [k, v] : kv_) out << k << " " << v << "\n";
    if (rows_.empty()) {
        if (!out) throw IoError("write failed: " + path);
        return;
    }
    if (format == OutputFormat::kv) {
        // tables rendered as key-value rows: r<i>.<column> <value>
        for (std::size_t r = 0; r < rows_.size(); ++r)
            for (std::size_t i = 0; i < rows_[r].size(); ++i) {
                std::string key = (i < columns_.size()) ? columns_[i]
                                                        : "c" + std::to_string(i);
                out << "r" << r << "." << key << " " << rows_[r][i] << "\n";
            }
    } else {
        if (!columns_.empty()) {
            out << "# columns:";
            for (const auto& c : columns_) out << " " << c;
            out << "\n";
        }
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << (i ? " " : "") << row[i];
            out << "\n";
        }
    }
    if (!out) throw IoError("write failed: " + path);
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : bytes) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace atomlens::table
