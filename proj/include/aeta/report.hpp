#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "aeta/common.hpp"

namespace aeta::report {

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hash_hex(const std::string& s) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(s)));
    return buf;
}

// Stable shortest-roundtrip formatting so identical runs emit identical bytes.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Temp file in the target directory, then rename: readers never observe a
// partial file.
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw io_error("cannot create directory " + path.parent_path().string());
    }
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw io_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw io_error("rename to " + path.string() + " failed");
    }
}

// One result row. JSON output always carries the canonical fields
// {quantity, params_hash, n, value, std_error, trials, seed}; anything
// quantity-specific rides along in `extra`.
struct Record {
    std::string quantity;
    std::string params_hash;
    std::int64_t n = 0;
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t trials = 0;
    std::uint64_t seed = 0;
    nlohmann::json extra = nlohmann::json::object();
};

inline nlohmann::json record_json(const Record& r) {
    nlohmann::json j = r.extra;
    j["quantity"] = r.quantity;
    j["params_hash"] = r.params_hash;
    j["n"] = r.n;
    j["value"] = r.value;
    j["std_error"] = r.std_error;
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    return j;
}

inline std::string records_json_text(const std::vector<Record>& records) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : records) arr.push_back(record_json(r));
    return arr.dump(2) + "\n";
}

// CSV with a timestamped first line (excluded from the determinism contract)
// and a params_hash echo so rows from different configs cannot be mixed
// silently.
class Csv {
public:
    Csv(std::string params_hash, std::vector<std::string> columns)
        : params_hash_(std::move(params_hash)), columns_(std::move(columns)) {}

    void add_row(const std::vector<std::string>& cells) {
        if (cells.size() != columns_.size())
            throw validation_error("csv row width mismatch");
        rows_.push_back(cells);
    }

    std::string str() const {
        std::string out = "# generated_at=" + timestamp_utc() + "\n";
        out += "# params_hash=" + params_hash_ + "\n";
        for (std::size_t i = 0; i < columns_.size(); ++i)
            out += (i ? "," : "") + columns_[i];
        out += ",params_hash\n";
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
            out += "," + params_hash_ + "\n";
        }
        return out;
    }

    // Everything after the timestamp line; byte-identical across reruns with
    // the same master seed regardless of the worker count.
    static std::string body(const std::string& csv_text) {
        const auto pos = csv_text.find('\n');
        return pos == std::string::npos ? csv_text : csv_text.substr(pos + 1);
    }

private:
    std::string params_hash_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace aeta::report
