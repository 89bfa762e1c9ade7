#pragma once

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cacluster/ca_core.hpp"
#include "cacluster/digest.hpp"
#include "cacluster/encoding.hpp"
#include "cacluster/io.hpp"
#include "cacluster/text.hpp"

namespace cacluster {

inline constexpr std::string_view kStateDirEnv = "CACLUSTER_STATE_DIR";

// Keyed on content, not file names: a renamed input reuses its state, an
// edited one does not.
inline std::string dataset_fingerprint(std::string_view input_bytes, std::string_view plan_text,
                                       unsigned split_size, unsigned clusters) {
    Sha256 h;
    auto field = [&](std::string_view s) {
        h.update(std::to_string(s.size())).update(":").update(s).update(";");
    };
    field("cacluster-fingerprint/1");
    field(input_bytes);
    field(plan_text);
    field(std::to_string(split_size));
    field(std::to_string(clusters));
    return h.hex();
}

struct SavedState {
    std::string fingerprint;
    std::vector<Rule> rules;
    unsigned split_size = 0;
    unsigned clusters = 0;
    std::optional<double> silhouette;
    std::optional<double> davies_bouldin;
    std::optional<double> calinski_harabasz;
    std::string created;
    std::string tool_version;

    bool operator==(const SavedState&) const = default;

    std::string to_text() const {
        auto value = [](const std::optional<double>& v) {
            return v ? detail::format_double(*v) : std::string("OUT_OF_DOMAIN");
        };
        std::ostringstream os;
        os << "format=cacluster-state/1\n"
           << "fingerprint=" << fingerprint << "\n"
           << "rules=" << join_rules(rules) << "\n"
           << "split_size=" << split_size << "\n"
           << "clusters=" << clusters << "\n"
           << "silhouette=" << value(silhouette) << "\n"
           << "davies_bouldin=" << value(davies_bouldin) << "\n"
           << "calinski_harabasz=" << value(calinski_harabasz) << "\n"
           << "created=" << created << "\n"
           << "tool_version=" << tool_version << "\n";
        return os.str();
    }

    static SavedState parse(std::string_view text) {
        std::map<std::string, std::string, std::less<>> kv;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            auto line = detail::trim(text.substr(start, end - start));
            start = end + 1;
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string_view::npos) throw ParseError("state record line without '='");
            kv.emplace(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
        }
        auto get = [&](std::string_view key) -> const std::string& {
            auto it = kv.find(key);
            if (it == kv.end()) throw ParseError("state record lacks '" + std::string(key) + "'");
            return it->second;
        };
        auto score = [&](std::string_view key) -> std::optional<double> {
            const auto& v = get(key);
            if (v == "OUT_OF_DOMAIN") return std::nullopt;
            return detail::parse_number<double>(v, key);
        };
        if (get("format") != "cacluster-state/1") throw ParseError("unsupported state record format");
        SavedState s;
        s.fingerprint = get("fingerprint");
        s.rules = parse_rules(get("rules"));
        s.split_size = detail::parse_number<unsigned>(get("split_size"), "split_size");
        s.clusters = detail::parse_number<unsigned>(get("clusters"), "clusters");
        s.silhouette = score("silhouette");
        s.davies_bouldin = score("davies_bouldin");
        s.calinski_harabasz = score("calinski_harabasz");
        s.created = get("created");
        s.tool_version = get("tool_version");
        return s;
    }

    static std::string join_rules(const std::vector<Rule>& rules) {
        std::string s;
        for (std::size_t i = 0; i < rules.size(); ++i) s += (i ? "," : "") + std::to_string(rules[i].decimal());
        return s;
    }

    static std::vector<Rule> parse_rules(std::string_view text) {
        std::vector<Rule> out;
        for (auto f : detail::split_fields(text, ','))
            out.push_back(Rule::from_decimal(detail::parse_number<std::uint32_t>(detail::trim(f), "rule")));
        return out;
    }
};

inline std::string utc_timestamp() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// One record file per fingerprint. Only the coordinating thread writes.
class StateStore {
public:
    explicit StateStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

    static std::filesystem::path default_dir() {
        const char* env = std::getenv(std::string(kStateDirEnv).c_str());
        return env && *env ? std::filesystem::path(env) : std::filesystem::path(".cacluster-state");
    }

    const std::filesystem::path& dir() const { return dir_; }

    std::filesystem::path path_for(std::string_view fingerprint) const {
        return dir_ / (std::string(fingerprint) + ".state");
    }

    std::optional<SavedState> load(std::string_view fingerprint) const {
        auto p = path_for(fingerprint);
        std::error_code ec;
        if (!std::filesystem::exists(p, ec)) return std::nullopt;
        auto s = SavedState::parse(read_file(p));
        if (s.fingerprint != fingerprint) throw ParseError("state file '" + p.string() + "' has a foreign fingerprint");
        return s;
    }

    void save(const SavedState& state) const {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create state directory '" + dir_.string() + "': " + ec.message());
        write_file_atomic(path_for(state.fingerprint), state.to_text());
    }

private:
    std::filesystem::path dir_;
};

} // namespace cacluster
