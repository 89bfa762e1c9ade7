#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cacluster/catalog_data.hpp"
#include "cacluster/digest.hpp"
#include "cacluster/rule_analysis.hpp"
#include "cacluster/text.hpp"

namespace cacluster {

inline constexpr unsigned kCatalogMinCells = 6;
inline constexpr unsigned kCatalogMaxCells = 13;

struct CatalogRecord {
    unsigned cells;
    unsigned criterion;  // 2 or 3
    Rule rule;
};

struct CatalogEntry {
    unsigned cells = 0;
    double l1 = 0.0;
    std::size_t l2 = 0;
    // Stricter Criterion 3 used for the smallest widths, where the generic
    // cycle cap admits too many rules.
    std::optional<Criterion3Params> small_n_criterion3;
    std::vector<Rule> criterion2;
    std::vector<Rule> criterion3;
    std::vector<Rule> candidates;  // union, ascending

    Criterion3Params criterion3_params() const { return Criterion3Params{l2}; }
};

class RuleCatalog {
public:
    static RuleCatalog parse(std::string_view text) {
        RuleCatalog cat;
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = detail::trim(text.substr(start, end - start));
            start = end + 1;
            ++line_no;
            if (line.empty()) continue;
            try {
                if (line.front() == '#') {
                    cat.parse_header(line.substr(1));
                    continue;
                }
                auto f = detail::split_fields(line, '\t');
                if (f.size() != 3) throw ParseError("expected 3 tab-separated fields");
                CatalogRecord rec{detail::parse_number<unsigned>(f[0], "cell count"),
                                  detail::parse_number<unsigned>(f[1], "criterion"),
                                  Rule::from_decimal(detail::parse_number<std::uint32_t>(f[2], "rule"))};
                if (rec.criterion != 2 && rec.criterion != 3) throw ParseError("criterion must be 2 or 3");
                cat.records_.push_back(rec);
            } catch (const ParseError& e) {
                throw ParseError("catalog line " + std::to_string(line_no) + ": " + e.message());
            }
        }
        for (const auto& rec : cat.records_) {
            auto it = cat.entries_.find(rec.cells);
            if (it == cat.entries_.end())
                throw ParseError("catalog record for n=" + std::to_string(rec.cells) + " has no parameter line");
            (rec.criterion == 2 ? it->second.criterion2 : it->second.criterion3).push_back(rec.rule);
            it->second.candidates.push_back(rec.rule);
        }
        for (auto& [n, e] : cat.entries_) {
            std::sort(e.candidates.begin(), e.candidates.end());
            e.candidates.erase(std::unique(e.candidates.begin(), e.candidates.end()), e.candidates.end());
        }
        return cat;
    }

    // The catalog compiled into the library, checked against its digest.
    static const RuleCatalog& builtin() {
        static const RuleCatalog cat = [] {
            if (sha256_hex(catalog_data::kText) != catalog_data::kSha256)
                throw Error("embedded rule catalog fails its checksum");
            return parse(catalog_data::kText);
        }();
        return cat;
    }

    const std::vector<CatalogRecord>& records() const { return records_; }

    bool contains(unsigned cells) const { return entries_.contains(cells); }

    const CatalogEntry& entry(unsigned cells) const {
        auto it = entries_.find(cells);
        if (it == entries_.end())
            throw CatalogRangeError("no catalog entry for n=" + std::to_string(cells) +
                                    "; supply a custom rule list with explicit l1/l2");
        return it->second;
    }

    std::vector<unsigned> cell_counts() const {
        std::vector<unsigned> out;
        for (const auto& [n, e] : entries_) out.push_back(n);
        return out;
    }

private:
    void parse_header(std::string_view body) {
        body = detail::trim(body);
        if (!body.starts_with("n=")) return;  // free-text comment
        CatalogEntry e;
        std::optional<std::uint64_t> cap;
        std::optional<double> fraction;
        bool have_l1 = false, have_l2 = false;
        for (auto token : detail::split_fields(body, ' ')) {
            if (token.empty()) continue;
            auto eq = token.find('=');
            if (eq == std::string_view::npos) throw ParseError("malformed parameter '" + std::string(token) + "'");
            auto key = token.substr(0, eq);
            auto val = token.substr(eq + 1);
            if (key == "n") e.cells = detail::parse_number<unsigned>(val, "n");
            else if (key == "l1") { e.l1 = detail::parse_number<double>(val, "l1"); have_l1 = true; }
            else if (key == "l2") { e.l2 = detail::parse_number<std::size_t>(val, "l2"); have_l2 = true; }
            else if (key == "c3_cap") cap = detail::parse_number<std::uint64_t>(val, "c3_cap");
            else if (key == "c3_fraction") fraction = detail::parse_number<double>(val, "c3_fraction");
            else throw ParseError("unknown parameter '" + std::string(key) + "'");
        }
        if (!have_l1 || !have_l2) throw ParseError("parameter line needs l1 and l2");
        if (cap.has_value() != fraction.has_value()) throw ParseError("c3_cap and c3_fraction go together");
        if (cap) e.small_n_criterion3 = Criterion3Params{e.l2, *cap, *fraction};
        const unsigned n = e.cells;
        if (!entries_.emplace(n, std::move(e)).second) throw ParseError("duplicate parameter line");
    }

    std::vector<CatalogRecord> records_;
    std::map<unsigned, CatalogEntry> entries_;
};

// Candidate rules for an n-cell split, ascending by decimal value.
inline const std::vector<Rule>& candidate_rules(unsigned cells) {
    if (cells < kCatalogMinCells || cells > kCatalogMaxCells)
        throw CatalogRangeError("candidate rules are catalogued for 6 <= n <= 13 only (got n=" +
                                std::to_string(cells) + "); supply a custom rule list with explicit l1/l2");
    return RuleCatalog::builtin().entry(cells).candidates;
}

} // namespace cacluster
