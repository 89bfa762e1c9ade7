#pragma once

// Exhaustive search over rule tuples, scored by silhouette.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cacluster/catalog.hpp"
#include "cacluster/clustering.hpp"
#include "cacluster/metrics.hpp"

namespace cacluster {

// Ordered tuples of distinct rules, candidates taken in ascending order and
// tuples in lexicographic order; at most `budget` of them (0 = all).
inline std::vector<std::vector<Rule>> enumerate_tuples(std::vector<Rule> candidates, unsigned length,
                                                       std::size_t budget = 0) {
    if (length == 0) throw InvalidArgument("tuple length must be at least 1");
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (candidates.empty()) throw InvalidArgument("empty candidate rule set");
    std::vector<std::vector<Rule>> out;
    if (length > candidates.size()) return out;

    std::vector<std::size_t> pick;
    std::vector<bool> used(candidates.size(), false);
    auto full = [&] { return budget != 0 && out.size() >= budget; };
    // Depth-first in index order yields lexicographic tuples.
    auto rec = [&](auto&& self) -> void {
        if (full()) return;
        if (pick.size() == length) {
            std::vector<Rule> t;
            for (auto i : pick) t.push_back(candidates[i]);
            out.push_back(std::move(t));
            return;
        }
        for (std::size_t i = 0; i < candidates.size() && !full(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            pick.push_back(i);
            self(self);
            pick.pop_back();
            used[i] = false;
        }
    };
    rec(rec);
    return out;
}

struct SearchEntry {
    std::size_t index = 0;  // position in the enumeration
    std::vector<Rule> rules;
    bool ok = false;
    std::string error;
    ScoreReport scores;
};

struct SearchParams {
    unsigned split_size = 0;
    unsigned clusters = 0;
    unsigned max_cell_length = kDefaultMaxCellLength;
    unsigned threads = 1;
    EngineLimits limits{};
};

// Each tuple is one independent work item; results land in their own slot,
// so the outcome does not depend on the worker count.
inline std::vector<SearchEntry> evaluate_tuples(std::span<const BitString> objects, const FeatureMatrix& features,
                                                const std::vector<std::vector<Rule>>& tuples,
                                                const SearchParams& p) {
    std::vector<SearchEntry> out(tuples.size());
    parallel_for(tuples.size(), p.threads, [&](std::size_t i) {
        SearchEntry& e = out[i];
        e.index = i;
        e.rules = tuples[i];
        try {
            ClusterParams cp;
            cp.rules = tuples[i];
            cp.split_size = p.split_size;
            cp.clusters = p.clusters;
            cp.max_cell_length = p.max_cell_length;
            cp.limits = p.limits;
            auto r = cluster(objects, cp);
            e.scores = score(features, r.labels);
            e.ok = e.scores.silhouette.has_value();
            if (!e.ok) e.error = "silhouette undefined";
        } catch (const Error& err) {
            e.error = err.what();
        }
    });
    return out;
}

// Successful runs first, best silhouette first, enumeration order on ties.
inline std::vector<SearchEntry> rank_entries(std::vector<SearchEntry> entries) {
    std::stable_sort(entries.begin(), entries.end(), [](const SearchEntry& a, const SearchEntry& b) {
        if (a.ok != b.ok) return a.ok;
        if (a.ok && *a.scores.silhouette != *b.scores.silhouette) return *a.scores.silhouette > *b.scores.silhouette;
        return a.index < b.index;
    });
    return entries;
}

inline void write_leaderboard(std::ostream& os, std::span<const SearchEntry> ranked) {
    auto value = [](const std::optional<double>& v) {
        return v ? detail::format_double(*v) : std::string("OUT_OF_DOMAIN");
    };
    os << "# format=cacluster-leaderboard/1\n";
    os << "rank\trules\tstatus\tsilhouette\tdavies_bouldin\tcalinski_harabasz\tclusters\tdetail\n";
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        const auto& e = ranked[i];
        os << i + 1 << '\t';
        for (std::size_t k = 0; k < e.rules.size(); ++k) os << (k ? "," : "") << e.rules[k].decimal();
        if (e.ok) {
            os << "\tok\t" << value(e.scores.silhouette) << '\t' << value(e.scores.davies_bouldin) << '\t'
               << value(e.scores.calinski_harabasz) << '\t' << e.scores.clusters << "\t-\n";
        } else {
            os << "\tfailed\t-\t-\t-\t-\t" << e.error << '\n';
        }
    }
}

} // namespace cacluster
