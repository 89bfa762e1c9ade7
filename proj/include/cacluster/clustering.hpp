#pragma once

// Three-stage clustering on CA cycles.
//   1. Cut every encoded object into vertical splits and put each split
//      value on its cycle under a reversible rule.
//   2. Rank each split's cycles by the median of their data, replace split
//      values by Gray codes of those ranks and concatenate; repeat while the
//      result is too wide, then place the merged objects on cycles once more.
//   3. Cut the ranked final cycles at the largest median gaps.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "cacluster/bit_string.hpp"
#include "cacluster/ca_core.hpp"
#include "cacluster/encoding.hpp"
#include "cacluster/parallel.hpp"

namespace cacluster {

inline constexpr unsigned kDefaultMaxCellLength = 16;
inline constexpr unsigned kDefaultMaxDepth = 8;

struct SplitLayout {
    std::size_t bits = 0;                 // p
    unsigned split_size = 0;              // n1 as requested
    std::vector<unsigned> widths;
    std::vector<std::size_t> offsets;
    bool oversized = false;               // n1 > p, collapsed to one split

    std::size_t count() const { return widths.size(); }
};

inline SplitLayout make_layout(std::size_t bits, unsigned split_size, const EngineLimits& limits = {}) {
    if (bits == 0) throw InvalidArgument("objects have no bits");
    if (split_size == 0) throw InvalidArgument("split size must be at least 1");
    const unsigned cap = std::min(limits.max_cells, kHardMaxCells);
    if (split_size > cap)
        throw CapacityError("split size " + std::to_string(split_size) + " exceeds the cell-length cap of " +
                            std::to_string(cap));
    SplitLayout l;
    l.bits = bits;
    l.split_size = split_size;
    l.oversized = split_size > bits;
    for (std::size_t pos = 0; pos < bits; pos += split_size) {
        l.offsets.push_back(pos);
        l.widths.push_back(static_cast<unsigned>(std::min<std::size_t>(split_size, bits - pos)));
    }
    return l;
}

// values[i][j] = object j's piece in split i.
inline std::vector<std::vector<std::uint64_t>> vertical_split(std::span<const BitString> objects,
                                                              const SplitLayout& layout) {
    std::vector<std::vector<std::uint64_t>> values(layout.count());
    for (std::size_t i = 0; i < layout.count(); ++i) {
        values[i].reserve(objects.size());
        for (const auto& o : objects) {
            if (o.size() != layout.bits) throw InvalidArgument("objects differ in length");
            values[i].push_back(o.extract(layout.offsets[i], layout.widths[i]));
        }
    }
    return values;
}

inline BitString gray_code(std::uint64_t index, unsigned width) {
    if (width == 0 || width > 64 || (width < 64 && (index >> width) != 0))
        throw InvalidArgument("index " + std::to_string(index) + " does not fit a " + std::to_string(width) +
                              "-bit Gray code");
    BitString b;
    b.append(gray_encode(index), width);
    return b;
}

inline unsigned gray_width(std::size_t cycle_count) {
    unsigned k = 0;
    while ((std::uint64_t{1} << k) < cycle_count) ++k;
    return std::max(1u, k);
}

struct SplitAssignment {
    unsigned width;
    CyclePartition cycles;                     // data-bearing cycles only
    std::vector<std::uint32_t> cycle_of_object;
};

inline SplitAssignment assign_cycles(Rule rule, unsigned width, std::span<const std::uint64_t> values,
                                     const EngineLimits& limits = {}) {
    CyclePartition part = orbit_membership(rule, width, values, limits);
    std::vector<std::uint32_t> idx;
    idx.reserve(values.size());
    for (auto v : values) idx.push_back(static_cast<std::uint32_t>(*part.cycle_of(v)));
    return SplitAssignment{width, std::move(part), std::move(idx)};
}

namespace detail {

inline void require_reversible(Rule rule, unsigned width, const EngineLimits& limits) {
    if (!is_reversible(rule, width, limits))
        throw IrreversibleError("rule " + std::to_string(rule.decimal()) + " is not reversible at split width " +
                                    std::to_string(width),
                                width);
}

} // namespace detail

inline std::vector<SplitAssignment> stage1(const std::vector<std::vector<std::uint64_t>>& split_values,
                                           const SplitLayout& layout, Rule rule, unsigned threads = 1,
                                           const EngineLimits& limits = {}) {
    std::vector<unsigned> widths = layout.widths;
    std::sort(widths.begin(), widths.end());
    widths.erase(std::unique(widths.begin(), widths.end()), widths.end());
    for (unsigned w : widths) detail::require_reversible(rule, w, limits);

    std::vector<std::optional<SplitAssignment>> slots(layout.count());
    parallel_for(layout.count(), threads, [&](std::size_t i) {
        slots[i].emplace(assign_cycles(rule, layout.widths[i], split_values[i], limits));
    });
    std::vector<SplitAssignment> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

struct RankedSplit {
    unsigned width = 0;
    std::vector<std::uint64_t> cycle_minima;    // by rank
    std::vector<double> medians;                // by rank, non-decreasing
    std::vector<std::size_t> sizes;             // data objects per ranked cycle
    std::vector<std::uint32_t> rank_of_object;
    unsigned code_width = 1;

    std::size_t cycle_count() const { return medians.size(); }
};

inline double median_of(std::vector<std::uint64_t>& v) {
    std::sort(v.begin(), v.end());
    std::size_t m = v.size() / 2;
    if (v.size() % 2) return static_cast<double>(v[m]);
    return (static_cast<double>(v[m - 1]) + static_cast<double>(v[m])) / 2.0;
}

// Orders a split's cycles by the median of the data values they hold
// (with multiplicity); equal medians fall back to the cycle minimum.
inline RankedSplit rank_cycles_by_median(const SplitAssignment& a, std::span<const std::uint64_t> values) {
    const std::size_t q = a.cycles.size();
    std::vector<std::vector<std::uint64_t>> members(q);
    for (std::size_t j = 0; j < values.size(); ++j) members[a.cycle_of_object[j]].push_back(values[j]);

    std::vector<double> med(q);
    for (std::size_t c = 0; c < q; ++c) {
        if (members[c].empty()) throw InvalidArgument("cycle without data objects");
        med[c] = median_of(members[c]);
    }
    std::vector<std::uint32_t> order(q);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t x, std::uint32_t y) {
        if (med[x] != med[y]) return med[x] < med[y];
        return a.cycles.cycle(x).front() < a.cycles.cycle(y).front();
    });

    RankedSplit r;
    r.width = a.width;
    r.code_width = gray_width(q);
    std::vector<std::uint32_t> rank_of_cycle(q);
    for (std::uint32_t k = 0; k < q; ++k) {
        rank_of_cycle[order[k]] = k;
        r.cycle_minima.push_back(a.cycles.cycle(order[k]).front());
        r.medians.push_back(med[order[k]]);
        r.sizes.push_back(members[order[k]].size());
    }
    r.rank_of_object.reserve(values.size());
    for (auto c : a.cycle_of_object) r.rank_of_object.push_back(rank_of_cycle[c]);
    return r;
}

// Concatenates each object's per-split Gray-coded ranks.
inline std::vector<BitString> merge_ranks(std::span<const RankedSplit> splits, std::size_t objects) {
    std::vector<BitString> merged(objects);
    for (const auto& s : splits)
        for (std::size_t j = 0; j < objects; ++j) merged[j].append(gray_encode(s.rank_of_object[j]), s.code_width);
    return merged;
}

// Stage-1 rules are the first rule followed by the third onward, used one
// per recursion level and wrapped around; the second rule drives the final
// pass. With a single rule the final pass is the identity, so every distinct
// merged object is its own cycle.
struct RuleSchedule {
    std::vector<Rule> split_rules;
    Rule final_rule = Rule::identity();

    static RuleSchedule from_list(std::span<const Rule> rules) {
        if (rules.empty()) throw InvalidArgument("rule list is empty");
        RuleSchedule s;
        s.split_rules.push_back(rules[0]);
        for (std::size_t i = 2; i < rules.size(); ++i) s.split_rules.push_back(rules[i]);
        if (rules.size() > 1) s.final_rule = rules[1];
        return s;
    }

    Rule level_rule(unsigned level) const { return split_rules[level % split_rules.size()]; }
};

struct LevelTrace {
    unsigned level = 0;
    Rule rule;
    SplitLayout layout;
    std::vector<RankedSplit> splits;
    std::vector<BitString> merged;

    std::size_t merged_bits() const { return merged.empty() ? 0 : merged.front().size(); }
};

inline LevelTrace run_level(std::span<const BitString> objects, unsigned split_size, Rule rule, unsigned level,
                            unsigned threads, const EngineLimits& limits) {
    LevelTrace tr;
    tr.level = level;
    tr.rule = rule;
    tr.layout = make_layout(objects.empty() ? 0 : objects.front().size(), split_size, limits);
    auto values = vertical_split(objects, tr.layout);
    auto assignments = stage1(values, tr.layout, rule, threads, limits);
    for (std::size_t i = 0; i < assignments.size(); ++i)
        tr.splits.push_back(rank_cycles_by_median(assignments[i], values[i]));
    tr.merged = merge_ranks(tr.splits, objects.size());
    return tr;
}

struct StageTwoState {
    std::vector<LevelTrace> levels;
    Rule final_rule;
    RankedSplit final;          // final cycles ranked by median; width is n2

    unsigned n2() const { return final.width; }
    unsigned depth() const { return static_cast<unsigned>(levels.size()) - 1; }
    std::size_t cycle_count() const { return final.cycle_count(); }
};

struct StageTwoParams {
    unsigned split_size = 0;
    unsigned max_cell_length = kDefaultMaxCellLength;
    unsigned max_depth = kDefaultMaxDepth;
    unsigned threads = 1;
    EngineLimits limits{};
};

inline StageTwoState stage2(LevelTrace first, const RuleSchedule& schedule, const StageTwoParams& p) {
    if (p.max_cell_length == 0 || p.max_cell_length > std::min(p.limits.max_cells, kHardMaxCells))
        throw InvalidArgument("max cell length must be in [1, " +
                              std::to_string(std::min(p.limits.max_cells, kHardMaxCells)) + "]");
    StageTwoState st;
    st.levels.push_back(std::move(first));
    while (st.levels.back().merged_bits() > p.max_cell_length) {
        unsigned level = static_cast<unsigned>(st.levels.size());
        if (level > p.max_depth)
            throw DepthExceededError("merged objects still have " + std::to_string(st.levels.back().merged_bits()) +
                                     " bits after " + std::to_string(p.max_depth) +
                                     " recursion levels; the rules probably put most values on distinct cycles "
                                     "(try other rules, a smaller split size or a larger max cell length)");
        const auto& prev = st.levels.back().merged;
        st.levels.push_back(run_level(prev, p.split_size, schedule.level_rule(level), level, p.threads, p.limits));
    }

    const auto& merged = st.levels.back().merged;
    const auto n2 = static_cast<unsigned>(st.levels.back().merged_bits());
    std::vector<std::uint64_t> values;
    values.reserve(merged.size());
    for (const auto& m : merged) values.push_back(m.extract(0, n2));
    st.final_rule = schedule.final_rule;
    detail::require_reversible(st.final_rule, n2, p.limits);
    st.final = rank_cycles_by_median(assign_cycles(st.final_rule, n2, values, p.limits), values);
    return st;
}

struct StageThreeResult {
    std::vector<std::size_t> cuts;      // cut after rank c, ascending
    std::vector<unsigned> cycle_labels; // per final rank, 1-based
};

// Cuts the ranked cycles at the k-1 largest consecutive median gaps, earliest
// boundary first on ties.
inline StageThreeResult partition_by_median_gaps(std::span<const double> medians, unsigned clusters) {
    if (clusters < 1) throw InvalidArgument("cluster count must be at least 1");
    const std::size_t u = medians.size();
    if (u < clusters)
        throw InsufficientCyclesError("only " + std::to_string(u) + " data-bearing cycles for " +
                                      std::to_string(clusters) +
                                      " clusters; try different rules or a different split size");
    std::vector<std::size_t> boundaries(u - 1);
    std::iota(boundaries.begin(), boundaries.end(), std::size_t{0});
    std::stable_sort(boundaries.begin(), boundaries.end(), [&](std::size_t a, std::size_t b) {
        return medians[a + 1] - medians[a] > medians[b + 1] - medians[b];
    });
    StageThreeResult r;
    r.cuts.assign(boundaries.begin(), boundaries.begin() + (clusters - 1));
    std::sort(r.cuts.begin(), r.cuts.end());
    unsigned label = 1;
    std::size_t next = 0;
    for (std::size_t c = 0; c < u; ++c) {
        r.cycle_labels.push_back(label);
        if (next < r.cuts.size() && r.cuts[next] == c) {
            ++label;
            ++next;
        }
    }
    return r;
}

struct ClusteringResult {
    std::vector<unsigned> labels;       // per object, 1..k
    std::vector<std::size_t> cuts;
    StageTwoState state;
    std::vector<Rule> rules;
    std::vector<std::string> warnings;
    unsigned clusters = 0;

    void write_trace(std::ostream& os) const;
};

inline ClusteringResult stage3(StageTwoState state, unsigned clusters) {
    auto part = partition_by_median_gaps(state.final.medians, clusters);
    ClusteringResult r;
    r.labels.reserve(state.final.rank_of_object.size());
    for (auto rank : state.final.rank_of_object) r.labels.push_back(part.cycle_labels[rank]);
    r.cuts = std::move(part.cuts);
    r.state = std::move(state);
    r.clusters = clusters;
    return r;
}

struct ClusterParams {
    std::vector<Rule> rules;
    unsigned split_size = 0;
    unsigned clusters = 0;
    unsigned max_cell_length = kDefaultMaxCellLength;
    unsigned max_depth = kDefaultMaxDepth;
    unsigned threads = 1;
    EngineLimits limits{};
};

namespace detail {
template <typename Fn>
auto in_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (Error& e) {
        if (e.stage().empty()) e.set_stage(stage);
        throw;
    }
}
} // namespace detail

inline ClusteringResult cluster(std::span<const BitString> objects, const ClusterParams& params) {
    auto schedule = detail::in_stage("configure", [&] {
        if (objects.empty()) throw InvalidArgument("no objects to cluster");
        if (params.clusters < 1) throw InvalidArgument("cluster count must be at least 1");
        return RuleSchedule::from_list(params.rules);
    });
    std::vector<std::string> warnings;
    auto first = detail::in_stage("stage1", [&] {
        auto tr = run_level(objects, params.split_size, schedule.level_rule(0), 0, params.threads, params.limits);
        if (tr.layout.oversized)
            warnings.push_back("split size " + std::to_string(params.split_size) + " exceeds object length " +
                               std::to_string(tr.layout.bits) + "; using a single split");
        return tr;
    });
    auto state = detail::in_stage("stage2", [&] {
        return stage2(std::move(first), schedule,
                      StageTwoParams{params.split_size, params.max_cell_length, params.max_depth, params.threads,
                                     params.limits});
    });
    auto result = detail::in_stage("stage3", [&] { return stage3(std::move(state), params.clusters); });
    result.rules = params.rules;
    result.warnings = std::move(warnings);
    return result;
}

inline ClusteringResult cluster(const EncodedDataset& encoded, const ClusterParams& params) {
    auto r = cluster(std::span<const BitString>(encoded.objects), params);
    r.warnings.insert(r.warnings.begin(), encoded.warnings.begin(), encoded.warnings.end());
    return r;
}

namespace detail {
template <typename T>
void write_list(std::ostream& os, const std::vector<T>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << ',';
        if constexpr (std::is_floating_point_v<T>) os << format_double(v[i]);
        else os << v[i];
    }
}
} // namespace detail

// Line-oriented key=value records; every intermediate of the run.
inline void ClusteringResult::write_trace(std::ostream& os) const {
    os << "format=cacluster-trace/1\n";
    os << "objects=" << labels.size() << "\n";
    os << "rules=";
    for (std::size_t i = 0; i < rules.size(); ++i) os << (i ? "," : "") << rules[i].decimal();
    os << "\n";
    for (const auto& lv : state.levels) {
        os << "level=" << lv.level << " rule=" << lv.rule.decimal() << " bits=" << lv.layout.bits
           << " split_size=" << lv.layout.split_size << " splits=" << lv.layout.count()
           << " merged_bits=" << lv.merged_bits() << "\n";
        for (std::size_t i = 0; i < lv.splits.size(); ++i) {
            const auto& s = lv.splits[i];
            os << "  split=" << i << " offset=" << lv.layout.offsets[i] << " width=" << s.width
               << " cycles=" << s.cycle_count() << " code_width=" << s.code_width << " minima=";
            detail::write_list(os, s.cycle_minima);
            os << " medians=";
            detail::write_list(os, s.medians);
            os << " sizes=";
            detail::write_list(os, s.sizes);
            os << "\n";
        }
    }
    os << "final rule=" << state.final_rule.decimal() << " n2=" << state.n2() << " depth=" << state.depth()
       << " cycles=" << state.cycle_count() << " medians=";
    detail::write_list(os, state.final.medians);
    os << "\n";
    os << "clusters=" << clusters << " cuts=";
    detail::write_list(os, cuts);
    os << "\n";
    for (std::size_t j = 0; j < labels.size(); ++j) {
        os << "object=" << j << " merged=" << state.levels.back().merged[j].to_string()
           << " final_rank=" << state.final.rank_of_object[j] << " label=" << labels[j] << "\n";
    }
}

} // namespace cacluster
