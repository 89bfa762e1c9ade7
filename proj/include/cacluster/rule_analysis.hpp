#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "cacluster/ca_core.hpp"

namespace cacluster {

// Exact rational with a fixed power-of-two denominator; every rate the rule
// analysis produces is a count over 16 or 32 truth-table entries.
template <unsigned Denominator>
class Fraction {
public:
    static constexpr unsigned denominator = Denominator;

    constexpr Fraction() = default;
    constexpr explicit Fraction(unsigned numerator) : numerator_(numerator) {
        if (numerator > Denominator) throw InvalidArgument("fraction above one");
    }

    constexpr unsigned numerator() const { return numerator_; }
    constexpr double value() const { return static_cast<double>(numerator_) / Denominator; }
    constexpr explicit operator double() const { return value(); }

    // Exact comparison against p/q.
    constexpr bool at_most(unsigned p, unsigned q) const { return std::uint64_t{numerator_} * q <= std::uint64_t{p} * Denominator; }
    constexpr bool at_least(unsigned p, unsigned q) const { return std::uint64_t{numerator_} * q >= std::uint64_t{p} * Denominator; }
    constexpr bool equals(unsigned p, unsigned q) const { return std::uint64_t{numerator_} * q == std::uint64_t{p} * Denominator; }

    constexpr auto operator<=>(const Fraction&) const = default;

    std::string to_string() const { return std::to_string(numerator_) + "/" + std::to_string(Denominator); }

private:
    unsigned numerator_ = 0;
};

using Rate16 = Fraction<16>;
using Rate32 = Fraction<32>;

struct EquivalenceSet {
    unsigned k;
    unsigned i;
    std::array<Rmt, 2> members;
};

// Set i pairs the two RMTs that agree everywhere except at the neighbour with
// weight 2^k; dropping that bit from either member yields i.
inline std::array<EquivalenceSet, 16> equivalence_sets(unsigned k) {
    if (k > 4) throw InvalidArgument("neighbour index must be in [0, 4], got " + std::to_string(k));
    std::array<EquivalenceSet, 16> sets{};
    const unsigned low_mask = (1u << k) - 1;
    for (unsigned i = 0; i < 16; ++i) {
        unsigned lo = ((i >> k) << (k + 1)) | (i & low_mask);
        sets[i] = EquivalenceSet{k, i, {Rmt(lo), Rmt(lo | (1u << k))}};
    }
    return sets;
}

inline Rate16 information_propagation(Rule rule, unsigned k) {
    unsigned differing = 0;
    for (const auto& set : equivalence_sets(k))
        differing += rule.next_state(set.members[0]) != rule.next_state(set.members[1]);
    return Rate16(differing);
}

inline Rate32 self_replication_rate(Rule rule) {
    unsigned same = 0;
    for (unsigned r = 0; r < 32; ++r) same += rule.next_state(r) == Rmt(r).middle_bit();
    return Rate32(same);
}

struct RuleProfile {
    Rule rule;
    std::array<Rate16, 5> lambda;
    Rate32 self_replication;
    bool criterion1 = false;
};

// Neighbours other than the cell itself must each propagate at most 3/4 and
// not all sit at the extremes {0, 3/4}; the cell must mostly copy itself,
// measured as the propagation rate through the middle neighbour.
inline bool passes_criterion1(Rule rule) {
    bool all_extreme = true;
    for (unsigned k : {0u, 1u, 3u, 4u}) {
        Rate16 l = information_propagation(rule, k);
        if (!l.at_most(3, 4)) return false;
        if (!(l.numerator() == 0 || l.equals(3, 4))) all_extreme = false;
    }
    if (all_extreme) return false;
    return information_propagation(rule, 2).at_least(3, 4);
}

inline RuleProfile profile(Rule rule) {
    RuleProfile p{rule, {}, self_replication_rate(rule), passes_criterion1(rule)};
    for (unsigned k = 0; k < 5; ++k) p.lambda[k] = information_propagation(rule, k);
    return p;
}

inline std::uint64_t cycle_signature(std::span<const std::uint64_t> cycle) {
    if (cycle.empty()) throw InvalidArgument("cycle signature of an empty cycle");
    std::uint64_t h = 0;
    for (std::uint64_t c : cycle) h ^= c;
    return h;
}

inline std::uint64_t cycle_signature(std::span<const Configuration> cycle) {
    if (cycle.empty()) throw InvalidArgument("cycle signature of an empty cycle");
    std::uint64_t h = 0;
    for (const auto& c : cycle) h ^= c.decimal();
    return h;
}

struct CycleSignatureReport {
    Rule rule;
    unsigned cells = 0;
    std::vector<std::uint64_t> signatures;  // in canonical cycle order

    std::size_t cycle_count() const { return signatures.size(); }

    std::size_t count_at_most(std::uint64_t cap) const {
        std::size_t c = 0;
        for (auto h : signatures) c += h <= cap;
        return c;
    }
    double fraction_at_most(std::uint64_t cap) const {
        return signatures.empty() ? 0.0 : static_cast<double>(count_at_most(cap)) / signatures.size();
    }
    double fraction_le_9() const { return fraction_at_most(9); }
    double fraction_le_99() const { return fraction_at_most(99); }

    std::map<std::uint64_t, std::size_t> histogram() const {
        std::map<std::uint64_t, std::size_t> h;
        for (auto s : signatures) ++h[s];
        return h;
    }
};

inline CycleSignatureReport signature_report(const CyclePartition& part) {
    CycleSignatureReport r{part.rule(), part.cells(), {}};
    r.signatures.reserve(part.size());
    for (std::size_t i = 0; i < part.size(); ++i) r.signatures.push_back(cycle_signature(part.cycle(i)));
    return r;
}

inline CycleSignatureReport signature_report(Rule rule, unsigned cells, const EngineLimits& limits = {}) {
    return signature_report(decompose_cycles(rule, cells, limits));
}

struct Criterion3Params {
    std::size_t max_cycles = 0;
    std::uint64_t signature_cap = 99;
    double min_fraction = 0.5;
};

// Fractions compare count/K >= f as count >= f*K with a small slack so that
// thresholds such as 0.4 are not lost to binary rounding.
namespace detail {
inline bool fraction_reaches(std::size_t count, std::size_t total, double threshold) {
    if (total == 0) return threshold <= 0.0;
    return static_cast<double>(count) + 1e-9 >= threshold * static_cast<double>(total);
}
} // namespace detail

inline bool passes_criterion2(const CycleSignatureReport& report, double l1) {
    return detail::fraction_reaches(report.count_at_most(9), report.cycle_count(), l1);
}

inline bool passes_criterion3(const CycleSignatureReport& report, const Criterion3Params& params) {
    return report.cycle_count() <= params.max_cycles &&
           detail::fraction_reaches(report.count_at_most(params.signature_cap), report.cycle_count(),
                                    params.min_fraction);
}

inline bool passes_criterion2(Rule rule, unsigned cells, double l1, const EngineLimits& limits = {}) {
    return passes_criterion2(signature_report(rule, cells, limits), l1);
}

inline bool passes_criterion3(Rule rule, unsigned cells, std::size_t l2, const EngineLimits& limits = {}) {
    return passes_criterion3(signature_report(rule, cells, limits), Criterion3Params{l2});
}

inline bool passes_criterion3(Rule rule, unsigned cells, const Criterion3Params& params,
                              const EngineLimits& limits = {}) {
    return passes_criterion3(signature_report(rule, cells, limits), params);
}

} // namespace cacluster
