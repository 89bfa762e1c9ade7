#pragma once

// Two-state, radius-2 finite cellular automata under null boundary.
//
// Bit conventions used throughout the library:
//  * An RMT packs the neighbourhood (x[i-2], x[i-1], x[i], x[i+1], x[i+2])
//    most-significant first, so the cell's own state has weight 4.
//  * Bit r of a rule's decimal value is the next state for RMT r.
//  * Cell 0 is the leftmost cell and the most significant bit of a
//    configuration's decimal value ("01000" == 8).

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cacluster/error.hpp"

namespace cacluster {

inline constexpr unsigned kMaxConfigurationCells = 64;
// 2^24 states fit a 2 MiB visited bitmap.
inline constexpr unsigned kDefaultMaxCells = 24;
inline constexpr unsigned kHardMaxCells = 32;

struct EngineLimits {
    unsigned max_cells = kDefaultMaxCells;
};

constexpr std::uint64_t cell_mask(unsigned cells) {
    return cells >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cells) - 1;
}

class Rmt {
public:
    constexpr Rmt() = default;
    constexpr explicit Rmt(unsigned value) : value_(static_cast<std::uint8_t>(value)) {
        if (value > 31) throw InvalidArgument("RMT out of range: " + std::to_string(value));
    }

    constexpr unsigned value() const { return value_; }
    constexpr bool middle_bit() const { return (value_ >> 2) & 1u; }
    // Neighbour k in weight order: k=4 is x[i-2], k=0 is x[i+2].
    constexpr bool neighbor(unsigned k) const { return (value_ >> k) & 1u; }

    constexpr auto operator<=>(const Rmt&) const = default;

private:
    std::uint8_t value_ = 0;
};

class Rule {
public:
    constexpr Rule() = default;

    static constexpr Rule from_decimal(std::uint32_t decimal) { return Rule(decimal); }

    // Parses the 32-character RMT 31 ... RMT 0 rendering.
    static Rule from_table_string(std::string_view bits) {
        if (bits.size() != 32) throw ParseError("rule table must have 32 digits");
        std::uint32_t d = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') throw ParseError("rule table must be binary");
            d = (d << 1) | static_cast<std::uint32_t>(c - '0');
        }
        return Rule(d);
    }

    // table[r] == r's middle bit.
    static constexpr Rule identity() { return Rule(4042322160u); }

    constexpr std::uint32_t decimal() const { return decimal_; }
    constexpr bool next_state(unsigned rmt) const { return (decimal_ >> (rmt & 31u)) & 1u; }
    constexpr bool next_state(Rmt rmt) const { return next_state(rmt.value()); }

    constexpr bool operator()(bool left2, bool left1, bool self, bool right1, bool right2) const {
        unsigned r = (unsigned{left2} << 4) | (unsigned{left1} << 3) | (unsigned{self} << 2) |
                     (unsigned{right1} << 1) | unsigned{right2};
        return next_state(r);
    }

    constexpr std::array<bool, 32> table() const {
        std::array<bool, 32> t{};
        for (unsigned r = 0; r < 32; ++r) t[r] = next_state(r);
        return t;
    }

    std::string to_table_string() const {
        std::string s(32, '0');
        for (unsigned r = 0; r < 32; ++r) s[31 - r] = next_state(r) ? '1' : '0';
        return s;
    }

    constexpr auto operator<=>(const Rule&) const = default;

private:
    constexpr explicit Rule(std::uint32_t d) : decimal_(d) {}
    std::uint32_t decimal_ = 0;
};

constexpr Rule rule_from_decimal(std::uint32_t value) { return Rule::from_decimal(value); }

class Configuration {
public:
    Configuration(unsigned cells, std::uint64_t decimal) : decimal_(decimal), cells_(cells) {
        if (cells == 0 || cells > kMaxConfigurationCells)
            throw InvalidArgument("configuration length must be in [1, 64], got " + std::to_string(cells));
        if ((decimal & ~cell_mask(cells)) != 0)
            throw InvalidArgument("configuration value " + std::to_string(decimal) + " does not fit in " +
                                  std::to_string(cells) + " cells");
    }

    static Configuration from_string(std::string_view bits) {
        if (bits.empty() || bits.size() > kMaxConfigurationCells)
            throw ParseError("configuration string must have 1..64 cells");
        std::uint64_t v = 0;
        for (char c : bits) {
            if (c != '0' && c != '1') throw ParseError("configuration string must be binary");
            v = (v << 1) | static_cast<std::uint64_t>(c - '0');
        }
        return Configuration(static_cast<unsigned>(bits.size()), v);
    }

    unsigned cells() const { return cells_; }
    std::uint64_t decimal() const { return decimal_; }
    bool cell(unsigned i) const { return (decimal_ >> (cells_ - 1 - i)) & 1u; }

    std::string to_string() const {
        std::string s(cells_, '0');
        for (unsigned i = 0; i < cells_; ++i) s[i] = cell(i) ? '1' : '0';
        return s;
    }

    bool operator==(const Configuration&) const = default;

private:
    std::uint64_t decimal_;
    unsigned cells_;
};

// Applies one global step. Evaluates eight cells per lookup: entry w of the
// chunk table holds the next states of the cells whose 5-bit windows are the
// eight overlapping windows of the 12-bit value w.
class Stepper {
public:
    explicit Stepper(Rule rule) : rule_(rule) {
        for (unsigned w = 0; w < chunk_.size(); ++w) {
            std::uint8_t out = 0;
            for (unsigned j = 0; j < 8; ++j)
                out |= static_cast<std::uint8_t>(rule.next_state((w >> j) & 31u) << j);
            chunk_[w] = out;
        }
    }

    Rule rule() const { return rule_; }

    // value must be < 2^cells. Bit b of the result is cell (cells-1-b).
    std::uint64_t operator()(std::uint64_t value, unsigned cells) const {
        std::uint64_t out = 0;
        for (unsigned base = 0; base < cells; base += 8) {
            // Bits base-2 .. base+9 of value; positions below zero read as the null boundary.
            std::uint64_t window = base == 0 ? (value << 2) : (value >> (base - 2));
            out |= std::uint64_t{chunk_[window & 0xFFFu]} << base;
        }
        return out & cell_mask(cells);
    }

    Configuration operator()(const Configuration& c) const {
        return Configuration(c.cells(), (*this)(c.decimal(), c.cells()));
    }

private:
    Rule rule_;
    std::array<std::uint8_t, 4096> chunk_{};
};

inline Configuration step(Rule rule, const Configuration& config) { return Stepper(rule)(config); }

namespace detail {

inline void check_enumerable(unsigned cells, const EngineLimits& limits) {
    if (cells == 0) throw InvalidArgument("cell count must be at least 1");
    unsigned cap = std::min(limits.max_cells, kHardMaxCells);
    if (cells > cap)
        throw CapacityError("cell count " + std::to_string(cells) + " exceeds the engine limit of " +
                            std::to_string(cap));
}

class Bitmap {
public:
    explicit Bitmap(std::uint64_t bits) : words_((bits + 63) / 64, 0) {}
    bool test(std::uint64_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
    // Returns the previous value.
    bool test_and_set(std::uint64_t i) {
        std::uint64_t& w = words_[i >> 6];
        std::uint64_t bit = std::uint64_t{1} << (i & 63);
        bool was = (w & bit) != 0;
        w |= bit;
        return was;
    }

private:
    std::vector<std::uint64_t> words_;
};

inline std::string irreversible_message(Rule rule, unsigned cells) {
    return "rule " + std::to_string(rule.decimal()) + " is not reversible at n=" + std::to_string(cells);
}

} // namespace detail

inline bool is_reversible(Rule rule, unsigned cells, const EngineLimits& limits = {}) {
    detail::check_enumerable(cells, limits);
    const Stepper stepper(rule);
    const std::uint64_t count = std::uint64_t{1} << cells;
    detail::Bitmap seen(count);
    for (std::uint64_t x = 0; x < count; ++x)
        if (seen.test_and_set(stepper(x, cells))) return false;
    return true;
}

enum class Coverage { Full, Partial };

// Disjoint cycles of a reversible step map, each rotated to start at its
// minimum element, ordered by that minimum.
class CyclePartition {
public:
    Rule rule() const { return rule_; }
    unsigned cells() const { return cells_; }
    Coverage coverage() const { return coverage_; }

    std::size_t size() const { return offsets_.size() - 1; }
    bool empty() const { return size() == 0; }
    std::size_t element_count() const { return elements_.size(); }

    std::span<const std::uint64_t> cycle(std::size_t i) const {
        return std::span<const std::uint64_t>(elements_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
    }

    std::optional<std::size_t> cycle_of(std::uint64_t value) const {
        if (coverage_ == Coverage::Full) {
            if (value >= dense_index_.size()) return std::nullopt;
            return dense_index_[value];
        }
        auto it = sparse_index_.find(value);
        if (it == sparse_index_.end()) return std::nullopt;
        return it->second;
    }

    // One line per cycle, elements space-separated.
    void dump(std::ostream& os) const {
        for (std::size_t i = 0; i < size(); ++i) {
            bool first = true;
            for (std::uint64_t v : cycle(i)) {
                if (!first) os << ' ';
                os << v;
                first = false;
            }
            os << '\n';
        }
    }

private:
    CyclePartition(Rule rule, unsigned cells, Coverage coverage)
        : rule_(rule), cells_(cells), coverage_(coverage) {}

    friend CyclePartition decompose_cycles(Rule, unsigned, const EngineLimits&);
    friend CyclePartition orbit_membership(Rule, unsigned, std::span<const std::uint64_t>, const EngineLimits&);

    Rule rule_;
    unsigned cells_;
    Coverage coverage_;
    std::vector<std::uint64_t> elements_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> dense_index_;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse_index_;
};

// Starting each walk from the smallest unvisited configuration means every
// cycle is discovered at its minimum, so the canonical order falls out.
inline CyclePartition decompose_cycles(Rule rule, unsigned cells, const EngineLimits& limits = {}) {
    detail::check_enumerable(cells, limits);
    const Stepper stepper(rule);
    const std::uint64_t count = std::uint64_t{1} << cells;

    CyclePartition part(rule, cells, Coverage::Full);
    part.elements_.reserve(count);
    part.dense_index_.assign(count, 0);
    detail::Bitmap visited(count);

    for (std::uint64_t start = 0; start < count; ++start) {
        if (visited.test(start)) continue;
        const auto index = static_cast<std::uint32_t>(part.size());
        std::uint64_t x = start;
        do {
            if (visited.test_and_set(x)) throw IrreversibleError(detail::irreversible_message(rule, cells), cells);
            part.elements_.push_back(x);
            part.dense_index_[x] = index;
            x = stepper(x, cells);
        } while (x != start);
        part.offsets_.push_back(part.elements_.size());
    }
    return part;
}

// Materialises only the cycles that contain at least one seed.
inline CyclePartition orbit_membership(Rule rule, unsigned cells, std::span<const std::uint64_t> seeds,
                                       const EngineLimits& limits = {}) {
    detail::check_enumerable(cells, limits);
    const Stepper stepper(rule);
    const std::uint64_t mask = cell_mask(cells);

    std::vector<std::uint64_t> starts(seeds.begin(), seeds.end());
    std::sort(starts.begin(), starts.end());
    starts.erase(std::unique(starts.begin(), starts.end()), starts.end());

    // Walks in ascending seed order; a seed already absorbed by an earlier walk is skipped.
    std::unordered_map<std::uint64_t, std::uint32_t> owner;
    std::vector<std::vector<std::uint64_t>> cycles;
    for (std::uint64_t seed : starts) {
        if ((seed & ~mask) != 0)
            throw InvalidArgument("seed " + std::to_string(seed) + " does not fit in " + std::to_string(cells) +
                                  " cells");
        if (owner.contains(seed)) continue;
        const auto index = static_cast<std::uint32_t>(cycles.size());
        std::vector<std::uint64_t> orbit;
        std::uint64_t x = seed;
        do {
            if (!owner.emplace(x, index).second)
                throw IrreversibleError(detail::irreversible_message(rule, cells), cells);
            orbit.push_back(x);
            x = stepper(x, cells);
        } while (x != seed);
        std::rotate(orbit.begin(), std::min_element(orbit.begin(), orbit.end()), orbit.end());
        cycles.push_back(std::move(orbit));
    }

    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });

    CyclePartition part(rule, cells, Coverage::Partial);
    part.sparse_index_.reserve(owner.size());
    for (const auto& c : cycles) {
        const auto index = static_cast<std::uint32_t>(part.size());
        for (std::uint64_t v : c) {
            part.elements_.push_back(v);
            part.sparse_index_.emplace(v, index);
        }
        part.offsets_.push_back(part.elements_.size());
    }
    return part;
}

inline CyclePartition orbit_membership(Rule rule, unsigned cells, std::span<const Configuration> seeds,
                                       const EngineLimits& limits = {}) {
    std::vector<std::uint64_t> values;
    values.reserve(seeds.size());
    for (const auto& s : seeds) {
        if (s.cells() != cells) throw InvalidArgument("seed length differs from cell count");
        values.push_back(s.decimal());
    }
    return orbit_membership(rule, cells, std::span<const std::uint64_t>(values), limits);
}

inline std::ostream& operator<<(std::ostream& os, const CyclePartition& part) {
    part.dump(os);
    return os;
}

} // namespace cacluster
