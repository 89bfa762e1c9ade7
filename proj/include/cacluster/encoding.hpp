#pragma once

// Frequency-based encoding of tabular rows into fixed-length bit strings.
// Continuous attributes: up to four equal-frequency intervals, coded
// 00, 01, 11, 10 so neighbouring intervals differ in one bit.
// Categorical attributes: one-hot over the sorted distinct values.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cacluster/bit_string.hpp"
#include "cacluster/error.hpp"
#include "cacluster/text.hpp"

namespace cacluster {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw ParseError("no column named '" + std::string(name) + "'");
    }
};

// RFC 4180 subset: comma separator, double-quoted fields with "" escapes,
// LF or CRLF line ends. Empty fields are treated as missing and rejected.
inline Table read_csv(std::istream& in) {
    Table table;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false, field_started = false, any = false;
    std::size_t line = 1, record_line = 1;

    auto finish_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    auto finish_record = [&] {
        finish_field();
        if (record.size() == 1 && record[0].empty()) {  // blank line
            record.clear();
            return;
        }
        if (table.header.empty()) {
            table.header = std::move(record);
        } else {
            if (record.size() != table.header.size())
                throw ParseError("line " + std::to_string(record_line) + ": expected " +
                                 std::to_string(table.header.size()) + " fields, found " +
                                 std::to_string(record.size()));
            for (std::size_t c = 0; c < record.size(); ++c)
                if (record[c].empty())
                    throw ParseError("line " + std::to_string(record_line) + ": missing value in column '" +
                                     table.header[c] + "'");
            table.rows.push_back(std::move(record));
        }
        record.clear();
    };

    char ch;
    while (in.get(ch)) {
        any = true;
        if (quoted) {
            if (ch == '"') {
                if (in.peek() == '"') {
                    in.get(ch);
                    field.push_back('"');
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (field_started) throw ParseError("line " + std::to_string(line) + ": stray quote");
            quoted = field_started = true;
            break;
        case ',':
            finish_field();
            break;
        case '\r':
            break;
        case '\n':
            finish_record();
            record_line = ++line;
            break;
        default:
            field.push_back(ch);
            field_started = true;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field");
    if (any && (!field.empty() || !record.empty())) finish_record();
    if (table.header.empty()) throw ParseError("CSV input has no header row");
    for (const auto& h : table.header)
        if (h.empty()) throw ParseError("CSV header has an empty column name");
    return table;
}

inline Table read_csv_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return read_csv(in);
}

enum class AttributeKind { Continuous, Categorical };

inline std::string_view to_string(AttributeKind k) {
    return k == AttributeKind::Continuous ? "continuous" : "categorical";
}

inline AttributeKind parse_attribute_kind(std::string_view s) {
    if (s == "continuous") return AttributeKind::Continuous;
    if (s == "categorical") return AttributeKind::Categorical;
    throw ParseError("unknown attribute kind '" + std::string(s) + "' (expected continuous or categorical)");
}

struct AttributeSpec {
    std::string name;
    AttributeKind kind;
    bool operator==(const AttributeSpec&) const = default;
};

using Schema = std::vector<AttributeSpec>;

inline std::optional<double> parse_double(std::string_view s) {
    s = detail::trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// A column is continuous iff every value parses as a finite number.
inline Schema infer_schema(const Table& table) {
    Schema schema;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        bool numeric = !table.rows.empty();
        for (const auto& row : table.rows)
            if (!parse_double(row[c])) {
                numeric = false;
                break;
            }
        schema.push_back({table.header[c], numeric ? AttributeKind::Continuous : AttributeKind::Categorical});
    }
    return schema;
}

// Sidecar format: one `name,kind` per line; '#' comments, optional
// `name,kind` header. Listed attributes are used in listed order; other
// columns (row ids, labels) are ignored.
inline Schema parse_schema(std::string_view text) {
    Schema schema;
    std::size_t line_no = 0, start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = detail::trim(text.substr(start, end - start));
        start = end + 1;
        ++line_no;
        if (line.empty() || line.front() == '#') continue;
        auto f = detail::split_fields(line, ',');
        if (f.size() != 2) throw ParseError("schema line " + std::to_string(line_no) + ": expected name,kind");
        auto name = detail::trim(f[0]);
        auto kind = detail::trim(f[1]);
        if (schema.empty() && name == "name" && kind == "kind") continue;
        if (name.empty()) throw ParseError("schema line " + std::to_string(line_no) + ": empty name");
        for (const auto& a : schema)
            if (a.name == name) throw ParseError("schema lists '" + std::string(name) + "' twice");
        schema.push_back({std::string(name), parse_attribute_kind(kind)});
    }
    if (schema.empty()) throw ParseError("schema lists no attributes");
    return schema;
}

struct Interval {
    double lo;
    double hi;
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool operator==(const Interval&) const = default;
};

inline constexpr unsigned kIntervalCodeWidth = 2;
inline constexpr std::size_t kMaxIntervals = 4;

inline std::uint64_t gray_encode(std::uint64_t i) { return i ^ (i >> 1); }

struct AttributePlan {
    std::string name;
    AttributeKind kind = AttributeKind::Continuous;
    std::vector<Interval> intervals;     // continuous: ascending, disjoint
    std::vector<std::string> codebook;   // categorical: code order

    unsigned width() const {
        return kind == AttributeKind::Continuous ? kIntervalCodeWidth : static_cast<unsigned>(codebook.size());
    }

    bool operator==(const AttributePlan&) const = default;

    // Index of the interval holding v; values outside every interval go to
    // the nearest one (the lower one on a tie) and set *clamped.
    std::size_t interval_index(double v, bool* clamped = nullptr) const {
        std::size_t best = 0;
        double best_dist = INFINITY;
        for (std::size_t j = 0; j < intervals.size(); ++j) {
            if (intervals[j].contains(v)) {
                if (clamped) *clamped = false;
                return j;
            }
            double d = v < intervals[j].lo ? intervals[j].lo - v : v - intervals[j].hi;
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        if (clamped) *clamped = true;
        return best;
    }

    std::size_t category_index(std::string_view value) const {
        for (std::size_t i = 0; i < codebook.size(); ++i)
            if (codebook[i] == value) return i;
        throw UnknownCategoryError("attribute '" + name + "': unknown category '" + std::string(value) + "'");
    }

    void validate() const {
        if (name.empty()) throw InvalidArgument("attribute with empty name");
        if (kind == AttributeKind::Continuous) {
            if (intervals.empty() || intervals.size() > kMaxIntervals)
                throw InvalidArgument("attribute '" + name + "': needs 1 to 4 intervals");
            for (std::size_t j = 0; j < intervals.size(); ++j) {
                if (!(intervals[j].lo <= intervals[j].hi))
                    throw InvalidArgument("attribute '" + name + "': interval with lo > hi");
                if (j > 0 && !(intervals[j - 1].hi < intervals[j].lo))
                    throw InvalidArgument("attribute '" + name + "': intervals must be ascending and disjoint");
            }
        } else {
            if (codebook.empty() || codebook.size() > 64)
                throw InvalidArgument("attribute '" + name + "': codebook needs 1 to 64 values");
            auto sorted = codebook;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw InvalidArgument("attribute '" + name + "': duplicate codebook value");
        }
    }
};

namespace detail {
inline std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}
} // namespace detail

class EncodingPlan {
public:
    static constexpr std::string_view kMagic = "cacluster-plan 1";

    EncodingPlan() = default;
    explicit EncodingPlan(std::vector<AttributePlan> attributes) : attributes_(std::move(attributes)) {
        if (attributes_.empty()) throw InvalidArgument("encoding plan has no attributes");
        for (const auto& a : attributes_) a.validate();
    }

    const std::vector<AttributePlan>& attributes() const { return attributes_; }

    std::size_t total_bits() const {
        std::size_t p = 0;
        for (const auto& a : attributes_) p += a.width();
        return p;
    }

    // values are in attribute order. Clamped continuous values are reported
    // through `warnings` when given.
    BitString encode(std::span<const std::string> values, std::vector<std::string>* warnings = nullptr) const {
        if (values.size() != attributes_.size())
            throw InvalidArgument("row has " + std::to_string(values.size()) + " values, plan expects " +
                                  std::to_string(attributes_.size()));
        BitString out;
        for (std::size_t a = 0; a < attributes_.size(); ++a) {
            const auto& attr = attributes_[a];
            if (attr.kind == AttributeKind::Continuous) {
                auto v = parse_double(values[a]);
                if (!v)
                    throw ParseError("attribute '" + attr.name + "': non-numeric value '" + values[a] + "'");
                bool clamped = false;
                std::size_t j = attr.interval_index(*v, &clamped);
                if (clamped && warnings)
                    warnings->push_back("attribute '" + attr.name + "': value " + values[a] +
                                        " outside fitted intervals, clamped to interval " + std::to_string(j));
                out.append(gray_encode(j), kIntervalCodeWidth);
            } else {
                std::size_t i = attr.category_index(detail::trim(values[a]));
                out.append(std::uint64_t{1} << i, attr.width());
            }
        }
        return out;
    }

    // Tab-separated, one attribute per line:
    //   continuous<TAB>name<TAB>lo:hi<TAB>...
    //   categorical<TAB>name<TAB>value<TAB>...
    std::string to_text() const {
        std::string s(kMagic);
        s += '\n';
        for (const auto& a : attributes_) {
            s += to_string(a.kind);
            s += '\t';
            s += a.name;
            if (a.kind == AttributeKind::Continuous) {
                for (const auto& iv : a.intervals) s += '\t' + detail::format_double(iv.lo) + ':' + detail::format_double(iv.hi);
            } else {
                for (const auto& v : a.codebook) s += '\t' + v;
            }
            s += '\n';
        }
        return s;
    }

    static EncodingPlan parse(std::string_view text) {
        std::vector<AttributePlan> attrs;
        std::size_t line_no = 0, start = 0;
        bool seen_magic = false;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string_view::npos) end = text.size();
            std::string_view line = text.substr(start, end - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            start = end + 1;
            ++line_no;
            if (detail::trim(line).empty() || line.front() == '#') continue;
            if (!seen_magic) {
                if (detail::trim(line) != kMagic) throw ParseError("plan file must start with '" + std::string(kMagic) + "'");
                seen_magic = true;
                continue;
            }
            auto f = detail::split_fields(line, '\t');
            auto where = "plan line " + std::to_string(line_no) + ": ";
            if (f.size() < 3) throw ParseError(where + "expected kind, name and at least one value");
            AttributePlan a;
            a.kind = parse_attribute_kind(f[0]);
            a.name = std::string(f[1]);
            for (std::size_t i = 2; i < f.size(); ++i) {
                if (a.kind == AttributeKind::Continuous) {
                    auto colon = f[i].find(':');
                    auto lo = colon == std::string_view::npos ? std::nullopt : parse_double(f[i].substr(0, colon));
                    auto hi = colon == std::string_view::npos ? std::nullopt : parse_double(f[i].substr(colon + 1));
                    if (!lo || !hi) throw ParseError(where + "bad interval '" + std::string(f[i]) + "'");
                    a.intervals.push_back({*lo, *hi});
                } else {
                    a.codebook.emplace_back(f[i]);
                }
            }
            try {
                a.validate();
            } catch (const InvalidArgument& e) {
                throw ParseError(where + e.message());
            }
            attrs.push_back(std::move(a));
        }
        if (!seen_magic) throw ParseError("empty plan file");
        if (attrs.empty()) throw ParseError("plan lists no attributes");
        return EncodingPlan(std::move(attrs));
    }

    bool operator==(const EncodingPlan&) const = default;

private:
    std::vector<AttributePlan> attributes_;
};

// Cut j (j = 1..3) is the smallest value with at least j/4 of the data at or
// below it; each bin is (previous cut, cut]. Coinciding cuts merge bins, and a
// cut at the maximum would leave an empty top bin, so it is dropped too.
inline std::vector<Interval> fit_intervals(std::vector<double> values) {
    if (values.empty()) throw InvalidArgument("cannot fit intervals to no values");
    std::sort(values.begin(), values.end());
    const std::size_t t = values.size();
    std::vector<double> cuts;
    for (std::size_t j = 1; j < kMaxIntervals; ++j) {
        std::size_t rank = (j * t + kMaxIntervals - 1) / kMaxIntervals;  // ceil(j t / 4)
        double c = values[rank - 1];
        if (c < values.back() && (cuts.empty() || c > cuts.back())) cuts.push_back(c);
    }
    std::vector<Interval> out;
    auto it = values.begin();
    for (std::size_t b = 0; b <= cuts.size(); ++b) {
        auto stop = b < cuts.size() ? std::upper_bound(it, values.end(), cuts[b]) : values.end();
        out.push_back({*it, *(stop - 1)});
        it = stop;
    }
    return out;
}

inline EncodingPlan fit_plan(const Table& table, const Schema& schema) {
    if (schema.empty()) throw InvalidArgument("schema has no attributes");
    if (table.rows.empty()) throw InvalidArgument("dataset has no rows");
    std::vector<AttributePlan> attrs;
    for (const auto& spec : schema) {
        std::size_t c = table.column(spec.name);
        AttributePlan a;
        a.name = spec.name;
        a.kind = spec.kind;
        if (spec.kind == AttributeKind::Continuous) {
            std::vector<double> values;
            values.reserve(table.rows.size());
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                auto v = parse_double(table.rows[r][c]);
                if (!v)
                    throw ParseError("row " + std::to_string(r + 1) + ": non-numeric value '" + table.rows[r][c] +
                                     "' in continuous column '" + spec.name + "'");
                values.push_back(*v);
            }
            a.intervals = fit_intervals(std::move(values));
        } else {
            for (const auto& row : table.rows) a.codebook.emplace_back(detail::trim(row[c]));
            std::sort(a.codebook.begin(), a.codebook.end());
            a.codebook.erase(std::unique(a.codebook.begin(), a.codebook.end()), a.codebook.end());
        }
        attrs.push_back(std::move(a));
    }
    return EncodingPlan(std::move(attrs));
}

struct EncodedDataset {
    std::vector<BitString> objects;
    std::vector<std::size_t> row_ids;  // index into the source table's rows
    EncodingPlan plan;
    std::vector<std::string> warnings;

    std::size_t size() const { return objects.size(); }
    std::size_t bits() const { return plan.total_bits(); }
};

// Values of the plan's attributes for each row, in plan order.
inline std::vector<std::vector<std::string>> project_rows(const EncodingPlan& plan, const Table& table) {
    std::vector<std::size_t> cols;
    for (const auto& a : plan.attributes()) cols.push_back(table.column(a.name));
    std::vector<std::vector<std::string>> out;
    out.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        std::vector<std::string> v;
        v.reserve(cols.size());
        for (auto c : cols) v.push_back(row[c]);
        out.push_back(std::move(v));
    }
    return out;
}

inline EncodedDataset encode_dataset(const EncodingPlan& plan, const Table& table) {
    if (plan.attributes().empty()) throw InvalidArgument("encoding plan has no attributes");
    EncodedDataset ds{{}, {}, plan, {}};
    auto rows = project_rows(plan, table);
    ds.objects.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        std::vector<std::string> local;
        ds.objects.push_back(plan.encode(rows[r], &local));
        for (auto& w : local) ds.warnings.push_back("row " + std::to_string(r + 1) + ": " + w);
        ds.row_ids.push_back(r);
    }
    return ds;
}

} // namespace cacluster
