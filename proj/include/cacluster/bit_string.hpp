#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "cacluster/error.hpp"

namespace cacluster {

// Variable-length bit vector, bit 0 leftmost. Encoded objects can be wider
// than a machine word before they are split.
class BitString {
public:
    BitString() = default;

    static BitString from_string(std::string_view bits) {
        BitString b;
        for (char c : bits) {
            if (c != '0' && c != '1') throw ParseError("bit string must be binary");
            b.push_back(c == '1');
        }
        return b;
    }

    std::size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }

    bool operator[](std::size_t i) const { return (words_[i >> 6] >> (63 - (i & 63))) & 1u; }

    void push_back(bool bit) {
        if ((size_ & 63) == 0) words_.push_back(0);
        if (bit) words_[size_ >> 6] |= std::uint64_t{1} << (63 - (size_ & 63));
        ++size_;
    }

    // Appends the low `width` bits of value, most significant first.
    void append(std::uint64_t value, unsigned width) {
        if (width > 64) throw InvalidArgument("field wider than 64 bits");
        for (unsigned b = width; b-- > 0;) push_back((value >> b) & 1u);
    }

    void append(const BitString& other) {
        for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
    }

    // Bits [pos, pos+width) read as an unsigned number, leftmost bit most significant.
    std::uint64_t extract(std::size_t pos, unsigned width) const {
        if (width > 64 || pos + width > size_) throw InvalidArgument("bit range out of bounds");
        std::uint64_t v = 0;
        for (unsigned b = 0; b < width; ++b) v = (v << 1) | static_cast<std::uint64_t>((*this)[pos + b]);
        return v;
    }

    std::string to_string() const {
        std::string s(size_, '0');
        for (std::size_t i = 0; i < size_; ++i) s[i] = (*this)[i] ? '1' : '0';
        return s;
    }

    bool operator==(const BitString&) const = default;
    bool operator<(const BitString& o) const {
        return size_ != o.size_ ? size_ < o.size_ : words_ < o.words_;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<std::size_t>{}(size_);
        for (auto w : words_) h = h * 0x9E3779B97F4A7C15ull + std::hash<std::uint64_t>{}(w);
        return h;
    }

private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

} // namespace cacluster

template <>
struct std::hash<cacluster::BitString> {
    std::size_t operator()(const cacluster::BitString& b) const { return b.hash(); }
};
