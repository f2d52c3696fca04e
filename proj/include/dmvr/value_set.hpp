#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <string>

namespace dmvr {

inline constexpr int kMaxChoices = 16;

/// A subset of the choice universe {0, ..., K-1}, stored as a 16-bit mask.
/// Choices are identified by 0-based indices throughout.
class ValueSet {
public:
    constexpr ValueSet() = default;

    static constexpr ValueSet from_bits(std::uint16_t bits) { return ValueSet(bits); }

    static constexpr ValueSet single(int choice) {
        return ValueSet(static_cast<std::uint16_t>(1u << choice));
    }

    /// The full universe {0, ..., k-1}.
    static constexpr ValueSet full(int k) {
        return ValueSet(static_cast<std::uint16_t>((1u << k) - 1u));
    }

    constexpr std::uint16_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool contains(int choice) const { return (bits_ >> choice) & 1u; }
    constexpr bool subset_of(ValueSet other) const { return (bits_ & ~other.bits_) == 0; }

    constexpr ValueSet unite(ValueSet other) const { return ValueSet(bits_ | other.bits_); }
    constexpr ValueSet intersect(ValueSet other) const { return ValueSet(bits_ & other.bits_); }
    constexpr ValueSet minus(ValueSet other) const {
        return ValueSet(static_cast<std::uint16_t>(bits_ & ~other.bits_));
    }
    constexpr ValueSet with(int choice) const {
        return ValueSet(static_cast<std::uint16_t>(bits_ | (1u << choice)));
    }
    constexpr ValueSet without(int choice) const {
        return ValueSet(static_cast<std::uint16_t>(bits_ & ~(1u << choice)));
    }

    /// Lowest-indexed member; set must be nonempty.
    constexpr int lowest() const {
        assert(!empty());
        return std::countr_zero(bits_);
    }

    /// The idx-th member in increasing index order (0-based); idx < size().
    constexpr int nth_member(int idx) const {
        std::uint16_t b = bits_;
        for (int i = 0; i < idx; ++i) b &= static_cast<std::uint16_t>(b - 1);
        assert(b != 0);
        return std::countr_zero(b);
    }

    constexpr bool operator==(const ValueSet&) const = default;

    /// Render as e.g. "{c1,c3}" (choice indices printed 1-based) or "{}".
    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (int c = 0; c < kMaxChoices; ++c) {
            if (!contains(c)) continue;
            if (!first) out += ',';
            out += 'c';
            out += std::to_string(c + 1);
            first = false;
        }
        out += '}';
        return out;
    }

private:
    constexpr explicit ValueSet(std::uint16_t bits) : bits_(bits) {}
    std::uint16_t bits_ = 0;
};

}  // namespace dmvr
