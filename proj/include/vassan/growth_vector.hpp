#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "vassan/core.hpp"

namespace vassan {

// Asymptotic exponent of a counter: Poly(k) means Θ(n^k), Inf means at least exponential.
class GrowthExponent {
public:
    constexpr GrowthExponent() = default;

    static constexpr GrowthExponent poly(std::uint32_t k) { return GrowthExponent(false, k); }
    static constexpr GrowthExponent infinity() { return GrowthExponent(true, 0); }

    constexpr bool is_infinite() const { return inf_; }
    constexpr std::uint32_t degree() const {
        if (inf_) throw ModelError("degree() of an infinite exponent");
        return k_;
    }

    constexpr std::strong_ordering operator<=>(const GrowthExponent& o) const {
        if (inf_ != o.inf_) return inf_ ? std::strong_ordering::greater : std::strong_ordering::less;
        if (inf_) return std::strong_ordering::equal;
        return k_ <=> o.k_;
    }
    constexpr bool operator==(const GrowthExponent& o) const { return (*this <=> o) == 0; }

    std::string to_string() const { return inf_ ? "inf" : std::to_string(k_); }

    static GrowthExponent parse(const std::string& text) {
        if (text == "inf" || text == "Inf" || text == "oo") return infinity();
        std::size_t used = 0;
        unsigned long k = 0;
        try {
            k = std::stoul(text, &used);
        } catch (const std::exception&) {
            throw ModelError("bad growth exponent '" + text + "'");
        }
        if (used != text.size() || k == 0) throw ModelError("bad growth exponent '" + text + "'");
        return poly(static_cast<std::uint32_t>(k));
    }

private:
    constexpr GrowthExponent(bool inf, std::uint32_t k) : inf_(inf), k_(k) {}

    bool inf_ = false;
    std::uint32_t k_ = 1;
};

inline std::ostream& operator<<(std::ostream& os, const GrowthExponent& e) { return os << e.to_string(); }

using GrowthVector = std::vector<GrowthExponent>;

inline GrowthVector unit_growth(std::size_t dim) { return GrowthVector(dim, GrowthExponent::poly(1)); }

inline std::string to_string(const GrowthVector& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += v[i].to_string();
    }
    return out + ")";
}

inline GrowthVector parse_growth_vector(const std::string& text) {
    GrowthVector v;
    std::string item;
    for (char ch : text) {
        if (ch == ',') {
            v.push_back(GrowthExponent::parse(item));
            item.clear();
        } else if (ch != ' ' && ch != '(' && ch != ')') {
            item += ch;
        }
    }
    if (!item.empty()) v.push_back(GrowthExponent::parse(item));
    return v;
}

inline GrowthExponent max_component(const GrowthVector& v) {
    GrowthExponent m = GrowthExponent::poly(1);
    for (const auto& e : v) m = std::max(m, e);
    return m;
}

}  // namespace vassan
