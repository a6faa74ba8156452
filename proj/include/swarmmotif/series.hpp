#pragma once

#include "swarmmotif/random.hpp"
#include "swarmmotif/types.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarmmotif {

/// A contiguous piece of a series: samples [start, start+length-1], 1-based.
struct Segment {
    Index start = 1;
    std::span<const double> values;

    [[nodiscard]] Index length() const noexcept { return static_cast<Index>(values.size()); }
};

/**
 * The raw stream z. Immutable once built; every value is finite.
 */
class TimeSeries {
public:
    TimeSeries() = default;

    explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i])) {
                throw std::invalid_argument("time series sample " + std::to_string(i + 1) +
                                            " is not finite");
            }
        }
    }

    [[nodiscard]] Index size() const noexcept { return static_cast<Index>(values_.size()); }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    /// 1-based access.
    [[nodiscard]] double at(Index i) const { return values_.at(static_cast<std::size_t>(i - 1)); }

    [[nodiscard]] Segment segment(Index start, Index length) const {
        if (start < 1 || length < 1 || start + length - 1 > size()) {
            throw std::out_of_range("segment [" + std::to_string(start) + ", " +
                                    std::to_string(start + length - 1) +
                                    "] lies outside series of length " + std::to_string(size()));
        }
        return Segment{start, std::span<const double>(values_).subspan(
                                  static_cast<std::size_t>(start - 1), static_cast<std::size_t>(length))};
    }

private:
    std::vector<double> values_;
};

// ----------------------------------------------------------------------------
// Normalization and resampling

/**
 * Z-normalizes with the population standard deviation. A constant input
 * (sigma == 0 up to rounding) maps to the all-zeros vector.
 */
inline void z_normalize_into(std::span<const double> in, std::span<double> out) {
    const auto w = static_cast<double>(in.size());
    if (in.empty()) return;
    double mean = std::accumulate(in.begin(), in.end(), 0.0) / w;
    double ss = 0.0;
    for (double v : in) ss += (v - mean) * (v - mean);
    double sigma = std::sqrt(ss / w);
    if (sigma <= 1e-12 * std::max(1.0, std::abs(mean))) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = (in[i] - mean) / sigma;
}

inline std::vector<double> z_normalize(std::span<const double> in) {
    std::vector<double> out(in.size());
    z_normalize_into(in, out);
    return out;
}

inline std::vector<double> z_normalize(const Segment& s) { return z_normalize(s.values); }

/// Linear interpolation over the index axis onto out.size() points.
inline void upsample_into(std::span<const double> in, std::span<double> out) {
    const std::size_t w = in.size();
    const std::size_t len = out.size();
    if (w == 0 || len < w) {
        throw std::invalid_argument("upsample target length must be >= input length > 0");
    }
    if (len == w) {
        std::copy(in.begin(), in.end(), out.begin());
        return;
    }
    if (w == 1) {
        std::fill(out.begin(), out.end(), in[0]);
        return;
    }
    const double scale = static_cast<double>(w - 1);
    const double denom = static_cast<double>(len - 1);
    for (std::size_t t = 0; t < len; ++t) {
        double pos = static_cast<double>(t) * scale / denom;
        auto lo = static_cast<std::size_t>(pos);
        if (lo >= w - 1) {
            out[t] = in[w - 1];
            continue;
        }
        double frac = pos - static_cast<double>(lo);
        out[t] = in[lo] + frac * (in[lo + 1] - in[lo]);
    }
}

inline std::vector<double> upsample(std::span<const double> in, std::size_t target_len) {
    if (target_len < in.size()) {
        throw std::invalid_argument("upsample target length " + std::to_string(target_len) +
                                    " is shorter than the segment (" + std::to_string(in.size()) + ")");
    }
    std::vector<double> out(target_len);
    upsample_into(in, out);
    return out;
}

inline std::vector<double> upsample(const Segment& s, std::size_t target_len) {
    return upsample(s.values, target_len);
}

// ----------------------------------------------------------------------------
// Synthetic data

/// Random walk with z_1 = 0 and standard Gaussian increments.
inline TimeSeries generate_random_walk(Index n, std::uint64_t seed) {
    if (n < 2) throw std::invalid_argument("random walk length must be >= 2");
    Random rng(seed);
    std::vector<double> z(static_cast<std::size_t>(n));
    z[0] = 0.0;
    for (std::size_t i = 1; i < z.size(); ++i) z[i] = z[i - 1] + rng.gaussian();
    return TimeSeries(std::move(z));
}

// ----------------------------------------------------------------------------
// CSV ingestion

enum class MissingPolicy { strict, drop, interpolate };

enum class HeaderMode { detect, present, absent };

struct CsvOptions {
    std::size_t column = 0;
    MissingPolicy missing = MissingPolicy::strict;
    HeaderMode header = HeaderMode::detect;
    char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline bool is_missing_token(std::string_view s) {
    if (s.empty()) return true;
    std::string lower(s);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return lower == "na" || lower == "nan" || lower == "n/a" || lower == "null" || lower == "?";
}

inline std::optional<double> parse_real(std::string_view s) {
    if (s.empty()) return std::nullopt;
    if (s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

inline std::string_view nth_field(std::string_view line, std::size_t column, char delim, bool& found) {
    std::size_t start = 0;
    for (std::size_t c = 0; c < column; ++c) {
        auto pos = line.find(delim, start);
        if (pos == std::string_view::npos) {
            found = false;
            return {};
        }
        start = pos + 1;
    }
    auto end = line.find(delim, start);
    found = true;
    return trim(line.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
}

}  // namespace detail

/**
 * Parses one column of a delimited text stream into a series.
 *
 * Empty cells and NA/NaN/null tokens count as missing. With
 * MissingPolicy::interpolate, interior gaps are filled linearly and leading or
 * trailing gaps are dropped.
 */
inline TimeSeries parse_csv(std::istream& in, const CsvOptions& opt = {}) {
    std::vector<std::optional<double>> cells;
    std::string line;
    std::size_t row = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++row;
        auto view = detail::trim(line);
        if (view.empty()) continue;
        bool found = false;
        auto field = detail::nth_field(view, opt.column, opt.delimiter, found);
        if (!found) {
            throw std::runtime_error("row " + std::to_string(row) + " has no column " +
                                     std::to_string(opt.column));
        }
        auto value = detail::parse_real(field);
        if (first) {
            first = false;
            bool header = opt.header == HeaderMode::present ||
                          (opt.header == HeaderMode::detect && !value && !detail::is_missing_token(field));
            if (header) continue;
        }
        if (!value && !detail::is_missing_token(field)) {
            if (opt.missing == MissingPolicy::strict) {
                throw std::runtime_error("row " + std::to_string(row) + ": cannot parse '" +
                                         std::string(field) + "' as a number");
            }
        }
        if (!value && opt.missing == MissingPolicy::strict) {
            throw std::runtime_error("row " + std::to_string(row) + ": missing value");
        }
        cells.push_back(value);
    }

    std::vector<double> values;
    values.reserve(cells.size());
    if (opt.missing == MissingPolicy::interpolate) {
        std::size_t i = 0;
        while (i < cells.size() && !cells[i]) ++i;
        std::size_t last = cells.size();
        while (last > i && !cells[last - 1]) --last;
        for (std::size_t j = i; j < last; ++j) {
            if (cells[j]) {
                values.push_back(*cells[j]);
                continue;
            }
            std::size_t next = j;
            while (!cells[next]) ++next;
            const double lo = values.back();
            const double hi = *cells[next];
            const double gap = static_cast<double>(next - j + 1);
            for (std::size_t g = j; g < next; ++g) {
                values.push_back(lo + (hi - lo) * static_cast<double>(g - j + 1) / gap);
            }
            j = next - 1;
        }
    } else {
        for (const auto& c : cells) {
            if (c) values.push_back(*c);
        }
    }
    if (values.size() < 2) {
        throw std::runtime_error("series needs at least 2 samples, got " + std::to_string(values.size()));
    }
    return TimeSeries(std::move(values));
}

inline TimeSeries load_csv(const std::string& path, const CsvOptions& opt = {}) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    return parse_csv(in, opt);
}

}  // namespace swarmmotif
