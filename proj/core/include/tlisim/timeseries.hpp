#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace tlisim {

/// Uniformly sampled waveform. Valid series have dt > 0, at least two
/// samples, and only finite values; validate() enforces this where a
/// consumer requires it.
struct TimeSeries {
    std::string name;
    std::string unit;
    double dt = 0.0;       // sample spacing [s]
    std::vector<double> samples;

    [[nodiscard]] std::size_t size() const { return samples.size(); }
    [[nodiscard]] double duration() const {
        return samples.empty() ? 0.0 : dt * static_cast<double>(samples.size() - 1);
    }
    [[nodiscard]] double time_at(std::size_t i) const {
        return dt * static_cast<double>(i);
    }
    /// Index of the first sample at or after time t, clamped to the range.
    [[nodiscard]] std::size_t index_at(double t) const;
};

/// Throws std::invalid_argument if the series violates its invariants.
void validate(const TimeSeries& series);

/// CSV layout: a header line "name,dt,unit", one line with the values,
/// then one sample per line. Samples round-trip exactly (written with
/// max_digits10 precision).
void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               std::size_t decimate = 1);

TimeSeries read_csv(const std::filesystem::path& path);

}  // namespace tlisim
