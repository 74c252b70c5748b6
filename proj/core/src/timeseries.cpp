#include "tlisim/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace tlisim {

std::size_t TimeSeries::index_at(double t) const {
    if (samples.empty() || t <= 0.0) return 0;
    const auto idx = static_cast<std::size_t>(std::ceil(t / dt - 1e-9));
    return std::min(idx, samples.size() - 1);
}

void validate(const TimeSeries& series) {
    if (!(series.dt > 0.0)) {
        throw std::invalid_argument("TimeSeries '" + series.name +
                                    "': dt must be positive");
    }
    if (series.samples.size() < 2) {
        throw std::invalid_argument("TimeSeries '" + series.name +
                                    "': needs at least two samples");
    }
    for (double v : series.samples) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("TimeSeries '" + series.name +
                                        "': non-finite sample");
        }
    }
}

void write_csv(const TimeSeries& series, const std::filesystem::path& path,
               std::size_t decimate) {
    if (decimate == 0) decimate = 1;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_csv: cannot open " + path.string());
    }
    out << "name,dt,unit\n";
    out.precision(std::numeric_limits<double>::max_digits10);
    out << series.name << ',' << series.dt * static_cast<double>(decimate)
        << ',' << series.unit << '\n';
    for (std::size_t i = 0; i < series.samples.size(); i += decimate) {
        out << series.samples[i] << '\n';
    }
    if (!out) {
        throw std::runtime_error("write_csv: write failed for " + path.string());
    }
}

TimeSeries read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("read_csv: cannot open " + path.string());
    }
    std::string line;
    if (!std::getline(in, line) || line != "name,dt,unit") {
        throw std::runtime_error("read_csv: bad header in " + path.string());
    }
    if (!std::getline(in, line)) {
        throw std::runtime_error("read_csv: missing metadata in " + path.string());
    }
    TimeSeries series;
    {
        std::istringstream meta(line);
        std::string dt_text;
        if (!std::getline(meta, series.name, ',') ||
            !std::getline(meta, dt_text, ',')) {
            throw std::runtime_error("read_csv: bad metadata in " + path.string());
        }
        std::getline(meta, series.unit, ',');
        series.dt = std::stod(dt_text);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        double value = 0.0;
        const auto* begin = line.data();
        const auto* end = begin + line.size();
        auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc{} || ptr != end) {
            throw std::runtime_error("read_csv: bad sample '" + line + "' in " +
                                     path.string());
        }
        series.samples.push_back(value);
    }
    return series;
}

}  // namespace tlisim
