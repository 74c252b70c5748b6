#include "tlisim/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tlisim {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double rms_of_range(const std::vector<double>& samples, std::size_t begin,
                    std::size_t end) {
    if (end <= begin) {
        throw std::invalid_argument("rms: empty window");
    }
    double sum_sq = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
        sum_sq += samples[i] * samples[i];
    }
    return std::sqrt(sum_sq / static_cast<double>(end - begin));
}

}  // namespace

double rms(const TimeSeries& series) {
    validate(series);
    return rms_of_range(series.samples, 0, series.samples.size());
}

double rms(const TimeSeries& series, double t_begin, double t_end) {
    validate(series);
    if (!(t_end > t_begin)) {
        throw std::invalid_argument("rms: empty window");
    }
    if (t_end > series.duration() + 0.5 * series.dt) {
        throw std::invalid_argument("rms: window exceeds series duration");
    }
    const std::size_t begin = series.index_at(t_begin);
    const std::size_t end =
        std::min(series.samples.size(),
                 static_cast<std::size_t>(std::floor(t_end / series.dt)) + 1);
    return rms_of_range(series.samples, begin, end);
}

std::complex<double> fourier_component(const TimeSeries& series, double f,
                                       double t_begin, double t_end) {
    validate(series);
    if (!(f > 0.0)) {
        throw std::invalid_argument("fourier_component: f must be positive");
    }
    const std::size_t begin = series.index_at(t_begin);
    const std::size_t end = std::min(
        series.samples.size(),
        static_cast<std::size_t>(std::llround(t_end / series.dt)));
    if (end <= begin) {
        throw std::invalid_argument("fourier_component: empty window");
    }
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = begin; i < end; ++i) {
        const double angle = kTwoPi * f * series.time_at(i);
        acc += series.samples[i] *
               std::complex<double>{std::cos(angle), -std::sin(angle)};
    }
    return acc * (2.0 / static_cast<double>(end - begin));
}

double thd(const TimeSeries& series, double fundamental_hz, int max_harmonic,
           double t_begin) {
    validate(series);
    if (!(fundamental_hz > 0.0) || max_harmonic < 2) {
        throw std::invalid_argument("thd: bad fundamental or harmonic count");
    }
    const double period = 1.0 / fundamental_hz;
    const double available = series.duration() - t_begin;
    const int periods = static_cast<int>(std::floor(available / period + 1e-9));
    if (periods < 5) {
        throw std::invalid_argument(
            "thd: series must span at least 5 fundamental periods");
    }
    const double t_end = t_begin + periods * period;
    const double h1 = std::abs(
        fourier_component(series, fundamental_hz, t_begin, t_end));
    const double floor_level = 1e-9 * std::max(1.0, rms(series));
    if (h1 < floor_level) {
        throw std::invalid_argument("thd: fundamental below noise floor");
    }
    double sum_sq = 0.0;
    for (int k = 2; k <= max_harmonic; ++k) {
        const double hk = std::abs(
            fourier_component(series, k * fundamental_hz, t_begin, t_end));
        sum_sq += hk * hk;
    }
    return std::sqrt(sum_sq) / h1;
}

double displacement_pf(const TimeSeries& v, const TimeSeries& i,
                       double fundamental_hz, double t_begin) {
    validate(v);
    validate(i);
    if (v.dt != i.dt || v.samples.size() != i.samples.size()) {
        throw std::invalid_argument("displacement_pf: series not aligned");
    }
    const double period = 1.0 / fundamental_hz;
    const int periods = static_cast<int>(
        std::floor((v.duration() - t_begin) / period + 1e-9));
    if (periods < 1) {
        throw std::invalid_argument("displacement_pf: window too short");
    }
    const double t_end = t_begin + periods * period;
    const auto hv = fourier_component(v, fundamental_hz, t_begin, t_end);
    const auto hi = fourier_component(i, fundamental_hz, t_begin, t_end);
    if (std::abs(hv) < 1e-12 || std::abs(hi) < 1e-12) {
        throw std::invalid_argument("displacement_pf: degenerate fundamental");
    }
    return std::cos(std::arg(hv) - std::arg(hi));
}

Flatness cmv_flatness(const TimeSeries& v_cm, double v_dc_nominal,
                      double blanking, double spike_threshold, int min_dwell) {
    validate(v_cm);
    if (spike_threshold <= 0.0) spike_threshold = 0.05 * v_dc_nominal;
    const double target = 0.5 * v_dc_nominal;
    const std::size_t begin = v_cm.index_at(blanking);

    Flatness result;
    int run = 0;        // consecutive samples beyond the spike threshold
    bool counted = false;
    for (std::size_t i = begin; i < v_cm.samples.size(); ++i) {
        const double dev = std::abs(v_cm.samples[i] - target);
        result.max_deviation = std::max(result.max_deviation, dev);
        if (dev > spike_threshold) {
            ++run;
            if (run >= min_dwell && !counted) {
                ++result.spike_count;
                counted = true;
            }
        } else {
            run = 0;
            counted = false;
        }
    }
    return result;
}

ComplianceReport vde_check(const TimeSeries& i_cm, double window_s,
                           double threshold_a) {
    validate(i_cm);
    ComplianceReport report;
    report.rms_leakage = rms(i_cm);
    for (double v : i_cm.samples) {
        report.peak_leakage = std::max(report.peak_leakage, std::abs(v));
    }
    const std::size_t window =
        std::max<std::size_t>(1, static_cast<std::size_t>(
                                     std::llround(window_s / i_cm.dt)));
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < i_cm.samples.size(); ++i) {
        const double x = i_cm.samples[i];
        sum_sq += x * x;
        if (i >= window) {
            const double y = i_cm.samples[i - window];
            sum_sq = std::max(sum_sq - y * y, 0.0);
        }
        // Partial windows near the start use the samples seen so far.
        const std::size_t filled = std::min(i + 1, window);
        const double threshold_sum_sq =
            threshold_a * threshold_a * static_cast<double>(filled);
        if (sum_sq > threshold_sum_sq && !report.tripped) {
            report.tripped = true;
            report.trip_time = i_cm.time_at(i);
        }
    }
    return report;
}

DmvLevels dmv_levels(const TimeSeries& v_dm, double v_dc, double tol,
                     int min_dwell) {
    validate(v_dm);
    if (!(tol > 0.0)) {
        throw std::invalid_argument("dmv_levels: tol must be positive");
    }
    const auto& x = v_dm.samples;
    const std::size_t n = x.size();

    // Partition into maximal runs whose spread stays within tol. Runs
    // outside the DC rails are no plateau of a bridge output and stay
    // unclassified.
    struct Run {
        double mean = 0.0;
        std::size_t count = 0;
    };
    std::vector<Run> runs;
    std::size_t classified = 0;
    std::size_t i = 0;
    while (i < n) {
        double lo = x[i];
        double hi = x[i];
        double sum = x[i];
        std::size_t j = i + 1;
        while (j < n) {
            const double lo2 = std::min(lo, x[j]);
            const double hi2 = std::max(hi, x[j]);
            if (hi2 - lo2 > tol) break;
            lo = lo2;
            hi = hi2;
            sum += x[j];
            ++j;
        }
        const std::size_t len = j - i;
        const double mean = sum / static_cast<double>(len);
        if (len >= static_cast<std::size_t>(min_dwell) &&
            std::abs(mean) <= v_dc + tol) {
            runs.push_back({mean, len});
            classified += len;
        }
        i = j;
    }

    DmvLevels result;
    result.unclassified_fraction =
        1.0 - static_cast<double>(classified) / static_cast<double>(n);
    if (result.unclassified_fraction > 0.01) {
        throw std::runtime_error(
            "dmv_levels: unclassifiable plateau fraction exceeds 1%");
    }

    // Cluster run means: sort, then merge neighbours within tol,
    // weighting by run length.
    std::sort(runs.begin(), runs.end(),
              [](const Run& a, const Run& b) { return a.mean < b.mean; });
    std::vector<double> centers;
    std::vector<double> weights;
    for (const Run& run : runs) {
        if (!centers.empty() && std::abs(run.mean - centers.back()) <= tol) {
            const double w = weights.back() + static_cast<double>(run.count);
            centers.back() = (centers.back() * weights.back() +
                              run.mean * static_cast<double>(run.count)) / w;
            weights.back() = w;
        } else {
            centers.push_back(run.mean);
            weights.push_back(static_cast<double>(run.count));
        }
    }
    result.levels = std::move(centers);
    return result;
}

void fft_radix2(std::vector<std::complex<double>>& data) {
    const std::size_t n = data.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw std::invalid_argument("fft_radix2: size must be a power of two");
    }
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -kTwoPi / static_cast<double>(len);
        const std::complex<double> w_len{std::cos(angle), std::sin(angle)};
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w{1.0, 0.0};
            for (std::size_t k = 0; k < len / 2; ++k) {
                const auto u = data[i + k];
                const auto v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
}

double dominant_frequency(const TimeSeries& series, double f_min) {
    validate(series);
    const std::size_t n = std::bit_floor(series.samples.size());
    if (n < 8) {
        throw std::invalid_argument("dominant_frequency: series too short");
    }
    const std::size_t offset = series.samples.size() - n;
    std::vector<std::complex<double>> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        // Hann window keeps switching-harmonic leakage away from the peak.
        const double w = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                              static_cast<double>(n - 1));
        data[i] = series.samples[offset + i] * w;
    }
    fft_radix2(data);
    const double df = 1.0 / (series.dt * static_cast<double>(n));
    const std::size_t k_min =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(f_min / df)));
    std::size_t best = k_min;
    double best_mag = 0.0;
    for (std::size_t k = k_min; k <= n / 2; ++k) {
        const double mag = std::abs(data[k]);
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return static_cast<double>(best) * df;
}

}  // namespace tlisim
