#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "tlisim/timeseries.hpp"

namespace tlisim {

/// Root-mean-square of the whole series.
double rms(const TimeSeries& series);

/// RMS restricted to samples in [t_begin, t_end]. Throws on an empty
/// window.
double rms(const TimeSeries& series, double t_begin, double t_end);

/// Fourier component of the series at frequency f over [t_begin, t_end),
/// normalized so a cosine of amplitude A yields magnitude A. Direct
/// correlation, exact for integer numbers of periods.
std::complex<double> fourier_component(const TimeSeries& series, double f,
                                       double t_begin, double t_end);

/// Total harmonic distortion via harmonic-bin correlation over the
/// largest whole number of fundamental periods that fits after t_begin.
/// Requires at least 5 fundamental periods and a fundamental magnitude
/// above the noise floor.
double thd(const TimeSeries& series, double fundamental_hz, int max_harmonic,
           double t_begin = 0.0);

/// Cosine of the phase difference between the fundamental phasors of v
/// and i. Requires aligned sampling and non-degenerate fundamentals.
double displacement_pf(const TimeSeries& v, const TimeSeries& i,
                       double fundamental_hz, double t_begin = 0.0);

/// Flatness of a common-mode voltage profile against v_dc_nominal / 2.
struct Flatness {
    double max_deviation = 0.0;  // [V], after blanking
    int spike_count = 0;         // excursions beyond the spike threshold
};

/// Deviation measured after `blanking` seconds; a spike is an excursion
/// beyond `spike_threshold` (default 5% of v_dc_nominal) lasting at least
/// `min_dwell` samples.
Flatness cmv_flatness(const TimeSeries& v_cm, double v_dc_nominal,
                      double blanking = 0.04, double spike_threshold = -1.0,
                      int min_dwell = 2);

/// Residual-current compliance result. trip_time is the instant the
/// sliding-window RMS first exceeds the threshold; the breaker is assumed
/// to open there, well inside the 0.3 s allowance.
struct ComplianceReport {
    double rms_leakage = 0.0;   // whole-series RMS [A]
    double peak_leakage = 0.0;  // max |i| [A]
    bool tripped = false;
    std::optional<double> trip_time;  // [s], present iff tripped
};

ComplianceReport vde_check(const TimeSeries& i_cm, double window_s = 0.02,
                           double threshold_a = 0.3);

/// Distinct voltage plateaus of a switched waveform. Samples belong to a
/// plateau when they sit in a run of at least `min_dwell` samples within
/// `tol` of each other; runs are clustered by level. Throws when more
/// than 1% of samples cannot be classified.
struct DmvLevels {
    std::vector<double> levels;  // ascending cluster centers [V]
    double unclassified_fraction = 0.0;
};

DmvLevels dmv_levels(const TimeSeries& v_dm, double v_dc, double tol,
                     int min_dwell = 2);

/// Frequency of the largest-magnitude FFT bin at or above f_min, using
/// the trailing power-of-two window of the series.
double dominant_frequency(const TimeSeries& series, double f_min);

/// In-place radix-2 FFT; size must be a power of two.
void fft_radix2(std::vector<std::complex<double>>& data);

}  // namespace tlisim
