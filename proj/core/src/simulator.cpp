#include "tlisim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "tlisim/cm_analysis.hpp"
#include "tlisim/control.hpp"

namespace tlisim {

const TimeSeries& RunResult::get(const std::string& name) const {
    const auto it = series.find(name);
    if (it == series.end()) {
        throw std::out_of_range("RunResult: no series named '" + name + "'");
    }
    return it->second;
}

namespace {

// First-order settling of the averaged boost input stage.
constexpr double kBoostLagSeconds = 1e-3;

// The P&O reference starts above the knee and walks down to the MPP.
constexpr double kMpptStartFraction = 0.8;

class VdcAverager {
  public:
    VdcAverager(std::size_t window, double initial)
        : buffer_(window, initial), sum_(initial * static_cast<double>(window)) {}

    double push(double value) {
        sum_ += value - buffer_[next_];
        buffer_[next_] = value;
        next_ = (next_ + 1) % buffer_.size();
        return sum_ / static_cast<double>(buffer_.size());
    }

  private:
    std::vector<double> buffer_;
    double sum_;
    std::size_t next_ = 0;
};

struct Recorder {
    TimeSeries* i_la;
    TimeSeries* i_lb;
    TimeSeries* i_cm;
    TimeSeries* i_grid;
    TimeSeries* i_ref;
    TimeSeries* v_an;
    TimeSeries* v_bn;
    TimeSeries* v_cm;
    TimeSeries* v_dm;
    TimeSeries* v_cpv;
    TimeSeries* v_dc;
    TimeSeries* v_grid;
    TimeSeries* mode;
    TimeSeries* switches;
};

DriveCoefficients blend(const DriveCoefficients& a, const DriveCoefficients& b,
                        double weight_a) {
    const double wb = 1.0 - weight_a;
    return {.c_a = weight_a * a.c_a + wb * b.c_a,
            .c_b = weight_a * a.c_b + wb * b.c_b,
            .s_a = weight_a * a.s_a + wb * b.s_a,
            .s_b = weight_a * a.s_b + wb * b.s_b};
}

}  // namespace

RunResult run_simulation(const SimConfig& cfg) {
    validate(cfg);
    const auto steps = static_cast<std::size_t>(
        std::llround(cfg.duration / cfg.dt));
    if (steps == 0) {
        throw ConfigError("duration must cover at least one step");
    }

    RunResult result;
    result.config = cfg;

    const struct {
        const char* name;
        const char* unit;
    } kSeries[] = {
        {"i_la", "A"},   {"i_lb", "A"},     {"i_cm", "A"},
        {"i_grid", "A"}, {"i_ref", "A"},    {"v_an", "V"},
        {"v_bn", "V"},   {"v_cm", "V"},     {"v_dm", "V"},
        {"v_cpv", "V"},  {"v_dc", "V"},     {"v_grid", "V"},
        {"mode", ""},    {"switches", ""},
    };
    for (const auto& [name, unit] : kSeries) {
        TimeSeries& ts = result.series[name];
        ts.name = name;
        ts.unit = unit;
        ts.dt = cfg.dt;
        ts.samples.reserve(steps + 1);
    }
    Recorder rec{
        .i_la = &result.series["i_la"],   .i_lb = &result.series["i_lb"],
        .i_cm = &result.series["i_cm"],   .i_grid = &result.series["i_grid"],
        .i_ref = &result.series["i_ref"], .v_an = &result.series["v_an"],
        .v_bn = &result.series["v_bn"],   .v_cm = &result.series["v_cm"],
        .v_dm = &result.series["v_dm"],   .v_cpv = &result.series["v_cpv"],
        .v_dc = &result.series["v_dc"],   .v_grid = &result.series["v_grid"],
        .mode = &result.series["mode"],   .switches = &result.series["switches"],
    };

    const SwitchedNetwork network(cfg);
    const GridSource& grid = network.grid();

    CircuitState state;
    state.v_dc = cfg.v_dc_ref;          // precharged DC link
    state.v_cpv = -0.5 * cfg.v_dc_ref;  // common-mode loop at equilibrium

    // PV + averaged boost stage
    const PvPanel panel =
        PvPanel::for_rated_power(cfg.p_out_nominal, cfg.v_oc, cfg.pv_exponent);
    MpptState mppt{.v_pv_ref = kMpptStartFraction * cfg.v_oc,
                   .last_power = 0.0,
                   .last_voltage = 0.0,
                   .step_size = cfg.mppt_step_v,
                   .increasing = true};
    double v_pv = mppt.v_pv_ref;
    const double boost_alpha = 1.0 - std::exp(-cfg.dt / kBoostLagSeconds);
    const auto mppt_interval = static_cast<std::size_t>(
        std::max(1.0, std::round(1.0 / (cfg.mppt_rate * cfg.dt))));

    // Outer voltage loop, fed by a ripple-cancelling moving average over
    // half a grid period (the DC link pulsates at twice the grid
    // frequency). The integral starts at the power-balance operating
    // point of the initial panel state.
    const double id_ref_start =
        2.0 * panel.power(v_pv) / std::max(cfg.grid_peak(), 1.0);
    VdcLoopState vdc_loop{.v_ref = cfg.v_dc_ref,
                          .kp = cfg.pi.kp,
                          .ki = cfg.pi.ki,
                          .windup_limit = cfg.pi.windup_limit,
                          .integral = std::min(id_ref_start,
                                               cfg.pi.windup_limit),
                          .id_ref = 0.0};
    vdc_loop.id_ref = vdc_loop.integral;
    const auto filter_window = static_cast<std::size_t>(
        std::max(1.0, std::round(0.5 / (cfg.grid_freq * cfg.dt))));
    VdcAverager v_dc_filter(filter_window, cfg.v_dc_ref);

    HbccState hbcc{.band_width = cfg.hbcc_band, .drive_up = true};

    double id_ref =
        cfg.ideal_dc_source ? cfg.nominal_id_ref() : vdc_loop.id_ref;

    // Classic unipolar modulation uses both zero states; successive
    // freewheel intervals alternate between the upper and lower short so
    // the CMV content sits at half the switching rate, as it does under
    // carrier-based unipolar PWM.
    bool h4u_zero_state_high = true;

    OperatingMode mode = OperatingMode::ActivePositive;

    for (std::size_t n = 0;; ++n) {
        const double t = state.t;
        const double theta = grid.angle(t);
        const double sin_now = std::sin(theta);

        // Controller state for the step ahead (zero-order hold).
        double i_boost = 0.0;
        if (n < steps && !cfg.ideal_dc_source) {
            v_pv += boost_alpha * (mppt.v_pv_ref - v_pv);
            const double i_pv = panel.current(v_pv);
            if (n % mppt_interval == 0) {
                mppt = mppt_step(mppt, v_pv, i_pv, cfg.v_oc);
            }
            const double v_dc_floor = 0.25 * cfg.v_dc_ref;
            i_boost = v_pv * i_pv / std::max(state.v_dc, v_dc_floor);

            const double v_dc_filtered = v_dc_filter.push(state.v_dc);
            vdc_loop = vdc_loop_step(vdc_loop, v_dc_filtered, cfg.dt);
            id_ref = vdc_loop.id_ref;
        }
        const double i_ref_now = reference_current(id_ref, theta);

        const PoleVoltages poles = network.pole_levels(mode, state.v_dc);
        const CmDm cm = decompose(poles);
        const double v_g = grid.voltage(t);

        rec.i_la->samples.push_back(state.i_la);
        rec.i_lb->samples.push_back(state.i_lb);
        rec.i_cm->samples.push_back(state.i_la + state.i_lb);
        rec.i_grid->samples.push_back(
            state.i_la + cfg.filter_shunt_c * grid.voltage_rate(t));
        rec.i_ref->samples.push_back(i_ref_now);
        rec.v_an->samples.push_back(poles.v_an);
        rec.v_bn->samples.push_back(poles.v_bn);
        rec.v_cm->samples.push_back(cm.v_cm);
        rec.v_dm->samples.push_back(cm.v_dm);
        rec.v_cpv->samples.push_back(state.v_cpv);
        rec.v_dc->samples.push_back(state.v_dc);
        rec.v_grid->samples.push_back(v_g);
        rec.mode->samples.push_back(static_cast<double>(static_cast<int>(mode)));
        rec.switches->samples.push_back(static_cast<double>(
            switch_vector(cfg.topology, mode).bitmask()));

        if (n == steps) break;

        // Trial step under the held mode; comparator events found on it
        // are averaged into the real step at their crossing fraction, so
        // switching instants do not snap to the sample grid.
        CircuitState trial = state;
        network.step(mode, i_boost, trial);

        const double theta_end = grid.angle(trial.t);
        const double sin_end = std::sin(theta_end);
        const int sign_end = sin_end >= 0.0 ? 1 : -1;
        const double i_ref_end = reference_current(id_ref, theta_end);

        const HbccDecision decision = hbcc_step(hbcc, trial.i_la, i_ref_end);
        const bool band_flip = decision.drive_up != hbcc.drive_up;
        const bool sign_flip = (sin_now >= 0.0) != (sin_end >= 0.0);
        hbcc = decision.state;

        const bool active_next = decision.drive_up == (sign_end > 0);
        OperatingMode mode_next = mode_from_command(sign_end, active_next);
        if (cfg.topology == TopologyKind::H4Unipolar && !active_next) {
            if (is_active(mode)) h4u_zero_state_high = !h4u_zero_state_high;
            mode_next = h4u_zero_state_high ? OperatingMode::FreewheelPositive
                                            : OperatingMode::FreewheelNegative;
        }

        if (mode_next == mode) {
            state = trial;
        } else {
            // Crossing fraction of the earliest event inside the step.
            double alpha = 1.0;
            if (band_flip) {
                const double edge = decision.drive_up ? -hbcc.band_width
                                                      : hbcc.band_width;
                const double e0 = state.i_la - i_ref_now;
                const double e1 = trial.i_la - i_ref_end;
                if (std::abs(e1 - e0) > 1e-30) {
                    alpha = (edge - e0) / (e1 - e0);
                }
            }
            if (sign_flip && std::abs(sin_now - sin_end) > 1e-30) {
                alpha = std::min(alpha, sin_now / (sin_now - sin_end));
            }
            alpha = std::clamp(alpha, 0.0, 1.0);

            network.step_blended(blend(network.mode_coefficients(mode),
                                       network.mode_coefficients(mode_next),
                                       alpha),
                                 i_boost, state);
            mode = mode_next;
        }
    }

    return result;
}

}  // namespace tlisim
