// End-to-end acceptance checks for the inverter simulator. Each check
// prints one [PASS]/[FAIL] line; the process exits non-zero if any fail.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "tlisim/circuit.hpp"
#include "tlisim/cm_analysis.hpp"
#include "tlisim/config.hpp"
#include "tlisim/control.hpp"
#include "tlisim/metrics.hpp"
#include "tlisim/scenario.hpp"
#include "tlisim/simulator.hpp"
#include "tlisim/topology.hpp"

using namespace tlisim;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail) {
    std::printf("[%s] %2d. %s: %s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

std::string fmt(const char* format, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof(buffer), format, args...);
    return buffer;
}

// --------------------------------------------------------------------------
// 1. Four-mode pole-voltage table, exact arithmetic
// --------------------------------------------------------------------------
void criterion_1() {
    const double v_dc = 400.0;
    const OperatingMode modes[] = {
        OperatingMode::ActivePositive, OperatingMode::FreewheelPositive,
        OperatingMode::ActiveNegative, OperatingMode::FreewheelNegative};
    const double expected_dm[] = {v_dc, 0.0, -v_dc, 0.0};
    bool ok = true;
    for (int i = 0; i < 4; ++i) {
        const auto poles = pole_voltages(TopologyKind::Hch5D2, modes[i], v_dc);
        if (!poles) {
            ok = false;
            continue;
        }
        const CmDm cd = decompose(*poles);
        ok = ok && cd.v_cm == v_dc / 2.0 && cd.v_dm == expected_dm[i];
    }
    report(1, "four-mode CMV/DMV table (exact)", ok,
           ok ? "V_CM = V_DC/2 and V_DM in {+V_DC, 0, -V_DC, 0} in all modes"
              : "table mismatch");
}

// --------------------------------------------------------------------------
// 2. Leakage comparison between topologies
// --------------------------------------------------------------------------
void criterion_2(const MetricsBlock& hch5, const MetricsBlock& h4u) {
    const double clamped_ma = 1e3 * hch5.leakage_rms;
    const double h4_ma = 1e3 * h4u.leakage_rms;
    const double ratio = h4u.leakage_rms / hch5.leakage_rms;
    const bool ok =
        clamped_ma < 10.0 && h4_ma >= 100.0 && h4_ma <= 600.0 && ratio >= 50.0;
    report(2, "leakage comparison", ok,
           fmt("HCH5-D2 %.3f mA (< 10), H4 unipolar %.1f mA (in [100, 600]), "
               "ratio %.0fx (>= 50)",
               clamped_ma, h4_ma, ratio));
}

// --------------------------------------------------------------------------
// 3. CMV flatness of the clamped topology
// --------------------------------------------------------------------------
void criterion_3(const MetricsBlock& hch5) {
    const bool ok = hch5.cmv_max_deviation < 4.0;
    report(3, "CMV flatness", ok,
           fmt("max |v_cm - 200 V| = %.2f V after 40 ms blanking (< 4 V)",
               hch5.cmv_max_deviation));
}

// --------------------------------------------------------------------------
// 4. DMV unipolarity
// --------------------------------------------------------------------------
void criterion_4(const RunResult& hch5_run) {
    const SimConfig& cfg = hch5_run.config;
    const TimeSeries& v_dm = hch5_run.get("v_dm");
    TimeSeries tail = v_dm;
    const std::size_t begin = v_dm.index_at(cfg.metrics_blanking);
    tail.samples.assign(v_dm.samples.begin() + static_cast<long>(begin),
                        v_dm.samples.end());
    bool ok = true;
    std::string detail;
    try {
        const DmvLevels levels = dmv_levels(tail, cfg.v_dc_ref, 8.0);
        const double expected[] = {-400.0, 0.0, 400.0};
        ok = levels.levels.size() == 3;
        if (ok) {
            for (int i = 0; i < 3; ++i) {
                ok = ok && std::abs(levels.levels[i] - expected[i]) <= 8.0;
            }
        }
        ok = ok && levels.unclassified_fraction < 0.01;
        detail = fmt("levels {%+.1f, %+.1f, %+.1f} V (tol 8 V), "
                     "unclassified %.3f%% (< 1%%)",
                     levels.levels.size() > 0 ? levels.levels[0] : NAN,
                     levels.levels.size() > 1 ? levels.levels[1] : NAN,
                     levels.levels.size() > 2 ? levels.levels[2] : NAN,
                     100.0 * levels.unclassified_fraction);
    } catch (const std::exception& err) {
        ok = false;
        detail = err.what();
    }
    report(4, "DMV unipolarity", ok, detail);
}

// --------------------------------------------------------------------------
// 5. DC-link regulation over the final five grid cycles
// --------------------------------------------------------------------------
void criterion_5(const MetricsBlock& hch5) {
    const bool ok = hch5.vdc_steady_error < 8.0;
    report(5, "DC-link regulation", ok,
           fmt("steady-state max |v_dc - 400 V| = %.2f V (< 8 V)",
               hch5.vdc_steady_error));
}

// --------------------------------------------------------------------------
// 6. Unity power factor and grid-current distortion
// --------------------------------------------------------------------------
void criterion_6(const MetricsBlock& hch5) {
    const bool ok = hch5.displacement_pf > 0.99 && hch5.grid_thd < 0.05;
    report(6, "unity power factor", ok,
           fmt("displacement PF = %.4f (> 0.99), THD = %.2f%% (< 5%%)",
               hch5.displacement_pf, 100.0 * hch5.grid_thd));
}

// --------------------------------------------------------------------------
// 7. Resonant frequency: simulated ring vs the analytic loop frequency
// --------------------------------------------------------------------------
void criterion_7() {
    SimConfig cfg;
    const CmEquivalentCircuit ckt{cfg.l_a, cfg.l_b, cfg.c_pv, cfg.grid_freq};
    const double analytic = resonant_frequency(ckt);

    // Independent evaluation through a different algebraic route, in
    // extended precision.
    const long double l_eq =
        (static_cast<long double>(cfg.l_a) * static_cast<long double>(cfg.l_b)) /
        (static_cast<long double>(cfg.l_a) + static_cast<long double>(cfg.l_b));
    const long double independent =
        1.0L / (2.0L * std::numbers::pi_v<long double> *
                std::sqrt(l_eq * static_cast<long double>(cfg.c_pv)));
    const double rel_analytic =
        std::abs(analytic - static_cast<double>(independent)) /
        static_cast<double>(independent);

    // Release the unclamped freewheel island from the driven equilibrium
    // and locate the ring line in the spectrum.
    cfg.topology = TopologyKind::H5Plain;
    cfg.ideal_dc_source = true;
    const SwitchedNetwork network(cfg);
    CircuitState state{.i_la = 0.0, .i_lb = 0.0, .v_cpv = -0.5 * cfg.v_dc_ref,
                       .v_dc = cfg.v_dc_ref, .t = 0.0};
    TimeSeries ring{.name = "v_cpv", .unit = "V", .dt = cfg.dt, .samples = {}};
    for (int i = 0; i < (1 << 16); ++i) {
        network.step(OperatingMode::FreewheelPositive, 0.0, state);
        ring.samples.push_back(state.v_cpv);
    }
    const double measured = dominant_frequency(ring, 5e3);
    const double rel_ring = std::abs(measured - analytic) / analytic;

    const bool ok = rel_analytic < 5e-7 && rel_ring < 0.02 &&
                    std::abs(analytic - 22801.6613805) < 1e-3;
    report(7, "resonant-frequency oracle", ok,
           fmt("analytic %.4f Hz (indep. route rel. err %.1e), "
               "freewheel ring %.1f Hz (off by %.2f%%, tol 2%%)",
               analytic, rel_analytic, measured, 100.0 * rel_ring));
}

// --------------------------------------------------------------------------
// 8. Analyzer unit oracles and property checks
// --------------------------------------------------------------------------
void criterion_8() {
    bool ok = true;
    std::string why = "matched-inductor identity, resonance marker, "
                      "10^4-case bijection and homogeneity";

    // Matched inductors: the DM term drops out exactly.
    const CmEquivalentCircuit matched{4.06e-3, 4.06e-3, 24e-9, 50.0};
    for (double v_dm : {-400.0, -1.0, 0.0, 237.5, 400.0}) {
        if (total_cmv({200.0, v_dm}, matched) != 200.0) ok = false;
    }

    // The phasor estimate flags the resonance exactly at the loop's
    // natural frequency.
    CmEquivalentCircuit at_res = matched;
    at_res.frequency = resonant_frequency(matched);
    if (!leakage_phasor(123.0, at_res).resonant) ok = false;

    std::mt19937 rng(424242);
    std::uniform_real_distribution<double> volts(-800.0, 800.0);
    std::uniform_real_distribution<double> positive(0.1, 500.0);
    std::uniform_real_distribution<double> freq(1.0, 1e5);
    for (int i = 0; i < 10000 && ok; ++i) {
        // Bijection of the CM/DM mapping.
        const PoleVoltages p{volts(rng), volts(rng)};
        const PoleVoltages back = recompose(decompose(p));
        if (std::abs(back.v_an - p.v_an) > 1e-9 ||
            std::abs(back.v_bn - p.v_bn) > 1e-9) {
            ok = false;
        }
        // Degree-1 homogeneity of the leakage magnitude.
        const CmEquivalentCircuit ckt{4.06e-3, 4.06e-3, 24e-9, freq(rng)};
        const double v = positive(rng);
        const double a = positive(rng) / 100.0;
        const LeakageEstimate base = leakage_phasor(v, ckt);
        const LeakageEstimate scaled = leakage_phasor(a * v, ckt);
        if (base.resonant != scaled.resonant) ok = false;
        if (!base.resonant &&
            std::abs(scaled.amps - a * base.amps) > 1e-9 * (1.0 + base.amps)) {
            ok = false;
        }
    }
    report(8, "CM analyzer oracles", ok, ok ? why : "oracle violated");
}

// --------------------------------------------------------------------------
// 9. Residual-current trip logic
// --------------------------------------------------------------------------
void criterion_9(const RunResult& hch5_run) {
    TimeSeries fault{.name = "i_cm", .unit = "A", .dt = 1e-5, .samples = {}};
    fault.samples.reserve(50000);
    for (int i = 0; i < 50000; ++i) {
        const double t = 1e-5 * i;
        fault.samples.push_back(
            t >= 0.1 ? 0.5 * std::sin(2.0 * std::numbers::pi * 50.0 * t) : 0.0);
    }
    const ComplianceReport synthetic = vde_check(fault);
    const ComplianceReport clamped = vde_check(hch5_run.get("i_cm"));

    const bool ok = synthetic.tripped && synthetic.trip_time &&
                    *synthetic.trip_time <= 0.4 && !clamped.tripped;
    report(9, "residual-current trip logic", ok,
           fmt("synthetic 0.5 A fault trips at %.3f s (<= 0.4 s); "
               "clamped run %s (RMS %.3f mA)",
               synthetic.trip_time.value_or(-1.0),
               clamped.tripped ? "TRIPPED" : "stays quiet",
               1e3 * clamped.rms_leakage));
}

// --------------------------------------------------------------------------
// 10. Numerical hygiene: step-size convergence and energy conservation
// --------------------------------------------------------------------------
void criterion_10(const MetricsBlock& hch5, const MetricsBlock& h4u,
                  const MetricsBlock& hch5_half, const MetricsBlock& h4u_half) {
    const double d_clamped =
        std::abs(hch5_half.leakage_rms - hch5.leakage_rms) /
        hch5_half.leakage_rms;
    const double d_h4 =
        std::abs(h4u_half.leakage_rms - h4u.leakage_rms) / h4u_half.leakage_rms;
    const double d_flat =
        std::abs(hch5_half.cmv_max_deviation - hch5.cmv_max_deviation) /
        hch5_half.cmv_max_deviation;

    // Undamped LC loop drift over 1000 steps.
    SimConfig lc;
    lc.topology = TopologyKind::H5Plain;
    lc.v_grid_rms = 0.0;
    lc.r_s = 0.0;
    lc.r_g = 0.0;
    lc.ideal_dc_source = true;
    const SwitchedNetwork network(lc);
    CircuitState state{.i_la = 0.0, .i_lb = 0.0, .v_cpv = 150.0,
                       .v_dc = lc.v_dc_ref, .t = 0.0};
    auto energy = [&lc](const CircuitState& s) {
        return 0.5 * lc.l_a * s.i_la * s.i_la + 0.5 * lc.l_b * s.i_lb * s.i_lb +
               0.5 * lc.c_pv * s.v_cpv * s.v_cpv;
    };
    const double e0 = energy(state);
    double drift = 0.0;
    for (int i = 0; i < 1000; ++i) {
        network.step(OperatingMode::FreewheelPositive, 0.0, state);
        drift = std::max(drift, std::abs(energy(state) - e0) / e0);
    }

    const bool ok =
        d_clamped < 0.01 && d_h4 < 0.01 && d_flat < 0.01 && drift < 1e-3;
    report(10, "numerical hygiene", ok,
           fmt("dt-halving deltas: clamped leakage %.2f%%, H4 leakage %.2f%%, "
               "CMV flatness %.2f%% (all < 1%%); LC energy drift %.1e (< 1e-3)",
               100.0 * d_clamped, 100.0 * d_h4, 100.0 * d_flat, drift));
}

}  // namespace

int main() {
    std::printf("acceptance: bench parameters, 0.5 s runs at dt = 1 us\n");

    SimConfig base;  // bench defaults

    SimConfig hch5_cfg = base;
    hch5_cfg.topology = TopologyKind::Hch5D2;
    SimConfig h4u_cfg = base;
    h4u_cfg.topology = TopologyKind::H4Unipolar;

    const RunResult hch5_run = run_simulation(hch5_cfg);
    const MetricsBlock hch5 = compute_metrics(hch5_run);
    const RunResult h4u_run = run_simulation(h4u_cfg);
    const MetricsBlock h4u = compute_metrics(h4u_run);

    SimConfig hch5_half_cfg = hch5_cfg;
    hch5_half_cfg.dt = 0.5e-6;
    SimConfig h4u_half_cfg = h4u_cfg;
    h4u_half_cfg.dt = 0.5e-6;
    const MetricsBlock hch5_half = compute_metrics(run_simulation(hch5_half_cfg));
    const MetricsBlock h4u_half = compute_metrics(run_simulation(h4u_half_cfg));

    criterion_1();
    criterion_2(hch5, h4u);
    criterion_3(hch5);
    criterion_4(hch5_run);
    criterion_5(hch5);
    criterion_6(hch5);
    criterion_7();
    criterion_8();
    criterion_9(hch5_run);
    criterion_10(hch5, h4u, hch5_half, h4u_half);

    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return 1;
}
