// Acceptance run: one PASS/FAIL line per criterion, preceded by the measured
// values. Reference values come from closed forms evaluated here; the quoted
// decimal targets are printed next to them with their deviation.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "nhdqpt/biorth_state.hpp"
#include "nhdqpt/dqpt_analysis.hpp"
#include "nhdqpt/dynamics.hpp"
#include "nhdqpt/errors.hpp"
#include "nhdqpt/numeric_kernel.hpp"
#include "nhdqpt/ssh_model.hpp"
#include "support.hpp"

using namespace nhdqpt;
using testing::dist;
using testing::dist_vec;

namespace {

// Pinned tolerances.
constexpr double kCrossingTol = 1e-4;    // Fisher-zero axis crossing vs closed form
constexpr double kCuspTol = 2.5e-3;      // one time step at T = 2400 over [0, 6]
constexpr double kJumpTol = 0.05;        // winding jump height
constexpr std::size_t kJumpWindow = 10;  // samples on each side of t_c when measuring a jump
constexpr double kRuntimeBudget = 30.0;  // seconds, single-threaded
constexpr double kNullJumpTol = 0.05;    // largest consecutive |delta nu| without DQPTs
constexpr double kAxisTol = 1e-10;       // |Re z| on the imaginary axis
constexpr double kFlatWindingTol = 0.02;
constexpr double kModeTol = 1e-3;        // bulk critical mode vs closed form
constexpr double kEigenTol = 1e-10;
constexpr double kExpmTol = 1e-9;
constexpr double kTraceTol = 1e-9;
constexpr double kGaugeTol = 1e-6;
constexpr double kEchoTol = 1e-10;
constexpr double kResidualTol = 1e-8;
constexpr double kZakTol = 2e-2;
constexpr double kContrastMin = 1e-3;
constexpr double kRefinedTol = 1e-10;

struct Criterion {
    int id;
    std::string title;
    bool pass = true;

    void check(bool ok, const char* fmt, auto... args) {
        pass = pass && ok;
        std::printf("    [%s] ", ok ? "ok" : "FAIL");
        std::printf(fmt, args...);
        std::printf("\n");
    }
    void note(const char* fmt, auto... args) {
        std::printf("    [info] ");
        std::printf(fmt, args...);
        std::printf("\n");
    }
};

QuenchSpec quench(double q, double eta, double qf, double etaf, double t_max, std::size_t steps) {
    QuenchSpec s;
    s.initial = {q, eta};
    s.final = {qf, etaf};
    s.grid = ssh::MomentumGrid::midpoint(2000);
    s.times = {t_max, steps};
    return s;
}

// Real d^2 = |1 + q e^{ik}|^2 - eta^2.
double d_squared(const ssh::Params& p, double k) { return 1.0 + p.q * p.q + 2.0 * p.q * std::cos(k) - p.eta * p.eta; }

// Momentum with Re(d^i . d^f) = 0 for two PT-symmetric parameter sets.
double closed_form_kc(const ssh::Params& i, const ssh::Params& f) {
    return std::acos(-(1.0 + i.q * f.q - i.eta * f.eta) / (i.q + f.q));
}

// Exceptional momentum where d^2 = 0.
double closed_form_ep(const ssh::Params& p) { return std::acos((p.eta * p.eta - 1.0 - p.q * p.q) / (2.0 * p.q)); }

// Linear interpolation of the first sign change of Re z along k.
std::optional<double> axis_crossing(const FisherZeroCurve& c) {
    for (std::size_t j = 0; j + 1 < c.zs.size(); ++j) {
        const double a = c.zs[j].real(), b = c.zs[j + 1].real();
        if (a == 0.0) return c.ks[j];
        if (a * b < 0.0) return c.ks[j] + (c.ks[j + 1] - c.ks[j]) * a / (a - b);
    }
    return std::nullopt;
}

// nu(t + w dt) - nu(t - w dt); NaN when the window leaves the series or hits an invalid sample.
double jump_at(const WindingSeries& w, double dt, double t) {
    const auto j = static_cast<std::size_t>(std::lround(t / dt));
    if (j < kJumpWindow || j + kJumpWindow >= w.re_nu.size()) return NAN;
    for (std::size_t i = j - kJumpWindow; i <= j + kJumpWindow; ++i) {
        if (!w.valid[i]) return NAN;
    }
    return w.re_nu[j + kJumpWindow] - w.re_nu[j - kJumpWindow];
}

double nearest_cusp(const std::vector<double>& cusps, double t) {
    double best = INFINITY;
    for (double c : cusps) best = std::min(best, std::abs(c - t));
    return best;
}

double wrapped(double x) { return std::remainder(x, 2.0 * kPi); }

Criterion criterion1() {
    Criterion c{1, "PT -> PT quench (0.5, 0.4) -> (2, 0.4): crossing, cusp, unit jumps, runtime"};
    const auto spec = quench(0.5, 0.4, 2.0, 0.4, 6.0, 2400);
    const auto start = std::chrono::steady_clock::now();
    const auto curve = fisher_zeros(spec, 0);
    const auto set = critical_modes(spec);
    const auto rate = rate_function(spec);
    const auto cusps = detect_cusps(rate);
    const auto w = winding_number(spec);
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const double k_ref = closed_form_kc(spec.initial, spec.final);
    const double d_f = std::sqrt(d_squared(spec.final, k_ref));
    const auto crossing = axis_crossing(curve);
    c.check(crossing.has_value() && std::abs(*crossing - k_ref) <= kCrossingTol,
            "l = 0 axis crossing k = %.7f vs closed form %.7f (|diff| %.2e <= %.0e)", crossing.value_or(NAN), k_ref,
            std::abs(crossing.value_or(NAN) - k_ref), kCrossingTol);
    c.note("quoted target 2.39884 differs from the closed form arccos(-0.736) by %.2e", std::abs(2.39884 - k_ref));

    const double tc0 = kPi / (2.0 * d_f);
    c.check(!cusps.empty() && std::abs(cusps.front() - tc0) <= kCuspTol,
            "first cusp t = %.5f vs t_c0 = %.5f (|diff| %.2e <= %.1e)", cusps.empty() ? NAN : cusps.front(), tc0,
            cusps.empty() ? NAN : std::abs(cusps.front() - tc0), kCuspTol);
    c.note("quoted target 1.14086: |first cusp - 1.14086| = %.2e", cusps.empty() ? NAN : std::abs(cusps.front() - 1.14086));

    for (int l = 0; l <= 2; ++l) {
        const double t = tc0 + l * kPi / d_f;
        const double jump = jump_at(w, spec.times.step(), t);
        c.check(std::abs(jump - 1.0) <= kJumpTol, "Re nu jump at t_c%d = %.5f: %.4f (1 +- %.2f)", l, t, jump, kJumpTol);
    }
    c.check(elapsed < kRuntimeBudget, "runtime %.2f s (< %.0f s) for zeros, critical set, rate, cusps, winding", elapsed,
            kRuntimeBudget);
    c.note("critical set: %zu mode(s), %zu time(s) up to t = 6", set.modes.size(), set.times.size());
    return c;
}

Criterion criterion2() {
    Criterion c{2, "PT -> PT quench (1.5, 0.4) -> (2, 0.4): no DQPT"};
    const auto spec = quench(1.5, 0.4, 2.0, 0.4, 6.0, 2400);
    const auto set = critical_modes(spec);
    const auto cusps = detect_cusps(rate_function(spec));
    const auto w = winding_number(spec);
    c.check(set.modes.empty() && set.times.empty() && !set.aperiodic_band, "critical set empty (%zu modes, %zu times)",
            set.modes.size(), set.times.size());
    c.check(cusps.empty(), "detect_cusps empty (%zu found)", cusps.size());
    double max_step = 0.0;
    bool all_valid = true;
    for (std::size_t i = 0; i + 1 < w.re_nu.size(); ++i) {
        all_valid = all_valid && w.valid[i] && w.valid[i + 1];
        max_step = std::max(max_step, std::abs(w.re_nu[i + 1] - w.re_nu[i]));
    }
    c.check(all_valid && max_step <= kNullJumpTol, "max consecutive |delta Re nu| = %.2e (<= %.2f), all samples valid",
            max_step, kNullJumpTol);
    c.note("net drift Re nu(6) - Re nu(0) = %.4f", w.re_nu.back() - w.re_nu.front());
    return c;
}

Criterion criterion3() {
    Criterion c{3, "boundary quench (1, 0) -> (2, 0): k_c = pi, half jumps"};
    const auto spec = quench(1.0, 0.0, 2.0, 0.0, 6.0, 2400);
    const auto set = critical_modes(spec);
    const auto w = winding_number(spec);
    const double dt = spec.times.step();
    c.check(set.modes.size() == 1 && set.modes[0] == kPi, "critical modes {%s%.17g} == {pi}",
            set.modes.size() > 1 ? "...," : "", set.modes.empty() ? NAN : set.modes[0]);

    const double d_f = std::abs(1.0 - 2.0);
    const double tc0 = 0.5 * kPi / d_f;
    const double listed = set.times.empty() ? NAN : set.times.front().t;
    c.check(std::abs(listed - tc0) <= kCuspTol, "listed t_c0 = %.6f vs pi/2 (|diff| %.2e <= %.1e)", listed,
            std::abs(listed - tc0), kCuspTol);

    // locate the l = 0 jump in the series: where nu passes half way between its plateaus
    const auto j0 = static_cast<std::size_t>(std::lround(tc0 / dt));
    const double before = w.re_nu[j0 - kJumpWindow], after = w.re_nu[j0 + kJumpWindow];
    const double mid = 0.5 * (before + after);
    double located = NAN;
    for (std::size_t j = j0 - kJumpWindow; j < j0 + kJumpWindow; ++j) {
        const double a = w.re_nu[j] - mid, b = w.re_nu[j + 1] - mid;
        if (a == 0.0 || a * b < 0.0) {
            located = (static_cast<double>(j) + (a == 0.0 ? 0.0 : a / (a - b))) * dt;
            break;
        }
    }
    c.check(std::abs(located - tc0) <= kCuspTol, "first winding jump centred at t = %.5f vs pi/2 (|diff| %.2e <= %.1e)",
            located, std::abs(located - tc0), kCuspTol);
    for (int l = 0; l <= 1; ++l) {
        const double t = (l + 0.5) * kPi / d_f;
        const double jump = jump_at(w, dt, t);
        c.check(std::abs(std::abs(jump) - 0.5) <= kJumpTol, "Re nu jump at t_c%d = %.5f: %.4f (0.5 +- %.2f)", l, t, jump,
                kJumpTol);
    }
    return c;
}

Criterion criterion4() {
    Criterion c{4, "all-imaginary quench (0.5, 2) -> (0.5, 0.2): axis zeros, flat winding, aperiodic band"};
    const auto spec = quench(0.5, 2.0, 0.5, 0.2, 6.0, 2400);
    const auto curve = fisher_zeros(spec, 0);
    double worst = 0.0;
    for (const auto& z : curve.zs) worst = std::max(worst, std::abs(z.real()));
    c.check(worst <= kAxisTol, "max_k |Re z_0(k)| = %.2e (<= %.0e)", worst, kAxisTol);

    const auto w = winding_number(spec);
    double max_nu = 0.0;
    bool all_valid = true;
    for (std::size_t i = 0; i < w.re_nu.size(); ++i) {
        all_valid = all_valid && w.valid[i];
        if (w.valid[i]) max_nu = std::max(max_nu, std::abs(w.re_nu[i]));
    }
    c.check(all_valid && max_nu <= kFlatWindingTol, "max_t |Re nu(t)| = %.2e (<= %.2f), all samples valid", max_nu,
            kFlatWindingTol);

    const auto set = critical_modes(spec);
    const auto sweep = aperiodic_sweep(spec);
    const double step = spec.grid.spacing();
    const bool covers = set.aperiodic_band && set.aperiodic_band->lo <= step && set.aperiodic_band->hi >= kPi - step;
    std::size_t empty_modes = 0;
    for (const auto& z : sweep.zero_times) empty_modes += z.empty();
    c.check(covers && sweep.ks.size() == spec.grid.size() && empty_modes == 0,
            "zero-crossing band [%.2e, %.7f] covers [0, pi]; %zu of %zu modes have echo zeros in (0, 6]",
            set.aperiodic_band ? set.aperiodic_band->lo : NAN, set.aperiodic_band ? set.aperiodic_band->hi : NAN,
            sweep.ks.size() - empty_modes, spec.grid.size());
    c.check(set.modes.empty(), "no bulk critical mode (%zu found)", set.modes.size());
    const auto cusps = detect_cusps(rate_function(spec));
    c.note("%zu non-smooth points flagged in Re r(t) over (0, 6]", cusps.size());
    return c;
}

Criterion criterion5() {
    Criterion c{5, "mixed quenches: imaginary-axis bands and bulk critical mode"};
    {
        const auto spec = quench(0.5, 1.0, 0.5, 0.0, 6.0, 2400);
        const auto set = critical_modes(spec);
        const double step = spec.grid.spacing();
        const double ep = std::acos(-0.25);
        const auto band = set.aperiodic_band;
        c.check(band && band->lo_open && std::abs(band->lo - ep) <= step && std::abs(band->hi - kPi) <= step && !band->hi_open,
                "(0.5, 1) -> (0.5, 0): band (%.7f, %.7f] vs (arccos(-0.25) = %.7f, pi] within grid step %.2e",
                band ? band->lo : NAN, band ? band->hi : NAN, ep, step);
        c.check(set.modes.empty(), "(0.5, 1) -> (0.5, 0): no bulk k_c (%zu found)", set.modes.size());
        const auto curve = fisher_zeros(spec, 0);
        std::size_t misplaced = 0;
        for (std::size_t j = 0; j < curve.ks.size(); ++j) {
            misplaced += (std::abs(curve.zs[j].real()) <= kAxisTol) != band->contains(curve.ks[j]);
        }
        c.check(misplaced == 0, "(0.5, 1) -> (0.5, 0): zeros on the axis exactly inside the band (%zu mismatches)", misplaced);
    }
    {
        const auto spec = quench(0.9, 0.4, 2.0, 0.4, 8.0, 3200);
        const auto set = critical_modes(spec);
        const double step = spec.grid.spacing();
        const double ep = closed_form_ep(spec.initial);
        const double k_ref = closed_form_kc(spec.initial, spec.final);
        const auto band = set.aperiodic_band;
        c.check(band && std::abs(band->lo - ep) <= step && band->lo_open,
                "(0.9, 0.4) -> (2, 0.4): band lower edge %.7f vs EP arccos(-1.65/1.8) = %.7f within grid step %.2e",
                band ? band->lo : NAN, ep, step);
        c.note("quoted band edge 2.7324 differs from the closed form by %.2e", std::abs(2.7324 - ep));
        c.check(set.modes.size() == 1 && std::abs(set.modes[0] - k_ref) <= kModeTol,
                "(0.9, 0.4) -> (2, 0.4): bulk k_c = %.7f vs arccos(-2.64/2.9) = %.7f (<= %.0e)",
                set.modes.empty() ? NAN : set.modes[0], k_ref, kModeTol);
        c.note("quoted k_c 2.7167 differs from the closed form by %.2e", std::abs(2.7167 - k_ref));

        const double d_f = std::sqrt(d_squared(spec.final, k_ref));
        const auto cusps = detect_cusps(rate_function(spec));
        const auto w = winding_number(spec);
        for (int l = 0; l <= 2; ++l) {
            const double t = kPi / (2.0 * d_f) + l * kPi / d_f;
            const double miss = nearest_cusp(cusps, t);
            c.check(miss <= kCuspTol, "cusp within %.2e of t_c%d = %.5f (<= %.1e)", miss, l, t, kCuspTol);
            const double jump = jump_at(w, spec.times.step(), t);
            c.check(std::abs(jump - 1.0) <= kJumpTol, "Re nu jump at t_c%d: %.4f (1 +- %.2f)", l, jump, kJumpTol);
        }
    }
    return c;
}

CMatrix spectral_expm(const BiorthEigensystem& sys, CScalar z) {
    CMatrix out(sys.size());
    for (std::size_t n = 0; n < sys.size(); ++n) out += std::exp(-z * sys.energies[n]) * outer(sys.rights[n], sys.lefts[n]);
    return out;
}

Criterion criterion6() {
    Criterion c{6, "property suites"};
    {
        std::mt19937_64 rng(2024);
        double worst2 = 0.0, worstn = 0.0;
        int failures = 0;
        for (int trial = 0; trial < 10000; ++trial) {
            try {
                const CMatrix h = testing::random_matrix(rng, 2);
                const auto rep = measure_invariants(eig_dense(h), h);
                worst2 = std::max({worst2, rep.biorthonormality, rep.completeness, rep.reconstruction / std::max(1.0, h.max_abs())});
            } catch (const Error&) {
                ++failures;
            }
        }
        for (int trial = 0; trial < 1000; ++trial) {
            try {
                const CMatrix h = testing::random_matrix(rng, 1 + static_cast<std::size_t>(trial % 6));
                const auto rep = measure_invariants(eig_dense(h), h);
                worstn = std::max({worstn, rep.biorthonormality, rep.completeness, rep.reconstruction / std::max(1.0, h.max_abs())});
            } catch (const Error&) {
                ++failures;
            }
        }
        c.check(failures == 0 && worst2 <= kEigenTol && worstn <= kEigenTol,
                "eigen invariants: worst %.2e (10^4 2x2), %.2e (10^3 n <= 6), %d failures (<= %.0e)", worst2, worstn, failures,
                kEigenTol);
    }
    {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        double worst = 0.0;
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
            const CMatrix h = testing::random_matrix(rng, n);
            CScalar z{u(rng), u(rng)};
            z *= 10.0 * std::abs(u(rng)) / std::abs(z);
            const auto v = testing::random_vector<Ket>(rng, n);
            const Ket exact = spectral_expm(eig_dense(h), z) * v;
            worst = std::max(worst, dist_vec(expm_apply(h, z, v), exact) / std::max(1.0, max_abs(exact.values())));
        }
        c.check(worst <= kExpmTol, "expm vs spectral evolution, |z| <= 10: worst %.2e (<= %.0e)", worst, kExpmTol);
    }
    {
        std::mt19937_64 rng(61);
        std::uniform_real_distribution<double> u(-100.0, 100.0);
        double worst = 0.0;
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
            CMatrix h = testing::random_matrix(rng, n);
            h = 0.5 * (h + h.adjoint()) + 0.02 * (h - h.adjoint());
            const auto sys = eig_dense(h);
            const auto s0 = make_state(testing::random_vector<Ket>(rng, n), testing::random_vector<Bra>(rng, n));
            const auto s = evolve(s0, sys, u(rng));
            worst = std::max({worst, dist(s.left() * s.right(), 1.0), dist(expand_in_basis(s, sys).total(), 1.0)});
        }
        c.check(worst <= kTraceTol, "trace preservation, |t| <= 100: worst %.2e (<= %.0e)", worst, kTraceTol);
    }
    {
        auto h_of_t = [](double t) { return ssh::build_hk({1.3, 0.3}, 0.4 + 0.5 * t); };
        auto phi_dot = [](double t) { return 0.8 * std::cos(1.7 * t) + 0.3; };
        const auto path = ParamPath::sample(h_of_t, 0.0, 4.0, 4000);
        const auto gauged =
            ParamPath::sample([&](double t) { return h_of_t(t) - phi_dot(t) * CMatrix::identity(2); }, 0.0, 4.0, 4000);
        const auto s0 = ssh::ground_state({0.5, 0.4}, 0.4);
        const auto a = phase_decomposition(s0, path);
        const auto b = phase_decomposition(s0, gauged);
        double worst = 0.0;
        for (std::size_t j = 0; j < a.size(); ++j) {
            worst = std::max({worst, std::abs(wrapped(a[j].phi_geo.real() - b[j].phi_geo.real())),
                              std::abs(a[j].phi_geo.imag() - b[j].phi_geo.imag())});
        }
        c.check(worst <= kGaugeTol, "geometric phase under H - phi'(t) I: worst %.2e (<= %.0e)", worst, kGaugeTol);
    }
    {
        const ssh::Params cases[][2] = {{{0.5, 0.4}, {2.0, 0.4}}, {{0.5, 2.0}, {0.5, 0.2}}, {{0.9, 0.4}, {2.0, 0.4}},
                                        {{0.5, 1.0}, {0.5, 0.0}}, {{1.5, 0.4}, {2.0, 0.4}}};
        double worst = 0.0;
        for (const auto& qc : cases) {
            for (double k = 0.05; k < kPi; k += 0.13) {
                const CScalar di = std::sqrt(CScalar{d_squared(qc[0], k), 0.0});
                const CScalar df = std::sqrt(CScalar{d_squared(qc[1], k), 0.0});
                const CScalar kap = (1.0 + (qc[0].q + qc[1].q) * std::cos(k) + qc[0].q * qc[1].q - qc[0].eta * qc[1].eta) / (di * df);
                const auto sys = eig_dense(ssh::build_hk(qc[1], k));
                const auto s0 = ssh::ground_state(qc[0], k);
                for (double t = 0.0; t <= 6.0; t += 0.37) {
                    const CScalar sn = std::sin(df * t), cs = std::cos(df * t);
                    const CScalar l = cs * cs + kap * kap * sn * sn;
                    worst = std::max(worst, dist(loschmidt_echo(s0, sys, t), l) / std::max(1.0, std::abs(l)));
                }
            }
        }
        c.check(worst <= kEchoTol, "closed-form L_k vs spectral L_k: worst %.2e (<= %.0e)", worst, kEchoTol);
    }
    {
        const double families[][4] = {{0.5, 0.4, 2.0, 0.4}, {1.5, 0.4, 2.0, 0.4}, {0.5, 2.0, 0.5, 0.2},
                                      {0.5, 1.0, 0.5, 0.0}, {0.9, 0.4, 2.0, 0.4}, {1.0, 0.0, 2.0, 0.0}};
        double worst = 0.0;
        for (const auto& f : families) {
            const auto spec = quench(f[0], f[1], f[2], f[3], 6.0, 2400);
            for (int l = 0; l <= 3; ++l) {
                const auto curve = fisher_zeros(spec, l);
                for (std::size_t j = 0; j < curve.zs.size(); ++j) {
                    const auto m = mode_overlap(spec.initial, spec.final, curve.ks[j]);
                    const double scale = std::max(1.0, std::abs(0.5 * std::exp(curve.zs[j] * m.d_f) * (1.0 + m.kappa)));
                    worst = std::max(worst, std::abs(mode_partition(m, curve.zs[j])) / scale);
                }
            }
        }
        c.check(worst <= kResidualTol, "Fisher-zero residuals, 6 quenches x l = 0..3: worst %.2e (<= %.0e)", worst, kResidualTol);
    }
    {
        std::mt19937_64 rng(41);
        double worst_imag = 0.0, worst_born = 0.0;
        for (int trial = 0; trial < 500; ++trial) {
            const std::size_t n = 2 + static_cast<std::size_t>(trial % 5);
            const CMatrix h = testing::random_hermitian(rng, n);
            const auto sys = eig_dense(h);
            for (const auto& e : sys.energies) worst_imag = std::max(worst_imag, std::abs(e.imag()));
            const auto a = Observable::from_matrix(h);
            Ket v = testing::random_vector<Ket>(rng, n);
            v = (1.0 / norm2(v.values())) * v;
            const auto m = measure(a, make_state(v, dagger(v)));
            for (std::size_t j = 0; j < n; ++j) {
                const double born = std::norm(dagger(a.rights[j]) * v);
                worst_born = std::max(worst_born, dist(m.outcomes[j].probability, born));
            }
        }
        auto loop = [](double q) {
            return ParamPath::sample([q](double k) { return ssh::build_hk({q, 0.0}, k); }, 0.0, 2.0 * kPi, 2000);
        };
        const double zak_top = wrapped(adiabatic_phases(0, loop(2.0)).geometric.real());
        const double zak_triv = wrapped(adiabatic_phases(0, loop(0.5)).geometric.real());
        c.check(worst_imag <= kEigenTol && worst_born <= kEigenTol,
                "Hermitian limit: max |Im E| %.2e, Born-rule deviation %.2e (<= %.0e)", worst_imag, worst_born, kEigenTol);
        c.check(std::abs(std::abs(zak_top) - kPi) <= kZakTol && std::abs(zak_triv) <= kZakTol,
                "Zak phase q = 2: %.4f (pi +- %.0e), q = 0.5: %.4f (0 +- %.0e)", zak_top, kZakTol, zak_triv, kZakTol);
    }
    return c;
}

Criterion criterion7() {
    Criterion c{7, "associated-state contrast on a complex-spectrum 2x2 mode"};
    // q = 0.5, eta = 1, k = 3: the SSH mode sits in the imaginary band
    const CMatrix h = ssh::build_hk({0.5, 1.0}, 3.0);
    const auto sys = eig_dense(h);
    const auto state = make_state(Ket{CScalar{0.8, 0.1}, 0.6}, Bra{0.7, CScalar{0.2, -0.5}});
    const double t = 1.0;
    Bra associated(2), associated_initial(2), refined(2);
    for (std::size_t n = 0; n < 2; ++n) {
        const CScalar cn = sys.lefts[n] * state.right();
        associated_initial = associated_initial + std::conj(cn) * sys.lefts[n];
        associated = associated + std::conj(cn * std::exp(-kI * sys.energies[n] * t)) * sys.lefts[n];
        refined = refined + (state.left() * sys.rights[n]) * std::exp(kI * sys.energies[n] * t) * sys.lefts[n];
    }
    const double violation = dist_vec(associated, expm_apply(h, -kI * t, associated_initial));
    const double refined_err = dist_vec(refined, expm_apply(h, -kI * t, state.left()));
    c.note("energies %.6f%+.6fi, %.6f%+.6fi", sys.energies[0].real(), sys.energies[0].imag(), sys.energies[1].real(),
           sys.energies[1].imag());
    c.check(violation >= kContrastMin, "associated state vs e^{iHt} evolution: discrepancy %.3e (>= %.0e)", violation,
            kContrastMin);
    c.check(refined_err <= kRefinedTol, "refined left-vector vs e^{iHt} evolution: %.2e (<= %.0e)", refined_err, kRefinedTol);
    return c;
}

}  // namespace

int main() {
    const std::vector<std::function<Criterion()>> criteria{criterion1, criterion2, criterion3, criterion4,
                                                           criterion5, criterion6, criterion7};
    std::vector<Criterion> results;
    for (const auto& run : criteria) {
        Criterion c{0, ""};
        try {
            c = run();
        } catch (const std::exception& e) {
            c = Criterion{static_cast<int>(results.size()) + 1, "aborted"};
            c.check(false, "unexpected error: %s", e.what());
        }
        std::printf("criterion %d: %s - %s\n", c.id, c.pass ? "PASS" : "FAIL", c.title.c_str());
        std::fflush(stdout);
        results.push_back(c);
    }
    const auto passed = std::count_if(results.begin(), results.end(), [](const Criterion& c) { return c.pass; });
    std::printf("%zd/%zu criteria passed\n", passed, results.size());
    return passed == static_cast<std::ptrdiff_t>(results.size()) ? 0 : 1;
}
