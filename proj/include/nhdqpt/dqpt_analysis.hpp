#pragma once

#include <optional>
#include <vector>

#include "nhdqpt/linalg.hpp"
#include "nhdqpt/ssh_model.hpp"

namespace nhdqpt {

// t_j = j * t_max / steps for j = 0..steps.
struct TimeGrid {
    double t_max = 10.0;
    std::size_t steps = 2000;

    std::vector<double> samples() const;
    double step() const { return t_max / static_cast<double>(steps); }
};

// Sudden quench from `initial` to `final` at t = 0.
struct QuenchSpec {
    ssh::Params initial;
    ssh::Params final;
    ssh::MomentumGrid grid = ssh::MomentumGrid::midpoint(2000);
    TimeGrid times;

    void validate() const;
};

struct ModeOverlap {
    double k = 0.0;
    CScalar kappa;
    CScalar d_f;
};

// Normalized complex dot product of the two Bloch vectors.
// Throws ExceptionalPoint when either |d| <= 1e-12.
CScalar kappa(const ssh::BlochVector& initial, const ssh::BlochVector& final);
ModeOverlap mode_overlap(const ssh::Params& initial, const ssh::Params& final, double k);

// 1/2 e^{-z d_f} (1 - kappa) + 1/2 e^{z d_f} (1 + kappa); equals G_k(t) at z = it.
CScalar mode_partition(const ModeOverlap& m, CScalar z);

// L_k(t) = cos^2(d_f t) + kappa^2 sin^2(d_f t)
CScalar mode_echo(const ModeOverlap& m, double t);

// -(1/pi) * integral over [0, pi] of ln Z_k(z); throws LogSingular when
// |Z_k| < 1e-10 at a grid point.
CScalar free_energy_density(const QuenchSpec& spec, CScalar z);

struct FisherZeroCurve {
    int branch = 0;
    std::vector<double> ks;
    std::vector<CScalar> zs;
};

inline constexpr double kFisherResidual = 1e-8;

// Zero of branch l for one mode. Throws DegenerateRatio when |1 + kappa| <= 1e-12
// and ExceptionalPoint when d_f vanishes.
CScalar fisher_zero(const ModeOverlap& m, int l);
// Every sample is checked against |mode_partition| <= 1e-8 (relative to the
// size of the two terms); a failure throws Error.
FisherZeroCurve fisher_zeros(const QuenchSpec& spec, int l);

struct CriticalTime {
    double k;
    int l;
    double t;
};

struct MomentumInterval {
    double lo;
    double hi;
    bool lo_open;
    bool hi_open;

    bool contains(double k) const;
};

struct CriticalSet {
    std::vector<double> modes;
    std::vector<CriticalTime> times;  // all t_{c,l} <= spec.times.t_max
    std::optional<MomentumInterval> aperiodic_band;
};

CriticalSet critical_modes(const QuenchSpec& spec);

// t_{c,l} = Theta/(2 d_f) + (pi/d_f)(l + 1/2) for l = 0..l_max.
// Throws NotCritical unless d_f is real and |(1-kappa)/(1+kappa)| = 1 within 1e-8.
std::vector<double> critical_times(const ModeOverlap& m, int l_max);

// Zero crossings of L_k(t) = G_k(t) G_k(-t) in (0, t_max] for a mode whose
// Fisher zeros sit on the imaginary axis, sorted ascending.
std::vector<double> echo_zero_times(const ModeOverlap& m, double t_max);

struct AperiodicSweep {
    std::vector<double> ks;
    std::vector<std::vector<double>> zero_times;  // per mode
    // [min, max] over the band of the n-th crossing time
    std::vector<std::pair<double, double>> intervals;
};

// Empty when the quench has no aperiodic band.
AperiodicSweep aperiodic_sweep(const QuenchSpec& spec);

struct RateSeries {
    std::vector<double> times;
    std::vector<double> re_r;
    std::vector<double> im_r;
};

RateSeries rate_function(const QuenchSpec& spec);

// Times where the centred second difference of Re r exceeds ten times its
// median absolute value; neighbouring hits are merged and reported at the
// largest spike.
std::vector<double> detect_cusps(const RateSeries& series);

struct WindingSeries {
    std::vector<double> times;
    std::vector<double> re_nu;
    std::vector<double> im_nu;
    std::vector<bool> valid;
};

struct WindingSample {
    double re_nu;
    double im_nu;
    std::size_t singular_steps;  // k-steps skipped because the echo changes sign across them
};

// Re Phi_g(k, t) continued along the grid with x16 refinement of large steps.
// Throws Unwrappable when a step stays above pi/2 after refinement and EchoZero
// when a grid mode sits on an echo zero.
WindingSample winding_at(const QuenchSpec& spec, double t);
WindingSeries winding_number(const QuenchSpec& spec);

}  // namespace nhdqpt
