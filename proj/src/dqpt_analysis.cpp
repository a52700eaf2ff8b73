#include "nhdqpt/dqpt_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nhdqpt/dynamics.hpp"
#include "nhdqpt/errors.hpp"
#include "nhdqpt/numeric_kernel.hpp"

namespace nhdqpt {

using ssh::ModeClass;

std::vector<double> TimeGrid::samples() const {
    std::vector<double> out(steps + 1);
    for (std::size_t j = 0; j <= steps; ++j) out[j] = t_max * static_cast<double>(j) / static_cast<double>(steps);
    return out;
}

void QuenchSpec::validate() const {
    if (grid.ks.empty()) throw ValidationError("QuenchSpec: empty momentum grid");
    if (times.steps == 0) throw ValidationError("QuenchSpec: empty time grid");
    if (!(times.t_max > 0.0) || !std::isfinite(times.t_max)) throw ValidationError("QuenchSpec: t_max must be positive");
    for (double v : {initial.q, initial.eta, final.q, final.eta}) {
        if (!std::isfinite(v)) throw ValidationError("QuenchSpec: non-finite parameter");
    }
}

bool MomentumInterval::contains(double k) const {
    const bool above = lo_open ? k > lo : k >= lo;
    const bool below = hi_open ? k < hi : k <= hi;
    return above && below;
}

CScalar kappa(const ssh::BlochVector& i, const ssh::BlochVector& f) {
    if (!(std::abs(i.d) > ssh::kExceptionalTolerance) || !(std::abs(f.d) > ssh::kExceptionalTolerance)) {
        throw ExceptionalPoint("kappa: |d| vanishes on one side of the quench");
    }
    return (i.dx * f.dx + i.dy * f.dy + i.dz * f.dz) / (i.d * f.d);
}

ModeOverlap mode_overlap(const ssh::Params& initial, const ssh::Params& final, double k) {
    const auto vi = ssh::bloch_vector(initial, k);
    const auto vf = ssh::bloch_vector(final, k);
    return {k, kappa(vi, vf), vf.d};
}

CScalar mode_partition(const ModeOverlap& m, CScalar z) {
    return 0.5 * std::exp(-z * m.d_f) * (1.0 - m.kappa) + 0.5 * std::exp(z * m.d_f) * (1.0 + m.kappa);
}

CScalar mode_echo(const ModeOverlap& m, double t) {
    const CScalar c = std::cos(m.d_f * t);
    const CScalar s = std::sin(m.d_f * t);
    return c * c + m.kappa * m.kappa * s * s;
}

namespace {

std::vector<double> quadrature_weights(const ssh::MomentumGrid& grid) {
    std::vector<double> w(grid.size(), grid.spacing());
    if (grid.kind == ssh::MomentumGrid::Kind::Inclusive && w.size() > 1) {
        w.front() *= 0.5;
        w.back() *= 0.5;
    }
    return w;
}

CScalar pairwise_sum(const CScalar* x, std::size_t n) {
    if (n <= 8) {
        CScalar s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += x[j];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

// -(1/pi) sum_k w_k ln(values_k), with Im ln continued along k.
CScalar log_integral(const std::vector<CScalar>& values, const std::vector<double>& weights, double floor,
                     const char* what) {
    std::vector<CScalar> terms(values.size());
    double previous_im = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
        if (!(std::abs(values[j]) > floor) || !is_finite(values[j])) throw LogSingular(what);
        CScalar lg = std::log(values[j]);
        double im = lg.imag();
        if (j > 0) im = previous_im + wrap_angle(im - previous_im);
        previous_im = im;
        terms[j] = weights[j] * CScalar{lg.real(), im};
    }
    return -pairwise_sum(terms.data(), terms.size()) / kPi;
}

std::vector<ModeOverlap> grid_overlaps(const QuenchSpec& spec) {
    std::vector<ModeOverlap> out;
    out.reserve(spec.grid.size());
    for (double k : spec.grid.ks) out.push_back(mode_overlap(spec.initial, spec.final, k));
    return out;
}

double principal_arg(CScalar x) {
    const double theta = std::arg(x);
    return theta <= -kPi ? kPi : theta;
}

bool real_within(CScalar x, double tol) { return std::abs(x.imag()) <= tol * std::max(1.0, std::abs(x.real())); }

}  // namespace

CScalar free_energy_density(const QuenchSpec& spec, CScalar z) {
    spec.validate();
    const auto modes = grid_overlaps(spec);
    std::vector<CScalar> values(modes.size());
    for (std::size_t j = 0; j < modes.size(); ++j) values[j] = mode_partition(modes[j], z);
    return log_integral(values, quadrature_weights(spec.grid), 1e-10, "free_energy_density: grid mode on a Fisher zero");
}

CScalar fisher_zero(const ModeOverlap& m, int l) {
    if (!(std::abs(1.0 + m.kappa) > 1e-12)) throw DegenerateRatio("fisher_zero: kappa = -1");
    if (!(std::abs(m.d_f) > ssh::kExceptionalTolerance)) throw ExceptionalPoint("fisher_zero: d_f vanishes");
    const CScalar ratio = (1.0 - m.kappa) / (1.0 + m.kappa);
    const CScalar bracket{std::log(std::abs(ratio)), principal_arg(ratio) + (2.0 * l + 1.0) * kPi};
    return bracket / (2.0 * m.d_f);
}

FisherZeroCurve fisher_zeros(const QuenchSpec& spec, int l) {
    spec.validate();
    FisherZeroCurve curve;
    curve.branch = l;
    for (double k : spec.grid.ks) {
        const ModeOverlap m = mode_overlap(spec.initial, spec.final, k);
        const CScalar z = fisher_zero(m, l);
        const double scale = std::max(1.0, std::abs(0.5 * std::exp(z * m.d_f) * (1.0 + m.kappa)));
        if (!(std::abs(mode_partition(m, z)) <= kFisherResidual * scale)) {
            throw Error("fisher_zeros: residual check failed");
        }
        curve.ks.push_back(k);
        curve.zs.push_back(z);
    }
    return curve;
}

std::vector<double> critical_times(const ModeOverlap& m, int l_max) {
    if (!real_within(m.d_f, 1e-10) || !(m.d_f.real() > ssh::kExceptionalTolerance)) {
        throw NotCritical("critical_times: d_f is not real");
    }
    if (!(std::abs(1.0 + m.kappa) > 1e-12)) throw NotCritical("critical_times: kappa = -1");
    const CScalar ratio = (1.0 - m.kappa) / (1.0 + m.kappa);
    if (!(std::abs(std::abs(ratio) - 1.0) <= 1e-8)) throw NotCritical("critical_times: |(1-kappa)/(1+kappa)| != 1");
    const double d = m.d_f.real();
    const double t_theta = principal_arg(ratio) / (2.0 * d);
    const double t_c = kPi / d;
    std::vector<double> out;
    for (int l = 0; l <= l_max; ++l) out.push_back(t_theta + t_c * (l + 0.5));
    return out;
}

std::vector<double> echo_zero_times(const ModeOverlap& m, double t_max) {
    if (!real_within(m.d_f, 1e-10) || !(m.d_f.real() > ssh::kExceptionalTolerance)) return {};
    if (!(std::abs(1.0 + m.kappa) > 1e-12)) return {};
    const CScalar ratio = (1.0 - m.kappa) / (1.0 + m.kappa);
    if (!(std::abs(std::abs(ratio) - 1.0) <= 1e-8)) return {};
    const double d = m.d_f.real();
    const double theta = principal_arg(ratio);
    std::vector<double> out;
    // zeros of G(t) and of G(-t)
    for (double sign : {1.0, -1.0}) {
        for (int n = 0;; ++n) {
            const double t = (sign * theta + (2.0 * n + 1.0) * kPi) / (2.0 * d);
            if (t > t_max) break;
            if (t > 0.0) out.push_back(t);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

bool in_aperiodic_band(const QuenchSpec& spec, double k) {
    return ssh::classify_mode(spec.initial, k) == ModeClass::ImaginaryEnergy &&
           ssh::classify_mode(spec.final, k) == ModeClass::RealEnergy;
}

// Boundary of a predicate between a (pred false) and b (pred true).
template <typename Pred>
double bisect_edge(Pred pred, double a, double b) {
    for (int it = 0; it < 200 && std::abs(b - a) > 1e-13; ++it) {
        const double mid = 0.5 * (a + b);
        (pred(mid) ? b : a) = mid;
    }
    return 0.5 * (a + b);
}

std::optional<MomentumInterval> find_aperiodic_band(const QuenchSpec& spec) {
    const auto& ks = spec.grid.ks;
    std::optional<std::size_t> first, last;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        if (in_aperiodic_band(spec, ks[j])) {
            if (!first) first = j;
            last = j;
        }
    }
    if (!first) return std::nullopt;
    auto pred = [&](double k) { return in_aperiodic_band(spec, k); };
    MomentumInterval band{};
    if (pred(0.0)) {
        band.lo = 0.0;
        band.lo_open = false;
    } else {
        const double outside = *first == 0 ? 0.0 : ks[*first - 1];
        band.lo = bisect_edge(pred, outside, ks[*first]);
        band.lo_open = true;
    }
    if (pred(kPi)) {
        band.hi = kPi;
        band.hi_open = false;
    } else {
        const double outside = *last + 1 == ks.size() ? kPi : ks[*last + 1];
        band.hi = bisect_edge(pred, outside, ks[*last]);
        band.hi_open = true;
    }
    return band;
}

void append_times(CriticalSet& set, const ModeOverlap& m, double t_max) {
    const auto first = critical_times(m, 0);
    if (first.front() > t_max) return;
    const double period = kPi / m.d_f.real();
    const int l_max = static_cast<int>(std::floor((t_max - first.front()) / period));
    const auto ts = critical_times(m, std::min(l_max, 100000));
    for (std::size_t l = 0; l < ts.size(); ++l) {
        if (ts[l] <= t_max) set.times.push_back({m.k, static_cast<int>(l), ts[l]});
    }
}

// Critical mode reached in closed form. When the initial side sits on an EP,
// kappa is taken as its limit 0 (the numerator vanishes faster than d^i).
std::optional<ModeOverlap> closed_form_mode(const QuenchSpec& spec, double k) {
    const auto vf = ssh::bloch_vector(spec.final, k);
    if (!(std::abs(vf.d) > ssh::kExceptionalTolerance)) return std::nullopt;
    const auto vi = ssh::bloch_vector(spec.initial, k);
    if (!(std::abs(vi.d) > ssh::kExceptionalTolerance)) return ModeOverlap{k, 0.0, vf.d};
    return ModeOverlap{k, kappa(vi, vf), vf.d};
}

}  // namespace

CriticalSet critical_modes(const QuenchSpec& spec) {
    spec.validate();
    CriticalSet set;
    const double t_max = spec.times.t_max;

    if (ssh::all_modes_real(spec.initial) && ssh::all_modes_real(spec.final)) {
        const double a = 1.0 + spec.initial.q * spec.final.q - spec.initial.eta * spec.final.eta;
        const double b = spec.initial.q + spec.final.q;
        std::optional<double> k_c;
        if (std::abs(b) > 0.0) {
            if (std::abs(std::abs(a) - std::abs(b)) <= ssh::kExceptionalTolerance) {
                k_c = -a / b > 0.0 ? 0.0 : kPi;
            } else if (std::abs(a) < std::abs(b)) {
                k_c = std::acos(-a / b);
            }
        }
        if (k_c) {
            if (auto m = closed_form_mode(spec, *k_c)) {
                set.modes.push_back(*k_c);
                append_times(set, *m, t_max);
            }
        }
        return set;
    }

    const auto& ks = spec.grid.ks;
    auto regular = [&](double k) {
        return ssh::classify_mode(spec.initial, k) == ModeClass::RealEnergy &&
               ssh::classify_mode(spec.final, k) == ModeClass::RealEnergy;
    };
    auto re_kappa = [&](double k) { return mode_overlap(spec.initial, spec.final, k).kappa.real(); };
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        if (!regular(ks[j]) || !regular(ks[j + 1])) continue;
        double a = ks[j];
        double b = ks[j + 1];
        double fa = re_kappa(a);
        const double fb = re_kappa(b);
        if (fa == 0.0) {
            b = a;
        } else if (fa * fb > 0.0) {
            continue;
        } else if (fb == 0.0) {
            if (j + 2 < ks.size()) continue;  // picked up as the next interval's left end
            a = b;
        }
        while (b - a > 1e-12) {
            const double mid = 0.5 * (a + b);
            const double fm = re_kappa(mid);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = mid;
                fa = fm;
            } else {
                b = mid;
            }
        }
        const double k_c = 0.5 * (a + b);
        const ModeOverlap m = mode_overlap(spec.initial, spec.final, k_c);
        if (!real_within(m.d_f, 1e-10)) continue;
        set.modes.push_back(k_c);
        append_times(set, m, t_max);
    }
    set.aperiodic_band = find_aperiodic_band(spec);
    return set;
}

AperiodicSweep aperiodic_sweep(const QuenchSpec& spec) {
    spec.validate();
    AperiodicSweep sweep;
    const auto band = find_aperiodic_band(spec);
    if (!band) return sweep;
    for (double k : spec.grid.ks) {
        if (!band->contains(k) || !in_aperiodic_band(spec, k)) continue;
        const ModeOverlap m = mode_overlap(spec.initial, spec.final, k);
        sweep.ks.push_back(k);
        sweep.zero_times.push_back(echo_zero_times(m, spec.times.t_max));
    }
    for (std::size_t n = 0;; ++n) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& ts : sweep.zero_times) {
            if (ts.size() <= n) continue;
            lo = std::min(lo, ts[n]);
            hi = std::max(hi, ts[n]);
        }
        if (!(lo <= hi)) break;
        sweep.intervals.emplace_back(lo, hi);
    }
    return sweep;
}

RateSeries rate_function(const QuenchSpec& spec) {
    spec.validate();
    const auto modes = grid_overlaps(spec);
    const auto weights = quadrature_weights(spec.grid);
    RateSeries out;
    out.times = spec.times.samples();
    out.re_r.reserve(out.times.size());
    out.im_r.reserve(out.times.size());
    std::vector<CScalar> echoes(modes.size());
    for (double t : out.times) {
        for (std::size_t j = 0; j < modes.size(); ++j) echoes[j] = mode_echo(modes[j], t);
        const CScalar r = log_integral(echoes, weights, 0.0, "rate_function: exact zero of the echo on the grid");
        out.re_r.push_back(r.real());
        out.im_r.push_back(r.imag());
    }
    return out;
}

std::vector<double> detect_cusps(const RateSeries& series) {
    const auto& r = series.re_r;
    if (r.size() < 3 || series.times.size() != r.size()) return {};
    std::vector<double> second(r.size(), 0.0);
    std::vector<double> magnitudes;
    for (std::size_t j = 1; j + 1 < r.size(); ++j) {
        second[j] = std::abs(r[j + 1] - 2.0 * r[j] + r[j - 1]);
        magnitudes.push_back(second[j]);
    }
    auto mid = magnitudes.begin() + static_cast<std::ptrdiff_t>(magnitudes.size() / 2);
    std::nth_element(magnitudes.begin(), mid, magnitudes.end());
    const double threshold = 10.0 * *mid;

    std::vector<double> cusps;
    std::size_t j = 1;
    while (j + 1 < r.size()) {
        if (!(second[j] > threshold)) {
            ++j;
            continue;
        }
        std::size_t best = j;
        std::size_t end = j;
        // merge hits separated by at most one grid step
        while (end + 1 < r.size() - 1 && (second[end + 1] > threshold || (end + 2 < r.size() - 1 && second[end + 2] > threshold))) {
            end += second[end + 1] > threshold ? 1 : 2;
            if (second[end] > second[best]) best = end;
        }
        cusps.push_back(series.times[best]);
        j = end + 1;
    }
    return cusps;
}

namespace {

inline constexpr int kRefineFactor = 16;
inline constexpr int kMaxRefineDepth = 2;

struct ModePhase {
    double re_geo = 0.0;
    double im_geo = 0.0;
    CScalar forward;
    CScalar backward;
    ModeClass initial_class = ModeClass::RealEnergy;
    bool valid = false;
};

class WindingEvaluator {
public:
    WindingEvaluator(const QuenchSpec& spec, double t) : spec_(spec), t_(t) {}

    ModePhase at(double k) const {
        ModePhase p;
        p.initial_class = ssh::classify_mode(spec_.initial, k);
        ModeOverlap m;
        try {
            m = mode_overlap(spec_.initial, spec_.final, k);
        } catch (const ExceptionalPoint&) {
            return p;
        }
        p.forward = mode_partition(m, CScalar{0.0, t_});
        p.backward = mode_partition(m, CScalar{0.0, -t_});
        const PhaseRecord rec = make_phase_record(t_, p.forward, p.backward, m.kappa * m.d_f * t_);
        if (!rec.valid) return p;
        p.re_geo = rec.phi_geo.real();
        p.im_geo = rec.phi_geo.imag();
        p.valid = true;
        return p;
    }

    // Wrapped increment of Re Phi_g from a to b.
    double increment(double ka, const ModePhase& a, double kb, const ModePhase& b, int depth) {
        // No continuity across an exceptional point of the initial mode.
        if (!a.valid || !b.valid || a.initial_class != b.initial_class) {
            ++singular_;
            return 0.0;
        }
        const double delta = wrap_angle(b.re_geo - a.re_geo);
        if (std::abs(delta) <= kPi / 4.0) return delta;
        if (depth >= kMaxRefineDepth) {
            if (crosses_zero(a, b)) {
                ++singular_;
                return 0.0;
            }
            if (std::abs(delta) > kPi / 2.0) throw Unwrappable("winding: phase step above pi/2 after refinement");
            return delta;
        }
        double sum = 0.0;
        double k_prev = ka;
        ModePhase prev = a;
        for (int s = 1; s <= kRefineFactor; ++s) {
            const double k = s == kRefineFactor ? kb : ka + (kb - ka) * s / kRefineFactor;
            const ModePhase cur = s == kRefineFactor ? b : at(k);
            sum += increment(k_prev, prev, k, cur, depth + 1);
            k_prev = k;
            prev = cur;
        }
        return sum;
    }

    std::size_t singular() const { return singular_; }

private:
    // The echo passes through zero between a and b: a real amplitude changes sign.
    static bool crosses_zero(const ModePhase& a, const ModePhase& b) {
        auto flips = [](CScalar x, CScalar y) {
            auto nearly_real = [](CScalar v) { return std::abs(v.imag()) <= 1e-6 * std::abs(v.real()) + 1e-12; };
            return nearly_real(x) && nearly_real(y) && x.real() * y.real() < 0.0;
        };
        return flips(a.forward, b.forward) || flips(a.backward, b.backward);
    }

    const QuenchSpec& spec_;
    double t_;
    std::size_t singular_ = 0;
};

}  // namespace

WindingSample winding_at(const QuenchSpec& spec, double t) {
    WindingEvaluator eval(spec, t);
    const auto& ks = spec.grid.ks;
    std::vector<ModePhase> phases(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) {
        phases[j] = eval.at(ks[j]);
        if (!phases[j].valid) throw EchoZero("winding: grid mode on an echo zero");
    }
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < ks.size(); ++j) {
        total += eval.increment(ks[j], phases[j], ks[j + 1], phases[j + 1], 0);
    }
    WindingSample out{};
    out.re_nu = total / (2.0 * kPi);
    out.im_nu = ks.empty() ? 0.0 : (phases.back().im_geo - phases.front().im_geo) / (2.0 * kPi);
    out.singular_steps = eval.singular();
    return out;
}

WindingSeries winding_number(const QuenchSpec& spec) {
    spec.validate();
    WindingSeries out;
    out.times = spec.times.samples();
    for (double t : out.times) {
        try {
            const WindingSample s = winding_at(spec, t);
            out.re_nu.push_back(s.re_nu);
            out.im_nu.push_back(s.im_nu);
            out.valid.push_back(true);
        } catch (const EchoZero&) {
            out.re_nu.push_back(std::numeric_limits<double>::quiet_NaN());
            out.im_nu.push_back(std::numeric_limits<double>::quiet_NaN());
            out.valid.push_back(false);
        } catch (const Unwrappable&) {
            out.re_nu.push_back(std::numeric_limits<double>::quiet_NaN());
            out.im_nu.push_back(std::numeric_limits<double>::quiet_NaN());
            out.valid.push_back(false);
        }
    }
    return out;
}

}  // namespace nhdqpt
