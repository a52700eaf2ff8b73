#include "nhdqpt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

ParamPath ParamPath::constant(const CMatrix& h, double t_end, std::size_t steps) {
    return sample([&](double) { return h; }, 0.0, t_end, steps);
}

double ParamPath::step() const {
    return times.size() < 2 ? 0.0 : (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

bool ParamPath::is_constant() const {
    return std::all_of(hamiltonians.begin(), hamiltonians.end(),
                       [&](const CMatrix& h) { return h == hamiltonians.front(); });
}

void ParamPath::validate() const {
    if (times.empty() || times.size() != hamiltonians.size()) {
        throw std::invalid_argument("ParamPath: times and Hamiltonians must be non-empty and equal in length");
    }
    for (std::size_t j = 1; j < times.size(); ++j) {
        if (!(times[j] > times[j - 1])) throw std::invalid_argument("ParamPath: times must increase strictly");
    }
    for (const auto& h : hamiltonians) {
        if (h.size() != hamiltonians.front().size()) throw DimensionMismatch("ParamPath: mixed dimensions");
        if (!h.all_finite()) throw std::invalid_argument("ParamPath: non-finite Hamiltonian");
    }
}

double wrap_angle(double x) {
    double r = std::remainder(x, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

void unwrap_in_place(std::vector<double>& phases) {
    for (std::size_t j = 1; j < phases.size(); ++j) {
        phases[j] = phases[j - 1] + wrap_angle(phases[j] - phases[j - 1]);
    }
}

namespace {

void require_dims(const BiorthState& state, const BiorthEigensystem& system) {
    if (state.dim() != system.size()) throw DimensionMismatch("dynamics: state and eigensystem dimensions differ");
}

}  // namespace

BiorthState evolve(const BiorthState& state, const BiorthEigensystem& system, double t) {
    require_dims(state, system);
    const std::size_t n = system.size();
    Ket right(n);
    Bra left(n);
    for (std::size_t m = 0; m < n; ++m) {
        const CScalar forward = std::exp(-kI * system.energies[m] * t);
        const CScalar backward = std::exp(kI * system.energies[m] * t);
        const CScalar c = (system.lefts[m] * state.right()) * forward;
        const CScalar ct = (state.left() * system.rights[m]) * backward;
        right = right + c * system.rights[m];
        left = left + ct * system.lefts[m];
    }
    return adopt_normalized(std::move(right), std::move(left));
}

CScalar loschmidt_amplitude(const BiorthState& state0, const BiorthEigensystem& system, double t) {
    require_dims(state0, system);
    CScalar g = 0.0;
    for (std::size_t m = 0; m < system.size(); ++m) {
        const CScalar population = (system.lefts[m] * state0.right()) * (state0.left() * system.rights[m]);
        g += population * std::exp(-kI * system.energies[m] * t);
    }
    return g;
}

CScalar loschmidt_echo(const BiorthState& state0, const BiorthEigensystem& system, double t) {
    const BiorthState evolved = evolve(state0, system, t);
    return (state0.left() * evolved.right()) * (evolved.left() * state0.right());
}

PhaseRecord make_phase_record(double t, CScalar amplitude, CScalar reverse_amplitude, CScalar phi_dyn) {
    PhaseRecord rec;
    rec.t = t;
    rec.amplitude = amplitude;
    rec.reverse_amplitude = reverse_amplitude;
    rec.echo = amplitude * reverse_amplitude;
    rec.phi_dyn = phi_dyn;
    if (!(std::abs(rec.echo) >= kEchoZero) || !is_finite(rec.echo)) {
        rec.valid = false;
        rec.phi_tot = 0.0;
        rec.phi_geo = 0.0;
        return rec;
    }
    rec.phi_tot = -kI * std::log(amplitude / principal_sqrt(rec.echo));
    rec.phi_geo = rec.phi_tot - rec.phi_dyn;
    return rec;
}

std::vector<PhaseRecord> phase_decomposition(const BiorthState& state0, const ParamPath& path) {
    path.validate();
    if (path.hamiltonians.front().size() != state0.dim()) {
        throw DimensionMismatch("phase_decomposition: state and path dimensions differ");
    }
    const double t0 = path.times.front();
    std::vector<PhaseRecord> records;
    records.reserve(path.size());

    if (path.is_constant()) {
        const CMatrix& h = path.hamiltonians.front();
        const CScalar energy = expectation(h, state0);
        for (const double time : path.times) {
            const double t = time - t0;
            const Ket right = expm_apply(h, kI * t, state0.right());
            const Bra left = expm_apply(h, -kI * t, state0.left());
            records.push_back(make_phase_record(time, state0.left() * right, left * state0.right(), -t * energy));
        }
    } else {
        Ket right = state0.right();
        Bra left = state0.left();
        CScalar integral = 0.0;
        CScalar previous = left * (path.hamiltonians.front() * right);
        records.push_back(make_phase_record(t0, 1.0, 1.0, 0.0));
        for (std::size_t j = 1; j < path.size(); ++j) {
            const double dt = path.times[j] - path.times[j - 1];
            const CMatrix mid = 0.5 * (path.hamiltonians[j - 1] + path.hamiltonians[j]);
            right = expm_apply(mid, kI * dt, right);
            left = expm_apply(mid, -kI * dt, left);
            const CScalar current = left * (path.hamiltonians[j] * right);
            integral += 0.5 * dt * (previous + current);
            previous = current;
            records.push_back(
                make_phase_record(path.times[j], state0.left() * right, left * state0.right(), -integral));
        }
    }

    // Continue Re(phi_tot) across the principal-branch cut, skipping flagged samples.
    double last = 0.0;
    bool have_last = false;
    for (auto& rec : records) {
        if (!rec.valid) continue;
        double re = rec.phi_tot.real();
        if (have_last) re = last + wrap_angle(re - last);
        rec.phi_tot = {re, rec.phi_tot.imag()};
        rec.phi_geo = rec.phi_tot - rec.phi_dyn;
        last = re;
        have_last = true;
    }
    return records;
}

AdiabaticPhases adiabatic_phases(std::size_t band, const ParamPath& path, double tol) {
    path.validate();
    const std::size_t samples = path.size();
    if (samples < 3) throw std::invalid_argument("adiabatic_phases: need at least three samples");
    const std::size_t n = path.hamiltonians.front().size();
    if (band >= n) throw std::out_of_range("adiabatic_phases: band index out of range");

    std::vector<BiorthEigensystem> systems;
    systems.reserve(samples);
    for (const auto& h : path.hamiltonians) systems.push_back(eig_dense(h, tol));

    std::vector<CScalar> energies(samples);
    std::vector<Ket> rights(samples);
    std::vector<Bra> lefts(samples);
    std::vector<std::size_t> index(samples);
    index[0] = band;
    energies[0] = systems[0].energies[band];
    rights[0] = systems[0].rights[band];
    lefts[0] = systems[0].lefts[band];
    for (std::size_t j = 1; j < samples; ++j) {
        const auto& sys = systems[j];
        std::size_t best = 0;
        double best_overlap = -1.0;
        for (std::size_t m = 0; m < sys.size(); ++m) {
            const double overlap = std::abs(lefts[j - 1] * sys.rights[m]) * std::abs(sys.lefts[m] * rights[j - 1]);
            if (overlap > best_overlap) {
                best_overlap = overlap;
                best = m;
            }
        }
        index[j] = best;
        const CScalar overlap = lefts[j - 1] * sys.rights[best];
        if (std::abs(overlap) <= tol) throw NearDefective("adiabatic_phases: band lost between samples");
        const CScalar gauge = 1.0 / overlap;
        energies[j] = sys.energies[best];
        rights[j] = gauge * sys.rights[best];
        lefts[j] = (1.0 / gauge) * sys.lefts[best];
    }

    const double dt = path.step();
    AdiabaticPhases out{};
    std::vector<CScalar> connection(samples);
    for (std::size_t j = 0; j < samples; ++j) {
        const std::size_t lo = j == 0 ? 0 : j - 1;
        const std::size_t hi = j + 1 == samples ? j : j + 1;
        const double span = path.times[hi] - path.times[lo];
        const Ket derivative = (1.0 / span) * (rights[hi] - rights[lo]);
        connection[j] = lefts[j] * derivative;

        const CMatrix h_dot = (1.0 / span) * (path.hamiltonians[hi] - path.hamiltonians[lo]);
        const auto& sys = systems[j];
        for (std::size_t m = 0; m < sys.size(); ++m) {
            if (m == index[j]) continue;
            const CScalar gap = sys.energies[m] - sys.energies[index[j]];
            const CScalar coupling = sys.lefts[m] * (h_dot * sys.rights[index[j]]);
            out.adiabaticity = std::max(out.adiabaticity, std::abs(coupling / gap));
        }
    }
    for (std::size_t j = 1; j < samples; ++j) {
        const double h = path.times[j] - path.times[j - 1];
        out.dynamical += 0.5 * h * (energies[j - 1] + energies[j]);
        out.geometric += 0.5 * h * (connection[j - 1] + connection[j]);
    }
    out.geometric *= kI;
    (void)dt;

    const CMatrix& first = path.hamiltonians.front();
    const CMatrix& last = path.hamiltonians.back();
    out.closed_loop = (last - first).max_abs() <= 1e-12 * std::max(1.0, first.max_abs());
    if (out.closed_loop) {
        out.geometric += -kI * std::log(lefts.front() * rights.back());
    }
    return out;
}

}  // namespace nhdqpt
