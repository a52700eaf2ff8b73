#pragma once

#include <vector>

#include "nhdqpt/biorth_state.hpp"
#include "nhdqpt/numeric_kernel.hpp"

namespace nhdqpt {

// One time sample of the phase bookkeeping. Times are in units of 1/J1.
struct PhaseRecord {
    double t = 0.0;
    CScalar phi_tot;
    CScalar phi_dyn;
    CScalar phi_geo;            // phi_tot - phi_dyn
    CScalar echo;               // L(t)
    CScalar amplitude;          // G(t) = <psi~(0)|psi(t)>
    CScalar reverse_amplitude;  // <psi~(t)|psi(0)>
    bool valid = true;          // false where |L| < kEchoZero; phases are then zero
};

inline constexpr double kEchoZero = 1e-14;

// Samples (t_j, H(t_j)) of a time-dependent Hamiltonian on a uniform grid.
struct ParamPath {
    std::vector<double> times;
    std::vector<CMatrix> hamiltonians;

    static ParamPath constant(const CMatrix& h, double t_end, std::size_t steps);

    template <typename F>
    static ParamPath sample(F&& h_of_t, double t_begin, double t_end, std::size_t steps) {
        ParamPath path;
        for (std::size_t j = 0; j <= steps; ++j) {
            const double t = t_begin + (t_end - t_begin) * static_cast<double>(j) / static_cast<double>(steps);
            path.times.push_back(t);
            path.hamiltonians.push_back(h_of_t(t));
        }
        return path;
    }

    std::size_t size() const { return times.size(); }
    double step() const;
    bool is_constant() const;
    // Throws DimensionMismatch / std::invalid_argument on a malformed path.
    void validate() const;
};

// Right vector under e^{-iHt}, left covector under e^{+iHt}.
BiorthState evolve(const BiorthState& state, const BiorthEigensystem& system, double t);

// G(t) = <psi~(0)|e^{-iHt}|psi(0)> = sum_n c_n c~_n e^{-i E_n t}
CScalar loschmidt_amplitude(const BiorthState& state0, const BiorthEigensystem& system, double t);

// L(t) = <psi~(0)|psi(t)> <psi~(t)|psi(0)>
CScalar loschmidt_echo(const BiorthState& state0, const BiorthEigensystem& system, double t);

// Builds a record from the two amplitudes and the dynamical phase:
// phi_tot = -i log(G / sqrt(L)) on the principal branches.
PhaseRecord make_phase_record(double t, CScalar amplitude, CScalar reverse_amplitude, CScalar phi_dyn);

// Phase decomposition along a path. Re(phi_tot) is unwrapped in time by
// nearest-branch continuation. A constant path uses the closed form
// phi_dyn = -t <psi~|H|psi>; otherwise the dynamical phase is integrated with
// the trapezoid rule and the state is stepped with midpoint exponentials.
std::vector<PhaseRecord> phase_decomposition(const BiorthState& state0, const ParamPath& path);

struct AdiabaticPhases {
    CScalar dynamical;     // integral of E_n dt
    CScalar geometric;     // i integral <e~_n| d/dt |e_n> dt
    double adiabaticity;   // max over the path of |<e~_m|dH/dt|e_n> / (E_m - E_n)|, m != n
    bool closed_loop;
};

// Band `band` indexes the (Re, Im)-sorted spectrum of the first sample and is
// followed by maximal overlap. Eigenvectors are parallel transported
// (<e~_n(t_j)|e_n(t_{j+1})> = 1); on a closed loop the holonomy
// -i log <e~_n(0)|e_n(T)> is added so the result is the loop's Berry phase.
AdiabaticPhases adiabatic_phases(std::size_t band, const ParamPath& path, double tol = kDefaultTolerance);

// Nearest-branch continuation of a phase series (adds multiples of 2 pi).
void unwrap_in_place(std::vector<double>& phases);
// x mapped into (-pi, pi].
double wrap_angle(double x);

}  // namespace nhdqpt
