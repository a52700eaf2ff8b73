#pragma once

#include <string_view>
#include <vector>

#include "nhdqpt/biorth_state.hpp"
#include "nhdqpt/linalg.hpp"

namespace nhdqpt::ssh {

// Non-Hermitian SSH chain in units of the intracell hopping J1 = 1:
// q = J2/J1, eta = mu/J1 (gain/loss strength).
struct Params {
    double q = 0.0;
    double eta = 0.0;

    friend bool operator==(const Params&, const Params&) = default;
};

// H_k = d . sigma with d = (1 + q cos k, -q sin k, i eta); basis order (|1>, |0>).
struct BlochVector {
    CScalar dx;
    CScalar dy;
    CScalar dz;
    CScalar d;  // principal_sqrt(dx^2 + dy^2 + dz^2), the upper band energy
};

BlochVector bloch_vector(const Params& p, double k);

// |1 + q e^{ik}|^2 - eta^2, i.e. d_k^2, evaluated in real arithmetic.
double band_energy_squared(const Params& p, double k);

CMatrix build_hk(const Params& p, double k);

struct BandPair {
    Ket right;
    Bra left;
};

struct BandEigenpairs {
    BandPair plus;   // energy +d
    BandPair minus;  // energy -d
    bool alternate_gauge = false;
};

inline constexpr double kExceptionalTolerance = 1e-12;
inline constexpr double kGaugeTolerance = 1e-8;

// Closed-form biorthonormal band eigenvectors. Throws ExceptionalPoint when
// |d| <= 1e-12 and GaugeSingular when |1 + dz/d| <= 1e-8.
BandEigenpairs band_eigenpairs(const BlochVector& v);

// Same closed forms, but falls back to the (1 - dz/d) gauge instead of
// throwing GaugeSingular.
BandEigenpairs band_eigenpairs_any_gauge(const BlochVector& v);

enum class PhaseLabel { PTSymmetricAlpha, PTSymmetricBeta, BrokenPhaseI, BrokenPhaseII, CriticalBoundary };
enum class ModeClass { RealEnergy, ImaginaryEnergy, ExceptionalPoint };

std::string_view to_string(PhaseLabel label);
std::string_view to_string(ModeClass mode);

PhaseLabel classify_phase(const Params& p);
ModeClass classify_mode(const Params& p, double k);

// Every mode has real energy: |eta| <= |1 - q| (boundary included).
bool all_modes_real(const Params& p);

// Lower-band pair (|e_k^->, <e~_k^-|) as a state.
BiorthState ground_state(const Params& p, double k);

// Momentum samples on [0, pi].
struct MomentumGrid {
    enum class Kind { Inclusive, Midpoint };

    Kind kind = Kind::Midpoint;
    std::vector<double> ks;

    // M samples including both endpoints, for curves.
    static MomentumGrid inclusive(std::size_t m);
    // M cell centres (j + 1/2) pi / M, for quadrature.
    static MomentumGrid midpoint(std::size_t m);

    std::size_t size() const { return ks.size(); }
    double spacing() const;
};

}  // namespace nhdqpt::ssh
