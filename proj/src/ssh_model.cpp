#include "nhdqpt/ssh_model.hpp"

#include <cmath>

#include "nhdqpt/errors.hpp"
#include "nhdqpt/numeric_kernel.hpp"

namespace nhdqpt::ssh {

BlochVector bloch_vector(const Params& p, double k) {
    BlochVector v;
    v.dx = 1.0 + p.q * std::cos(k);
    v.dy = -p.q * std::sin(k);
    v.dz = CScalar{0.0, p.eta};
    v.d = principal_sqrt(CScalar{band_energy_squared(p, k), 0.0});
    return v;
}

double band_energy_squared(const Params& p, double k) {
    const double re = 1.0 + p.q * std::cos(k);
    const double im = p.q * std::sin(k);
    return re * re + im * im - p.eta * p.eta;
}

CMatrix build_hk(const Params& p, double k) {
    const CScalar hop = 1.0 + p.q * std::exp(CScalar{0.0, k});
    const CScalar hop_back = 1.0 + p.q * std::exp(CScalar{0.0, -k});
    return CMatrix{{CScalar{0.0, p.eta}, hop}, {hop_back, CScalar{0.0, -p.eta}}};
}

namespace {

void require_regular(const BlochVector& v) {
    if (!(std::abs(v.d) > kExceptionalTolerance)) {
        throw ExceptionalPoint("band_eigenpairs: |d| vanishes (exceptional point)");
    }
}

BandEigenpairs standard_gauge(const BlochVector& v) {
    const CScalar u = 1.0 + v.dz / v.d;
    const CScalar plus_off = (v.dx + kI * v.dy) / v.d;
    const CScalar minus_off = (v.dx - kI * v.dy) / v.d;
    const CScalar inv = 1.0 / principal_sqrt(2.0 * u);
    BandEigenpairs out;
    out.plus.right = Ket{inv * u, inv * plus_off};
    out.plus.left = Bra{inv * u, inv * minus_off};
    out.minus.right = Ket{-inv * minus_off, inv * u};
    out.minus.left = Bra{-inv * plus_off, inv * u};
    return out;
}

// Built on (1 - dz/d); regular where the standard gauge divides by zero.
BandEigenpairs alternate_gauge(const BlochVector& v) {
    const CScalar w = 1.0 - v.dz / v.d;
    const CScalar plus_off = (v.dx + kI * v.dy) / v.d;
    const CScalar minus_off = (v.dx - kI * v.dy) / v.d;
    const CScalar inv = 1.0 / principal_sqrt(2.0 * w);
    BandEigenpairs out;
    out.plus.right = Ket{inv * minus_off, inv * w};
    out.plus.left = Bra{inv * plus_off, inv * w};
    out.minus.right = Ket{inv * w, -inv * plus_off};
    out.minus.left = Bra{inv * w, -inv * minus_off};
    out.alternate_gauge = true;
    return out;
}

}  // namespace

BandEigenpairs band_eigenpairs(const BlochVector& v) {
    require_regular(v);
    if (!(std::abs(1.0 + v.dz / v.d) > kGaugeTolerance)) {
        throw GaugeSingular("band_eigenpairs: 1 + dz/d vanishes; use the alternate gauge");
    }
    return standard_gauge(v);
}

BandEigenpairs band_eigenpairs_any_gauge(const BlochVector& v) {
    require_regular(v);
    if (!(std::abs(1.0 + v.dz / v.d) > kGaugeTolerance)) return alternate_gauge(v);
    return standard_gauge(v);
}

std::string_view to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::PTSymmetricAlpha: return "PTSymmetricAlpha";
        case PhaseLabel::PTSymmetricBeta: return "PTSymmetricBeta";
        case PhaseLabel::BrokenPhaseI: return "BrokenPhaseI";
        case PhaseLabel::BrokenPhaseII: return "BrokenPhaseII";
        case PhaseLabel::CriticalBoundary: return "CriticalBoundary";
    }
    return "?";
}

std::string_view to_string(ModeClass mode) {
    switch (mode) {
        case ModeClass::RealEnergy: return "RealEnergy";
        case ModeClass::ImaginaryEnergy: return "ImaginaryEnergy";
        case ModeClass::ExceptionalPoint: return "ExceptionalPoint";
    }
    return "?";
}

PhaseLabel classify_phase(const Params& p) {
    const double strength = std::abs(p.eta);
    // min_k and max_k of |1 + q e^{ik}|
    const double lower = std::abs(1.0 - std::abs(p.q));
    const double upper = 1.0 + std::abs(p.q);
    if (std::abs(strength - lower) <= kExceptionalTolerance || std::abs(strength - upper) <= kExceptionalTolerance) {
        return PhaseLabel::CriticalBoundary;
    }
    if (strength < lower) return p.q < 1.0 ? PhaseLabel::PTSymmetricAlpha : PhaseLabel::PTSymmetricBeta;
    if (strength > upper) return PhaseLabel::BrokenPhaseI;
    return PhaseLabel::BrokenPhaseII;
}

ModeClass classify_mode(const Params& p, double k) {
    const double d2 = band_energy_squared(p, k);
    if (std::abs(d2) <= kExceptionalTolerance) return ModeClass::ExceptionalPoint;
    return d2 > 0.0 ? ModeClass::RealEnergy : ModeClass::ImaginaryEnergy;
}

bool all_modes_real(const Params& p) {
    return std::abs(p.eta) <= std::abs(1.0 - std::abs(p.q)) + kExceptionalTolerance;
}

BiorthState ground_state(const Params& p, double k) {
    const BandEigenpairs pairs = band_eigenpairs_any_gauge(bloch_vector(p, k));
    return adopt_normalized(pairs.minus.right, pairs.minus.left);
}

MomentumGrid MomentumGrid::inclusive(std::size_t m) {
    if (m < 2) throw ValidationError("MomentumGrid::inclusive needs at least two samples");
    MomentumGrid grid;
    grid.kind = Kind::Inclusive;
    grid.ks.resize(m);
    for (std::size_t j = 0; j < m; ++j) grid.ks[j] = kPi * static_cast<double>(j) / static_cast<double>(m - 1);
    grid.ks.back() = kPi;
    return grid;
}

MomentumGrid MomentumGrid::midpoint(std::size_t m) {
    if (m < 1) throw ValidationError("MomentumGrid::midpoint needs at least one sample");
    MomentumGrid grid;
    grid.kind = Kind::Midpoint;
    grid.ks.resize(m);
    for (std::size_t j = 0; j < m; ++j) grid.ks[j] = kPi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
    return grid;
}

double MomentumGrid::spacing() const {
    const auto m = static_cast<double>(ks.size());
    return kind == Kind::Inclusive ? kPi / (m - 1.0) : kPi / m;
}

}  // namespace nhdqpt::ssh
