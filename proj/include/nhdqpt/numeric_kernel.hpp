#pragma once

#include <vector>

#include "nhdqpt/linalg.hpp"

namespace nhdqpt {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr double kExpmTolerance = 1e-12;

// Square root on the principal branch: Re(w) >= 0, and Im(w) >= 0 when
// Re(w) == 0. The same branch is used for eigenvector normalization and band
// energies everywhere in the library.
CScalar principal_sqrt(CScalar z);

// Eigenvalues with paired right vectors and left covectors, normalized so
// <l_m|r_n> = delta_mn.
struct BiorthEigensystem {
    std::vector<CScalar> energies;
    std::vector<Ket> rights;
    std::vector<Bra> lefts;
    double tolerance = kDefaultTolerance;

    std::size_t size() const { return energies.size(); }
};

struct InvariantReport {
    double biorthonormality = 0.0;  // max |<l_m|r_n> - delta_mn|
    double completeness = 0.0;      // max |sum_n |r_n><l_n| - I|
    double reconstruction = 0.0;    // max |sum_n E_n |r_n><l_n| - H|
};

InvariantReport measure_invariants(const BiorthEigensystem& sys, const CMatrix& h);

// Rescales both members by 1/principal_sqrt(<left|right>).
// Throws SelfOrthogonal when |<left|right>| <= tol.
std::pair<Ket, Bra> biorth_normalize(const Ket& right, const Bra& left, double tol = kDefaultTolerance);

// Diagonalizes a general complex matrix. Right vectors come from H, left
// covectors from H^T, paired by nearest eigenvalue. Energies are sorted by
// (Re, Im). Throws NearDefective when two eigenvalues lie within tol of each
// other, when the pairing is ambiguous, or when the resulting system misses
// its invariants.
BiorthEigensystem eig_dense(const CMatrix& h, double tol = kDefaultTolerance);

// e^{-z H} v by scaling and squaring of the truncated Taylor series.
Ket expm_apply(const CMatrix& h, CScalar z, const Ket& v);
// <v| e^{-z H}
Bra expm_apply(const CMatrix& h, CScalar z, const Bra& v);
// The full matrix e^{-z H}.
CMatrix expm(const CMatrix& h, CScalar z);

// Complex Schur form A = Q T Q^H with T upper triangular.
struct SchurForm {
    CMatrix q;
    CMatrix t;
};
SchurForm schur(const CMatrix& a);

}  // namespace nhdqpt
