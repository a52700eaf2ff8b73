#pragma once

#include <optional>
#include <vector>

#include "nhdqpt/linalg.hpp"
#include "nhdqpt/numeric_kernel.hpp"

namespace nhdqpt {

// A pure state rho = |psi><psi~| carried as an inseparable (right, left)
// pair with <psi~|psi> = 1.
class BiorthState {
public:
    const Ket& right() const { return right_; }
    const Bra& left() const { return left_; }
    std::size_t dim() const { return right_.size(); }

    // rho = |psi><psi~|
    CMatrix density() const { return outer(right_, left_); }

private:
    friend BiorthState make_state(const Ket&, const Bra&, double);
    friend BiorthState adopt_normalized(Ket, Bra);
    BiorthState(Ket r, Bra l) : right_(std::move(r)), left_(std::move(l)) {}

    Ket right_;
    Bra left_;
};

// Rescales the pair with biorth_normalize. Throws SelfOrthogonal or
// DimensionMismatch.
BiorthState make_state(const Ket& right, const Bra& left, double tol = kDefaultTolerance);

// Wraps a pair that is already normalized (e.g. produced by time evolution).
// The pairing is trusted; no rescaling happens.
BiorthState adopt_normalized(Ket right, Bra left);

// The n-th member of an eigensystem as a state.
BiorthState eigenstate(const BiorthEigensystem& sys, std::size_t n);

struct StateExpansion {
    std::vector<CScalar> c;        // c_n  = <e~_n|psi>
    std::vector<CScalar> c_tilde;  // c~_n = <psi~|e_n>
    std::vector<CScalar> populations;  // c_n c~_n; may be negative or complex

    CScalar total() const;
};

StateExpansion expand_in_basis(const BiorthState& state, const BiorthEigensystem& basis);

// Tr[A |psi><psi~|] = <psi~|A|psi>
CScalar expectation(const CMatrix& a, const BiorthState& state);

// An observable given by its spectral data A = sum_n a_n |a_n><a~_n|.
struct Observable {
    std::vector<CScalar> eigenvalues;
    std::vector<Ket> rights;
    std::vector<Bra> lefts;

    static Observable from_eigensystem(const BiorthEigensystem& sys);
    static Observable from_matrix(const CMatrix& a, double tol = kDefaultTolerance);

    std::size_t size() const { return eigenvalues.size(); }
    CMatrix projector(std::size_t n) const { return outer(rights[n], lefts[n]); }
    CMatrix matrix() const;
};

// Weighted projector list sum_n w_n |a_n><a~_n|; weights are kept raw and
// never renormalized.
struct ProjectorMixture {
    std::vector<CScalar> weights;
    std::vector<Ket> rights;
    std::vector<Bra> lefts;

    CScalar total_weight() const;
    CMatrix density() const;
};

struct MeasurementOutcome {
    CScalar value;        // a_n
    CScalar probability;  // p_n = <a~_n|psi><psi~|a_n>
    BiorthState post_state;
};

struct Measurement {
    std::vector<MeasurementOutcome> outcomes;
    ProjectorMixture unread;  // state when the record is discarded

    CScalar total_probability() const;
};

Measurement measure(const Observable& a, const BiorthState& state);

// Returns lambda when O|psi> = lambda|psi> and <psi~|O = lambda<psi~| both
// hold within tol * max(1, |O|_max).
std::optional<CScalar> verify_eigenstate(const BiorthState& state, const CMatrix& o, double tol = 1e-8);

// sum_n E_n |e_n><e~_n|
CMatrix assemble_from_spectrum(const BiorthEigensystem& sys);

}  // namespace nhdqpt
