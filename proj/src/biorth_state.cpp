#include "nhdqpt/biorth_state.hpp"

#include <algorithm>
#include <cmath>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

BiorthState make_state(const Ket& right, const Bra& left, double tol) {
    if (right.size() != left.size() || right.size() == 0) {
        throw DimensionMismatch("make_state: right and left dimensions differ");
    }
    auto [r, l] = biorth_normalize(right, left, tol);
    return BiorthState(std::move(r), std::move(l));
}

BiorthState adopt_normalized(Ket right, Bra left) {
    if (right.size() != left.size()) throw DimensionMismatch("adopt_normalized: dimension mismatch");
    return BiorthState(std::move(right), std::move(left));
}

BiorthState eigenstate(const BiorthEigensystem& sys, std::size_t n) {
    return adopt_normalized(sys.rights.at(n), sys.lefts.at(n));
}

CScalar StateExpansion::total() const {
    CScalar s = 0.0;
    for (const auto& p : populations) s += p;
    return s;
}

StateExpansion expand_in_basis(const BiorthState& state, const BiorthEigensystem& basis) {
    if (basis.size() != state.dim()) throw DimensionMismatch("expand_in_basis: dimension mismatch");
    StateExpansion out;
    for (std::size_t n = 0; n < basis.size(); ++n) {
        const CScalar c = basis.lefts[n] * state.right();
        const CScalar ct = state.left() * basis.rights[n];
        out.c.push_back(c);
        out.c_tilde.push_back(ct);
        out.populations.push_back(c * ct);
    }
    return out;
}

CScalar expectation(const CMatrix& a, const BiorthState& state) {
    if (a.size() != state.dim()) throw DimensionMismatch("expectation: dimension mismatch");
    return state.left() * (a * state.right());
}

Observable Observable::from_eigensystem(const BiorthEigensystem& sys) {
    return {sys.energies, sys.rights, sys.lefts};
}

Observable Observable::from_matrix(const CMatrix& a, double tol) {
    return from_eigensystem(eig_dense(a, tol));
}

CMatrix Observable::matrix() const {
    CMatrix m(rights.empty() ? 0 : rights.front().size());
    for (std::size_t n = 0; n < size(); ++n) m += eigenvalues[n] * projector(n);
    return m;
}

CScalar ProjectorMixture::total_weight() const {
    CScalar s = 0.0;
    for (const auto& w : weights) s += w;
    return s;
}

CMatrix ProjectorMixture::density() const {
    CMatrix m(rights.empty() ? 0 : rights.front().size());
    for (std::size_t n = 0; n < weights.size(); ++n) m += weights[n] * outer(rights[n], lefts[n]);
    return m;
}

CScalar Measurement::total_probability() const {
    CScalar s = 0.0;
    for (const auto& o : outcomes) s += o.probability;
    return s;
}

Measurement measure(const Observable& a, const BiorthState& state) {
    if (a.size() != state.dim()) throw DimensionMismatch("measure: dimension mismatch");
    Measurement out;
    for (std::size_t n = 0; n < a.size(); ++n) {
        const CScalar p = (a.lefts[n] * state.right()) * (state.left() * a.rights[n]);
        out.outcomes.push_back({a.eigenvalues[n], p, adopt_normalized(a.rights[n], a.lefts[n])});
        out.unread.weights.push_back(p);
        out.unread.rights.push_back(a.rights[n]);
        out.unread.lefts.push_back(a.lefts[n]);
    }
    return out;
}

std::optional<CScalar> verify_eigenstate(const BiorthState& state, const CMatrix& o, double tol) {
    if (o.size() != state.dim()) throw DimensionMismatch("verify_eigenstate: dimension mismatch");
    const Ket& r = state.right();
    const Bra& l = state.left();
    // <psi~|psi> = 1, so the candidate eigenvalue is the expectation value.
    const CScalar lambda = l * (o * r);
    const double bound = tol * std::max(1.0, o.max_abs());
    const Ket right_residual = o * r - lambda * r;
    const Bra left_residual = l * o - lambda * l;
    const double scale_r = std::max(1.0, max_abs(r.values()));
    const double scale_l = std::max(1.0, max_abs(l.values()));
    if (max_abs(right_residual.values()) > bound * scale_r) return std::nullopt;
    if (max_abs(left_residual.values()) > bound * scale_l) return std::nullopt;
    return lambda;
}

CMatrix assemble_from_spectrum(const BiorthEigensystem& sys) {
    CMatrix m(sys.size());
    for (std::size_t n = 0; n < sys.size(); ++n) m += sys.energies[n] * outer(sys.rights[n], sys.lefts[n]);
    return m;
}

}  // namespace nhdqpt
