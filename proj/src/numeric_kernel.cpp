#include "nhdqpt/numeric_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

CScalar principal_sqrt(CScalar z) {
    CScalar w = std::sqrt(z);
    // std::sqrt returns -i for (-1, -0.0); fold that onto the declared branch.
    if (w.real() == 0.0 && w.imag() < 0.0) w = -w;
    if (w.real() < 0.0) w = -w;
    return w;
}

std::pair<Ket, Bra> biorth_normalize(const Ket& right, const Bra& left, double tol) {
    const CScalar overlap = left * right;
    if (!(std::abs(overlap) > tol)) {
        throw SelfOrthogonal("biorth_normalize: |<l|r>| = " + std::to_string(std::abs(overlap)) +
                             " is at or below tolerance (exceptional point)");
    }
    const CScalar scale = 1.0 / principal_sqrt(overlap);
    return {scale * right, scale * left};
}

InvariantReport measure_invariants(const BiorthEigensystem& sys, const CMatrix& h) {
    const std::size_t n = sys.size();
    InvariantReport report;
    CMatrix identity_sum(n);
    CMatrix spectral_sum(n);
    for (std::size_t m = 0; m < n; ++m) {
        for (std::size_t k = 0; k < n; ++k) {
            const CScalar expected = (m == k) ? 1.0 : 0.0;
            report.biorthonormality =
                std::max(report.biorthonormality, std::abs(sys.lefts[m] * sys.rights[k] - expected));
        }
        const CMatrix projector = outer(sys.rights[m], sys.lefts[m]);
        identity_sum += projector;
        spectral_sum += sys.energies[m] * projector;
    }
    report.completeness = (identity_sum - CMatrix::identity(n)).max_abs();
    report.reconstruction = (spectral_sum - h).max_abs();
    return report;
}

SchurForm schur(const CMatrix& input) {
    const std::size_t n = input.size();
    CMatrix a = input;
    CMatrix q = CMatrix::identity(n);

    // Householder reduction to upper Hessenberg form.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        const std::size_t len = n - k - 1;
        std::vector<CScalar> v(len);
        double xnorm = 0.0;
        for (std::size_t i = 0; i < len; ++i) {
            v[i] = a(k + 1 + i, k);
            xnorm += std::norm(v[i]);
        }
        xnorm = std::sqrt(xnorm);
        if (xnorm == 0.0) continue;
        const CScalar phase = std::abs(v[0]) > 0.0 ? v[0] / std::abs(v[0]) : CScalar{1.0};
        v[0] += phase * xnorm;
        const double vnorm = norm2(v);
        for (auto& x : v) x /= vnorm;

        for (std::size_t j = 0; j < n; ++j) {
            CScalar s = 0.0;
            for (std::size_t i = 0; i < len; ++i) s += std::conj(v[i]) * a(k + 1 + i, j);
            for (std::size_t i = 0; i < len; ++i) a(k + 1 + i, j) -= 2.0 * v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) {
            CScalar s = 0.0;
            for (std::size_t m = 0; m < len; ++m) s += a(i, k + 1 + m) * v[m];
            for (std::size_t m = 0; m < len; ++m) a(i, k + 1 + m) -= 2.0 * s * std::conj(v[m]);
            CScalar sq = 0.0;
            for (std::size_t m = 0; m < len; ++m) sq += q(i, k + 1 + m) * v[m];
            for (std::size_t m = 0; m < len; ++m) q(i, k + 1 + m) -= 2.0 * sq * std::conj(v[m]);
        }
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }

    // Shifted QR iteration on the Hessenberg matrix, accumulated into q.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const int max_iterations = 60 * static_cast<int>(std::max<std::size_t>(n, 1));
    std::size_t hi = n == 0 ? 0 : n - 1;
    int iterations = 0;
    int total = 0;
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0) {
            const double scale = std::abs(a(lo - 1, lo - 1)) + std::abs(a(lo, lo));
            if (std::abs(a(lo, lo - 1)) <= eps * (scale == 0.0 ? 1.0 : scale)) {
                a(lo, lo - 1) = 0.0;
                break;
            }
            --lo;
        }
        if (lo == hi) {
            --hi;
            iterations = 0;
            continue;
        }
        if (++total > max_iterations) {
            throw ConvergenceFailure("schur: QR iteration did not converge");
        }
        ++iterations;

        CScalar mu;
        if (iterations % 11 == 0) {
            mu = a(hi, hi) + 0.75 * std::abs(a(hi, hi - 1)) * CScalar{1.0, 1.0};
        } else {
            const CScalar p = a(hi - 1, hi - 1);
            const CScalar b = a(hi - 1, hi);
            const CScalar c = a(hi, hi - 1);
            const CScalar d = a(hi, hi);
            const CScalar half_diff = 0.5 * (p - d);
            const CScalar root = std::sqrt(half_diff * half_diff + b * c);
            const CScalar mean = 0.5 * (p + d);
            const CScalar r1 = mean + root;
            const CScalar r2 = mean - root;
            mu = std::abs(r1 - d) < std::abs(r2 - d) ? r1 : r2;
        }

        for (std::size_t i = lo; i <= hi; ++i) a(i, i) -= mu;
        struct Rotation {
            double c;
            CScalar s;
        };
        std::vector<Rotation> rotations;
        rotations.reserve(hi - lo);
        for (std::size_t k = lo; k < hi; ++k) {
            const CScalar x1 = a(k, k);
            const CScalar x2 = a(k + 1, k);
            const double r = std::hypot(std::abs(x1), std::abs(x2));
            Rotation g{0.0, 1.0};
            if (r == 0.0) {
                g = {1.0, 0.0};
            } else if (std::abs(x1) > 0.0) {
                g.c = std::abs(x1) / r;
                g.s = (x1 / std::abs(x1)) * std::conj(x2) / r;
            }
            for (std::size_t j = k; j < n; ++j) {
                const CScalar u = a(k, j);
                const CScalar w = a(k + 1, j);
                a(k, j) = g.c * u + g.s * w;
                a(k + 1, j) = -std::conj(g.s) * u + g.c * w;
            }
            a(k + 1, k) = 0.0;
            rotations.push_back(g);
        }
        for (std::size_t k = lo; k < hi; ++k) {
            const Rotation& g = rotations[k - lo];
            const std::size_t last_row = std::min(k + 1, hi);
            for (std::size_t i = 0; i <= last_row; ++i) {
                const CScalar u = a(i, k);
                const CScalar w = a(i, k + 1);
                a(i, k) = u * g.c + w * std::conj(g.s);
                a(i, k + 1) = -u * g.s + w * g.c;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const CScalar u = q(i, k);
                const CScalar w = q(i, k + 1);
                q(i, k) = u * g.c + w * std::conj(g.s);
                q(i, k + 1) = -u * g.s + w * g.c;
            }
        }
        for (std::size_t i = lo; i <= hi; ++i) a(i, i) += mu;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) a(i, j) = 0.0;
    return {std::move(q), std::move(a)};
}

namespace {

struct RightEigen {
    std::vector<CScalar> values;
    std::vector<Ket> vectors;
};

// Unit 2-norm with the largest component real and positive.
Ket canonical(Ket v) {
    const double nrm = norm2(v.values());
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[pivot]) * (1.0 + 1e-12)) pivot = i;
    const CScalar phase = std::abs(v[pivot]) > 0.0 ? std::conj(v[pivot]) / std::abs(v[pivot]) : CScalar{1.0};
    return (phase / nrm) * std::move(v);
}

RightEigen right_eigen_2x2(const CMatrix& h) {
    const CScalar a = h(0, 0), b = h(0, 1), c = h(1, 0), d = h(1, 1);
    const CScalar mean = 0.5 * (a + d);
    const CScalar half_diff = 0.5 * (a - d);
    const CScalar root = principal_sqrt(half_diff * half_diff + b * c);
    RightEigen out;
    out.values = {mean + root, mean - root};
    for (const CScalar lambda : out.values) {
        Ket v1{b, lambda - a};
        Ket v2{lambda - d, c};
        Ket chosen = norm2(v1.values()) >= norm2(v2.values()) ? v1 : v2;
        if (norm2(chosen.values()) == 0.0) chosen = Ket{1.0, 0.0};
        out.vectors.push_back(canonical(std::move(chosen)));
    }
    return out;
}

RightEigen right_eigen_general(const CMatrix& h) {
    const std::size_t n = h.size();
    const SchurForm form = schur(h);
    const CMatrix& t = form.t;
    const double small = std::max(std::numeric_limits<double>::epsilon() * t.max_abs(),
                                  std::numeric_limits<double>::min());
    RightEigen out;
    for (std::size_t k = 0; k < n; ++k) {
        const CScalar lambda = t(k, k);
        std::vector<CScalar> x(n, 0.0);
        x[k] = 1.0;
        for (std::size_t ii = k; ii-- > 0;) {
            CScalar s = 0.0;
            for (std::size_t j = ii + 1; j <= k; ++j) s += t(ii, j) * x[j];
            CScalar denom = t(ii, ii) - lambda;
            if (std::abs(denom) < small) denom = small;
            x[ii] = -s / denom;
        }
        Ket v(n);
        for (std::size_t i = 0; i < n; ++i) {
            CScalar s = 0.0;
            for (std::size_t j = 0; j <= k; ++j) s += form.q(i, j) * x[j];
            v[i] = s;
        }
        out.values.push_back(lambda);
        out.vectors.push_back(canonical(std::move(v)));
    }
    return out;
}

RightEigen right_eigen(const CMatrix& h) {
    if (h.size() == 1) return {{h(0, 0)}, {Ket{1.0}}};
    if (h.size() == 2) return right_eigen_2x2(h);
    return right_eigen_general(h);
}

}  // namespace

BiorthEigensystem eig_dense(const CMatrix& h, double tol) {
    const std::size_t n = h.size();
    if (n == 0) throw DimensionMismatch("eig_dense: empty matrix");
    if (!h.all_finite()) throw NearDefective("eig_dense: non-finite matrix entries");

    const double scale = std::max(1.0, h.max_abs());
    RightEigen right = right_eigen(h);
    RightEigen left = right_eigen(h.transpose());

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(right.values[i] - right.values[j]) <= tol * scale)
                throw NearDefective("eig_dense: eigenvalues " + std::to_string(i) + " and " +
                                    std::to_string(j) + " coincide within tolerance");

    // Greedy nearest-eigenvalue pairing of H^T eigenvectors onto H eigenvalues.
    std::vector<bool> taken(n, false);
    std::vector<std::size_t> partner(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_j = n;
        for (std::size_t j = 0; j < n; ++j) {
            const double dist = std::abs(right.values[i] - left.values[j]);
            if (!taken[j] && dist < best) {
                best = dist;
                best_j = j;
            }
        }
        double second = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j)
            if (j != best_j) second = std::min(second, std::abs(right.values[i] - left.values[j]));
        if (best_j == n || (n > 1 && second < 2.0 * best)) {
            throw NearDefective("eig_dense: ambiguous left/right eigenvalue pairing");
        }
        taken[best_j] = true;
        partner[i] = best_j;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const CScalar ex = right.values[x], ey = right.values[y];
        if (ex.real() != ey.real()) return ex.real() < ey.real();
        return ex.imag() < ey.imag();
    });

    BiorthEigensystem sys;
    sys.tolerance = tol;
    for (const std::size_t i : order) {
        std::pair<Ket, Bra> pair;
        try {
            pair = biorth_normalize(right.vectors[i], as_bra(left.vectors[partner[i]]), tol);
        } catch (const SelfOrthogonal& e) {
            throw NearDefective(std::string("eig_dense: ") + e.what());
        }
        sys.energies.push_back(right.values[i]);
        sys.rights.push_back(std::move(pair.first));
        sys.lefts.push_back(std::move(pair.second));
    }

    const InvariantReport report = measure_invariants(sys, h);
    if (report.biorthonormality > tol || report.completeness > tol ||
        report.reconstruction > 10.0 * tol * scale) {
        throw NearDefective("eig_dense: eigenbasis too ill-conditioned for tolerance (biorth=" +
                            std::to_string(report.biorthonormality) +
                            ", completeness=" + std::to_string(report.completeness) + ")");
    }
    return sys;
}

CMatrix expm(const CMatrix& h, CScalar z) {
    const std::size_t n = h.size();
    CMatrix a = (-z) * h;
    const double norm = a.norm1();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    a *= std::ldexp(1.0, -squarings);

    CMatrix sum = CMatrix::identity(n);
    CMatrix term = CMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (int k = 1; k <= 40; ++k) {
        term = term * a;
        term *= 1.0 / k;
        sum += term;
        if (term.max_abs() <= 0.5 * eps * sum.max_abs()) break;
    }
    for (int i = 0; i < squarings; ++i) sum = sum * sum;
    return sum;
}

Ket expm_apply(const CMatrix& h, CScalar z, const Ket& v) {
    if (v.size() != h.size()) throw DimensionMismatch("expm_apply: dimension mismatch");
    if (z == CScalar{0.0}) return v;
    return expm(h, z) * v;
}

Bra expm_apply(const CMatrix& h, CScalar z, const Bra& v) {
    if (v.size() != h.size()) throw DimensionMismatch("expm_apply: dimension mismatch");
    if (z == CScalar{0.0}) return v;
    return v * expm(h, z);
}

}  // namespace nhdqpt
