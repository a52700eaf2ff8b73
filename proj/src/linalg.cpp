#include "nhdqpt/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "nhdqpt/errors.hpp"

namespace nhdqpt {

CMatrix::CMatrix(std::initializer_list<std::initializer_list<CScalar>> rows) : n_(rows.size()) {
    data_.reserve(n_ * n_);
    for (const auto& row : rows) {
        if (row.size() != n_) {
            throw DimensionMismatch("CMatrix: ragged initializer");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::diagonal(std::span<const CScalar> entries) {
    CMatrix m(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
    return m;
}

CMatrix CMatrix::transpose() const {
    CMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

CMatrix CMatrix::adjoint() const {
    CMatrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
}

CScalar CMatrix::trace() const {
    CScalar s = 0.0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, i);
    return s;
}

double CMatrix::max_abs() const { return nhdqpt::max_abs(data_); }

double CMatrix::norm1() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double col = 0.0;
        for (std::size_t i = 0; i < n_; ++i) col += std::abs((*this)(i, j));
        best = std::max(best, col);
    }
    return best;
}

bool CMatrix::all_finite() const { return nhdqpt::all_finite(data_); }

CMatrix& CMatrix::operator+=(const CMatrix& other) {
    if (other.n_ != n_) throw DimensionMismatch("CMatrix +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
    if (other.n_ != n_) throw DimensionMismatch("CMatrix -=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

CMatrix& CMatrix::operator*=(CScalar s) {
    for (auto& x : data_) x *= s;
    return *this;
}

CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
CMatrix operator*(CMatrix a, CScalar s) { return a *= s; }
CMatrix operator*(CScalar s, CMatrix a) { return a *= s; }

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("CMatrix product");
    CMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const CScalar aik = a(i, k);
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

Ket operator*(const CMatrix& a, const Ket& v) {
    const std::size_t n = a.size();
    if (v.size() != n) throw DimensionMismatch("matrix-ket product");
    Ket out(n);
    for (std::size_t i = 0; i < n; ++i) {
        CScalar s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += a(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

Bra operator*(const Bra& v, const CMatrix& a) {
    const std::size_t n = a.size();
    if (v.size() != n) throw DimensionMismatch("bra-matrix product");
    Bra out(n);
    for (std::size_t j = 0; j < n; ++j) {
        CScalar s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i] * a(i, j);
        out[j] = s;
    }
    return out;
}

Ket operator*(CScalar s, Ket v) {
    for (auto& x : v.values()) x *= s;
    return v;
}

Bra operator*(CScalar s, Bra v) {
    for (auto& x : v.values()) x *= s;
    return v;
}

Ket operator+(Ket a, const Ket& b) {
    if (a.size() != b.size()) throw DimensionMismatch("ket sum");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Bra operator+(Bra a, const Bra& b) {
    if (a.size() != b.size()) throw DimensionMismatch("bra sum");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Ket operator-(Ket a, const Ket& b) {
    if (a.size() != b.size()) throw DimensionMismatch("ket difference");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

Bra operator-(Bra a, const Bra& b) {
    if (a.size() != b.size()) throw DimensionMismatch("bra difference");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    return a;
}

CScalar operator*(const Bra& l, const Ket& r) {
    if (l.size() != r.size()) throw DimensionMismatch("inner product");
    CScalar s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += l[i] * r[i];
    return s;
}

CMatrix outer(const Ket& r, const Bra& l) {
    if (l.size() != r.size()) throw DimensionMismatch("outer product");
    CMatrix m(r.size());
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < l.size(); ++j) m(i, j) = r[i] * l[j];
    return m;
}

Bra as_bra(const Ket& v) { return Bra(std::vector<CScalar>(v.values().begin(), v.values().end())); }
Ket as_ket(const Bra& v) { return Ket(std::vector<CScalar>(v.values().begin(), v.values().end())); }

Bra dagger(const Ket& v) {
    Bra out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

Ket dagger(const Bra& v) {
    Ket out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::conj(v[i]);
    return out;
}

double norm2(std::span<const CScalar> v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

double max_abs(std::span<const CScalar> v) {
    double m = 0.0;
    for (const auto& x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_finite(std::span<const CScalar> v) {
    return std::all_of(v.begin(), v.end(), [](CScalar z) { return is_finite(z); });
}

}  // namespace nhdqpt
