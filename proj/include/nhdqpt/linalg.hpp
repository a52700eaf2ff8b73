#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nhdqpt {

using CScalar = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr CScalar kI{0.0, 1.0};

// Column vector |v>.
class Ket {
public:
    Ket() = default;
    explicit Ket(std::size_t n) : data_(n) {}
    Ket(std::initializer_list<CScalar> values) : data_(values) {}
    explicit Ket(std::vector<CScalar> values) : data_(std::move(values)) {}

    std::size_t size() const { return data_.size(); }
    CScalar& operator[](std::size_t i) { return data_[i]; }
    const CScalar& operator[](std::size_t i) const { return data_[i]; }
    std::span<const CScalar> values() const { return data_; }
    std::span<CScalar> values() { return data_; }

private:
    std::vector<CScalar> data_;
};

// Row covector <v~|. Components are stored as-is: a left eigenvector is NOT
// the conjugate of anything, and pairing with a Ket is bilinear.
class Bra {
public:
    Bra() = default;
    explicit Bra(std::size_t n) : data_(n) {}
    Bra(std::initializer_list<CScalar> values) : data_(values) {}
    explicit Bra(std::vector<CScalar> values) : data_(std::move(values)) {}

    std::size_t size() const { return data_.size(); }
    CScalar& operator[](std::size_t i) { return data_[i]; }
    const CScalar& operator[](std::size_t i) const { return data_[i]; }
    std::span<const CScalar> values() const { return data_; }
    std::span<CScalar> values() { return data_; }

private:
    std::vector<CScalar> data_;
};

// Dense square complex matrix, row-major.
class CMatrix {
public:
    CMatrix() = default;
    explicit CMatrix(std::size_t n) : n_(n), data_(n * n) {}
    CMatrix(std::initializer_list<std::initializer_list<CScalar>> rows);

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const CScalar> entries);
    static CMatrix diagonal(std::initializer_list<CScalar> entries) {
        return diagonal(std::span<const CScalar>(entries.begin(), entries.size()));
    }

    std::size_t size() const { return n_; }
    CScalar& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    const CScalar& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    CMatrix transpose() const;
    CMatrix adjoint() const;
    CScalar trace() const;
    double max_abs() const;
    double norm1() const;  // max column sum
    bool all_finite() const;

    CMatrix& operator+=(const CMatrix& other);
    CMatrix& operator-=(const CMatrix& other);
    CMatrix& operator*=(CScalar s);

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<CScalar> data_;
};

CMatrix operator+(CMatrix a, const CMatrix& b);
CMatrix operator-(CMatrix a, const CMatrix& b);
CMatrix operator*(CMatrix a, CScalar s);
CMatrix operator*(CScalar s, CMatrix a);
CMatrix operator*(const CMatrix& a, const CMatrix& b);

Ket operator*(const CMatrix& a, const Ket& v);
Bra operator*(const Bra& v, const CMatrix& a);
Ket operator*(CScalar s, Ket v);
Bra operator*(CScalar s, Bra v);
Ket operator+(Ket a, const Ket& b);
Bra operator+(Bra a, const Bra& b);
Ket operator-(Ket a, const Ket& b);
Bra operator-(Bra a, const Bra& b);

// <l|r>, bilinear.
CScalar operator*(const Bra& l, const Ket& r);
// |r><l|
CMatrix outer(const Ket& r, const Bra& l);

Bra as_bra(const Ket& v);            // same components, no conjugation
Ket as_ket(const Bra& v);
Bra dagger(const Ket& v);            // conjugate transpose
Ket dagger(const Bra& v);

double norm2(std::span<const CScalar> v);
double max_abs(std::span<const CScalar> v);
bool all_finite(std::span<const CScalar> v);

inline bool is_finite(CScalar z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace nhdqpt
