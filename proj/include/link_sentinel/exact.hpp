#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace link_sentinel {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Dense square matrix over an exact scalar, row-major, 0-based storage.
template <class Scalar>
class ExactMatrix {
public:
    ExactMatrix() = default;
    explicit ExactMatrix(std::size_t n) : n_(n), data_(n * n, Scalar(0)) {}

    static ExactMatrix identity(std::size_t n) {
        ExactMatrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    std::size_t size() const noexcept { return n_; }

    Scalar& operator()(std::size_t row, std::size_t col) { return data_[row * n_ + col]; }
    const Scalar& operator()(std::size_t row, std::size_t col) const { return data_[row * n_ + col]; }

    friend bool operator==(const ExactMatrix&, const ExactMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Scalar> data_;
};

using IntMatrix = ExactMatrix<Integer>;

template <class Scalar>
ExactMatrix<Scalar> operator*(const ExactMatrix<Scalar>& a, const ExactMatrix<Scalar>& b) {
    const std::size_t n = a.size();
    ExactMatrix<Scalar> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < n; ++m) {
            if (a(i, m) == 0) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a(i, m) * b(m, j);
            }
        }
    }
    return out;
}

template <class Scalar>
ExactMatrix<Scalar> matrix_power(const ExactMatrix<Scalar>& base, std::size_t k) {
    ExactMatrix<Scalar> result = ExactMatrix<Scalar>::identity(base.size());
    ExactMatrix<Scalar> square = base;
    while (k > 0) {
        if (k & 1U) {
            result = result * square;
        }
        k >>= 1U;
        if (k > 0) {
            square = square * square;
        }
    }
    return result;
}

// y = M x for any scalar type constructible from the matrix entries.
template <class Scalar, class MatrixScalar>
std::vector<Scalar> multiply(const ExactMatrix<MatrixScalar>& m, std::span<const Scalar> x) {
    const std::size_t n = m.size();
    std::vector<Scalar> y(n, Scalar(0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (m(i, j) != 0) {
                y[i] += Scalar(m(i, j)) * x[j];
            }
        }
    }
    return y;
}

}  // namespace link_sentinel
