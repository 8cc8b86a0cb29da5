#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

namespace abelnet {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

using Vec = std::vector<std::int64_t>;
using RatVec = std::vector<Rational>;

// Dense row-major matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0))
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::vector<T> column(std::size_t j) const {
        std::vector<T> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using IntMatrix = Matrix<BigInt>;
using RatMatrix = Matrix<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k) == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
        }
    return c;
}

template <class T, class U>
std::vector<T> mat_vec(const Matrix<T>& a, const std::vector<U>& v) {
    std::vector<T> out(a.rows(), T(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out[i] += a(i, j) * T(v[j]);
    return out;
}

inline RatVec to_rational(const Vec& v) {
    RatVec out;
    out.reserve(v.size());
    for (auto e : v) out.emplace_back(e);
    return out;
}

inline std::int64_t to_i64(const BigInt& b) { return b.convert_to<std::int64_t>(); }

inline bool is_integer(const Rational& r) {
    return boost::multiprecision::denominator(r) == 1;
}

inline BigInt numer(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denom(const Rational& r) { return boost::multiprecision::denominator(r); }

inline BigInt big_gcd(BigInt a, BigInt b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        BigInt t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline BigInt big_lcm(const BigInt& a, const BigInt& b) {
    if (a == 0 || b == 0) return 0;
    BigInt g = big_gcd(a, b);
    BigInt l = a / g * b;
    return l < 0 ? BigInt(-l) : l;
}

// Scales a rational vector to the primitive integer vector on the same ray.
inline std::vector<BigInt> primitive_integer(const RatVec& v) {
    BigInt l = 1;
    for (const auto& e : v) l = big_lcm(l, denom(e));
    std::vector<BigInt> out(v.size());
    BigInt g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = numer(v[i] * Rational(l));
        g = big_gcd(g, out[i]);
    }
    if (g > 1)
        for (auto& e : out) e /= g;
    return out;
}

inline std::string to_string(const Rational& r) {
    std::ostringstream os;
    os << numer(r);
    if (denom(r) != 1) os << '/' << denom(r);
    return os.str();
}

inline std::string to_string(const BigInt& b) {
    std::ostringstream os;
    os << b;
    return os.str();
}

template <class T>
std::string join(const std::vector<T>& v, const char* sep = ",") {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        if constexpr (std::is_same_v<T, Rational> || std::is_same_v<T, BigInt>)
            os << to_string(v[i]);
        else
            os << v[i];
    }
    return os.str();
}

} // namespace abelnet
