#include "tscontrol/rational.hpp"
#include "tscontrol/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace tsc {

std::string to_string(const Rational& r) {
    return r.str();
}

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

using BigInt = boost::multiprecision::cpp_int;

BigInt pow10(long e) {
    BigInt r = 1;
    for (long i = 0; i < e; ++i)
        r *= 10;
    return r;
}

// decimal literal -> exact rational, e.g. "-0.15e2" -> -15
Rational parse_decimal(const std::string& text) {
    std::string s = text;
    bool neg = false;
    std::size_t pos = 0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::string digits;
    long frac_len = 0;
    long exponent = 0;
    bool seen_dot = false, seen_digit = false;
    while (pos < s.size()) {
        char c = s[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_dot)
                ++frac_len;
            seen_digit = true;
            ++pos;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
            ++pos;
        } else if ((c == 'e' || c == 'E') && seen_digit) {
            std::string es = s.substr(pos + 1);
            bool eneg = false;
            if (!es.empty() && (es[0] == '+' || es[0] == '-')) {
                eneg = es[0] == '-';
                es = es.substr(1);
            }
            if (!all_digits(es) || es.size() > 6)
                throw InputError("bad numeric literal: " + text);
            exponent = std::stol(es);
            if (eneg)
                exponent = -exponent;
            pos = s.size();
        } else {
            throw InputError("bad numeric literal: " + text);
        }
    }
    if (!seen_digit)
        throw InputError("bad numeric literal: " + text);
    // strip leading zeros: cpp_int would read "015" as octal
    digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
    BigInt mant(digits.empty() ? "0" : digits);
    if (neg)
        mant = -mant;
    long net = exponent - frac_len;
    if (net >= 0)
        return Rational(mant * pow10(net));
    return Rational(mant, pow10(-net));
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c) != 0; }),
            s.end());
    if (s.empty())
        throw InputError("empty numeric literal");
    auto slash = s.find('/');
    if (slash != std::string::npos) {
        Rational num = parse_decimal(s.substr(0, slash));
        Rational den = parse_decimal(s.substr(slash + 1));
        if (den == 0)
            throw InputError("zero denominator in: " + text);
        return num / den;
    }
    return parse_decimal(s);
}

RatMat::RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0)
        throw InputError("negative matrix dimension");
}

RatMat RatMat::identity(int n) {
    RatMat m(n, n);
    for (int i = 0; i < n; ++i)
        m(i, i) = 1;
    return m;
}

RatMat RatMat::zero(int rows, int cols) { return RatMat(rows, cols); }

Rational rational_from_double(double v) {
    if (!std::isfinite(v))
        throw InputError("non-finite value has no rational form");
    int exp2 = 0;
    double mant = std::frexp(v, &exp2);
    // mant * 2^exp2 with mant carrying at most 53 significant bits
    long long imant = static_cast<long long>(std::ldexp(mant, 53));
    BigInt num = imant;
    int shift = exp2 - 53;
    if (shift >= 0) {
        BigInt p = 1;
        p <<= shift;
        return Rational(num * p);
    }
    BigInt p = 1;
    p <<= -shift;
    return Rational(num, p);
}

RatMat RatMat::from_double(const Eigen::MatrixXd& m) {
    RatMat r(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < r.rows_; ++i)
        for (int j = 0; j < r.cols_; ++j)
            r(i, j) = rational_from_double(m(i, j));
    return r;
}

Rational& RatMat::operator()(int i, int j) {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
}
const Rational& RatMat::operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
}

RatMat RatMat::operator+(const RatMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InputError("matrix size mismatch in +");
    RatMat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k] + o.a_[k];
    return r;
}

RatMat RatMat::operator-(const RatMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
        throw InputError("matrix size mismatch in -");
    RatMat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k] - o.a_[k];
    return r;
}

RatMat RatMat::operator*(const RatMat& o) const {
    if (cols_ != o.rows_)
        throw InputError("matrix size mismatch in *");
    RatMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const Rational& aik = (*this)(i, k);
            if (aik == 0)
                continue;
            for (int j = 0; j < o.cols_; ++j)
                r(i, j) += aik * o(k, j);
        }
    return r;
}

RatMat RatMat::operator*(const Rational& s) const {
    RatMat r(rows_, cols_);
    for (std::size_t k = 0; k < a_.size(); ++k)
        r.a_[k] = a_[k] * s;
    return r;
}

RatMat RatMat::operator-() const { return *this * Rational(-1); }

bool RatMat::operator==(const RatMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

RatMat RatMat::transpose() const {
    RatMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(j, i) = (*this)(i, j);
    return r;
}

RatMat RatMat::hstack(const RatMat& o) const {
    if (rows_ != o.rows_)
        throw InputError("row mismatch in hstack");
    RatMat r(rows_, cols_ + o.cols_);
    for (int i = 0; i < rows_; ++i) {
        for (int j = 0; j < cols_; ++j)
            r(i, j) = (*this)(i, j);
        for (int j = 0; j < o.cols_; ++j)
            r(i, cols_ + j) = o(i, j);
    }
    return r;
}

RatMat RatMat::vstack(const RatMat& o) const {
    if (cols_ != o.cols_)
        throw InputError("column mismatch in vstack");
    RatMat r(rows_ + o.rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(i, j) = (*this)(i, j);
    for (int i = 0; i < o.rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            r(rows_ + i, j) = o(i, j);
    return r;
}

RatMat RatMat::block(int i, int j, int r, int c) const {
    if (i < 0 || j < 0 || r < 0 || c < 0 || i + r > rows_ || j + c > cols_)
        throw InputError("block out of range");
    RatMat b(r, c);
    for (int ii = 0; ii < r; ++ii)
        for (int jj = 0; jj < c; ++jj)
            b(ii, jj) = (*this)(i + ii, j + jj);
    return b;
}

int RatMat::rank() const {
    RatMat m = *this;
    int rank = 0;
    int row = 0;
    for (int col = 0; col < cols_ && row < rows_; ++col) {
        int piv = -1;
        for (int i = row; i < rows_; ++i)
            if (m(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            continue;
        if (piv != row)
            for (int j = 0; j < cols_; ++j)
                std::swap(m(piv, j), m(row, j));
        for (int i = row + 1; i < rows_; ++i) {
            if (m(i, col) == 0)
                continue;
            Rational f = m(i, col) / m(row, col);
            for (int j = col; j < cols_; ++j)
                m(i, j) -= f * m(row, j);
        }
        ++row;
        ++rank;
    }
    return rank;
}

Rational RatMat::determinant() const {
    if (rows_ != cols_)
        throw InputError("determinant of non-square matrix");
    RatMat m = *this;
    Rational det = 1;
    for (int col = 0; col < cols_; ++col) {
        int piv = -1;
        for (int i = col; i < rows_; ++i)
            if (m(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            return 0;
        if (piv != col) {
            for (int j = 0; j < cols_; ++j)
                std::swap(m(piv, j), m(col, j));
            det = -det;
        }
        det *= m(col, col);
        for (int i = col + 1; i < rows_; ++i) {
            if (m(i, col) == 0)
                continue;
            Rational f = m(i, col) / m(col, col);
            for (int j = col; j < cols_; ++j)
                m(i, j) -= f * m(col, j);
        }
    }
    return det;
}

RatMat RatMat::inverse() const {
    if (rows_ != cols_)
        throw PreconditionError("inverse of non-square matrix");
    int n = rows_;
    RatMat m = hstack(identity(n));
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int i = col; i < n; ++i)
            if (m(i, col) != 0) {
                piv = i;
                break;
            }
        if (piv < 0)
            throw PreconditionError("matrix is singular");
        if (piv != col)
            for (int j = 0; j < 2 * n; ++j)
                std::swap(m(piv, j), m(col, j));
        Rational d = m(col, col);
        for (int j = 0; j < 2 * n; ++j)
            m(col, j) /= d;
        for (int i = 0; i < n; ++i) {
            if (i == col || m(i, col) == 0)
                continue;
            Rational f = m(i, col);
            for (int j = 0; j < 2 * n; ++j)
                m(i, j) -= f * m(col, j);
        }
    }
    return m.block(0, n, n, n);
}

bool RatMat::is_zero() const {
    return std::all_of(a_.begin(), a_.end(), [](const Rational& r) { return r == 0; });
}

Eigen::MatrixXd RatMat::to_double() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m(i, j) = static_cast<double>((*this)(i, j));
    return m;
}

} // namespace tsc
