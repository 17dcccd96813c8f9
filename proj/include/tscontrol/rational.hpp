#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>
#include <string>
#include <vector>

namespace tsc {

using Rational = boost::multiprecision::cpp_rational;

std::string to_string(const Rational& r);

// Accepts integers, p/q fractions, and finite decimals (optionally with an
// exponent), all converted exactly. Throws InputError on anything else.
Rational parse_rational(const std::string& text);

// exact value of a finite double (every finite double is dyadic)
Rational rational_from_double(double v);

// Dense matrix over the rationals. Row-major storage; all arithmetic exact.
class RatMat {
public:
    RatMat() = default;
    RatMat(int rows, int cols);

    static RatMat identity(int n);
    static RatMat zero(int rows, int cols);
    static RatMat from_double(const Eigen::MatrixXd& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Rational& operator()(int i, int j);
    const Rational& operator()(int i, int j) const;

    RatMat operator+(const RatMat& o) const;
    RatMat operator-(const RatMat& o) const;
    RatMat operator*(const RatMat& o) const;
    RatMat operator*(const Rational& s) const;
    RatMat operator-() const;
    bool operator==(const RatMat& o) const;
    bool operator!=(const RatMat& o) const { return !(*this == o); }

    RatMat transpose() const;
    RatMat hstack(const RatMat& o) const;
    RatMat vstack(const RatMat& o) const;
    RatMat block(int i, int j, int r, int c) const;

    int rank() const;
    Rational determinant() const;
    RatMat inverse() const;
    bool is_zero() const;

    Eigen::MatrixXd to_double() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<Rational> a_;
};

} // namespace tsc
