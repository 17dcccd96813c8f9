#pragma once

#include "tscontrol/rational.hpp"

#include <complex>
#include <utility>
#include <vector>

namespace tsc {

// Polynomial over the rationals, coefficients ascending (c[0] + c[1] z + ...).
// Trailing zero coefficients are stripped; the zero polynomial has degree -1.
class Poly {
public:
    Poly() = default;
    Poly(std::initializer_list<Rational> coeffs);
    explicit Poly(std::vector<Rational> coeffs);
    static Poly constant(const Rational& c);
    static Poly variable(); // z

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Rational>& coeffs() const { return c_; }
    Rational coeff(int k) const;
    Rational leading() const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& s) const;
    Poly operator-() const;
    bool operator==(const Poly& o) const { return c_ == o.c_; }
    bool operator!=(const Poly& o) const { return !(*this == o); }

    // quotient/remainder against a nonzero divisor
    std::pair<Poly, Poly> divmod(const Poly& d) const;
    Poly derivative() const;
    Poly monic() const;

    Rational eval(const Rational& z) const;
    std::complex<double> eval(const std::complex<double>& z) const;

    std::string to_string(const std::string& var = "z") const;

private:
    void normalize();
    std::vector<Rational> c_;
};

Poly gcd(const Poly& a, const Poly& b); // monic
Poly lcm(const Poly& a, const Poly& b); // monic

struct RationalRoots {
    std::vector<std::pair<Rational, int>> roots; // (root, multiplicity)
    bool complete = true; // false when the divisor search was cut short
};

// All rational roots with multiplicity, by the rational root theorem on the
// primitive integer form. `complete` is true when every root of the
// polynomial splitting over Q has been found or excluded.
RationalRoots rational_roots(const Poly& p);

// Eigenvalues of the companion matrix of the monic form, in double precision.
std::vector<std::complex<double>> numeric_roots(const Poly& p);

// Ratio of polynomials, kept reduced with a monic denominator.
class RationalFn {
public:
    RationalFn() : num_(), den_{Rational(1)} {}
    RationalFn(Poly num, Poly den);
    static RationalFn constant(const Rational& c);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_strictly_proper() const;

    RationalFn operator+(const RationalFn& o) const;
    RationalFn operator-(const RationalFn& o) const;
    RationalFn operator*(const RationalFn& o) const;
    bool operator==(const RationalFn& o) const;
    bool operator!=(const RationalFn& o) const { return !(*this == o); }

    std::complex<double> eval(const std::complex<double>& z) const;

private:
    void reduce();
    Poly num_, den_;
};

// p x q matrix of rational functions
class RationalMatrix {
public:
    RationalMatrix() = default;
    RationalMatrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    RationalFn& operator()(int i, int j);
    const RationalFn& operator()(int i, int j) const;
    bool operator==(const RationalMatrix& o) const;
    bool operator!=(const RationalMatrix& o) const { return !(*this == o); }
    bool is_strictly_proper() const;

private:
    int rows_ = 0, cols_ = 0;
    std::vector<RationalFn> e_;
};

} // namespace tsc
