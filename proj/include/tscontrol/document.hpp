#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tscontrol/poly.hpp"
#include "tscontrol/rational.hpp"
#include "tscontrol/system.hpp"
#include "tscontrol/timescale.hpp"

namespace tsc {

// Shortest decimal form that parses back to exactly v.
std::string format_double(double v);

// Evaluates the scalar time-scale exponential e_rate(t, t_min) of a grid,
// extended off-node into dense runs (the value the continuous flow takes
// between quadrature nodes). Throws InputError for t inside a gap.
double dense_scalar_exp(const TimeScaleGrid& grid, double rate, double t);

using TseFn = std::function<double(double rate, double t)>;

// One additive term of a matrix-entry expression:
//   c | c*t | c*t^k | c*sin(w*t) | c*cos(w*t) | c*tse(r)
// Literals keep their lexical class: integers and p/q fractions are exact,
// anything with a decimal point or exponent is a float literal and knocks the
// document out of exact mode. tse(r) is e_r(t, t_min) on the document's grid.
struct ExprTerm {
    enum class Kind { Constant, Power, Sin, Cos, Tse };
    Kind kind = Kind::Constant;
    Rational coeff = Rational(1);
    bool coeff_exact = true;
    int power = 1;              // Kind::Power
    Rational arg = Rational(0); // frequency (Sin/Cos) or rate (Tse)
    bool arg_exact = true;
};

class EntryExpr {
  public:
    EntryExpr() = default;
    static EntryExpr parse(const std::string& text);
    static EntryExpr constant(const Rational& c);

    const std::vector<ExprTerm>& terms() const { return terms_; }
    bool is_constant() const;
    bool exact() const;
    bool uses_tse() const;
    Rational constant_value() const; // requires is_constant()
    double value(double t, const TseFn& tse = {}) const;
    std::string to_text() const;

  private:
    std::vector<ExprTerm> terms_;
};

// Rectangular matrix of entry expressions; text form [a, b; c, d].
class ExprMatrix {
  public:
    ExprMatrix() = default;
    ExprMatrix(int rows, int cols);
    static ExprMatrix parse(const std::string& text);
    static ExprMatrix from_exact(const RatMat& m);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    EntryExpr& at(int i, int j);
    const EntryExpr& at(int i, int j) const;

    bool is_constant() const;
    bool exact() const;
    bool uses_tse() const;
    RatMat exact_value() const;                  // requires is_constant() && exact()
    Eigen::MatrixXd constant_value() const;      // requires is_constant()
    Eigen::MatrixXd value(double t, const TseFn& tse = {}) const;
    std::string to_text() const;

  private:
    int rows_ = 0, cols_ = 0;
    std::vector<EntryExpr> e_;
};

struct AnalysisOptions {
    std::optional<std::vector<double>> horizons;
    std::optional<double> delta_margin;
    std::optional<double> tol;
    std::optional<int> q;
    std::optional<double> t0;
    std::optional<double> tf;
};

// Text description of a system + time scale + analysis options. Sections:
//   [system]     A/B/C required, D/u/x0 optional (u is the input signal, m x 1;
//                x0 must be constant)
//   [timescale]  interval/points lines, as TimeScaleSpec
//   [options]    t0, tf, horizons, delta_margin, tol, q
// '#' starts a comment; emit and parse are mutually inverse on canonical text.
struct SystemDocument {
    ExprMatrix A, B, C;
    std::optional<ExprMatrix> D;
    std::optional<ExprMatrix> u;
    std::optional<ExprMatrix> x0;
    TimeScaleSpec timescale;
    AnalysisOptions options;

    static SystemDocument parse(const std::string& text);
    std::string to_text() const;
    void validate() const;

    int n() const { return A.rows(); }
    int m() const { return B.cols(); }
    int p() const { return C.rows(); }
    bool constant_coefficients() const;
    bool exact() const; // constant coefficients, every A/B/C/D literal exact

    LinearSystem to_system(const TimeScaleGrid& grid) const;
    RatMat exact_A() const { return A.exact_value(); }
    RatMat exact_B() const { return B.exact_value(); }
    RatMat exact_C() const { return C.exact_value(); }
    RatMat exact_D() const; // zero p x m when absent
    Eigen::VectorXd x0_or_zero() const;
    Trajectory input_trajectory(const TimeScaleGrid& grid) const; // requires u
};

// Rational transfer matrix in text form: optional "dims p m" line, then one
// line per entry in row-major order, "num_coeffs / den_coeffs" with
// ascending-degree comma-separated rational coefficients.
struct TransferDocument {
    RationalMatrix G;

    static TransferDocument parse(const std::string& text);
    std::string to_text() const;
};

} // namespace tsc
