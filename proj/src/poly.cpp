#include "tscontrol/poly.hpp"
#include "tscontrol/errors.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <Eigen/Eigenvalues>

#include <algorithm>

namespace tsc {

using BigInt = boost::multiprecision::cpp_int;

Poly::Poly(std::initializer_list<Rational> coeffs) : c_(coeffs) { normalize(); }
Poly::Poly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { normalize(); }

Poly Poly::constant(const Rational& c) { return Poly{c}; }
Poly Poly::variable() { return Poly{Rational(0), Rational(1)}; }

void Poly::normalize() {
    while (!c_.empty() && c_.back() == 0)
        c_.pop_back();
}

Rational Poly::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c_.size()))
        return 0;
    return c_[static_cast<std::size_t>(k)];
}

Rational Poly::leading() const {
    if (c_.empty())
        return 0;
    return c_.back();
}

Poly Poly::operator+(const Poly& o) const {
    std::vector<Rational> r(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < c_.size())
            r[i] += c_[i];
        if (i < o.c_.size())
            r[i] += o.c_[i];
    }
    return Poly(std::move(r));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    if (c_.empty() || o.c_.empty())
        return Poly();
    std::vector<Rational> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0)
            continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j)
            r[i + j] += c_[i] * o.c_[j];
    }
    return Poly(std::move(r));
}

Poly Poly::operator*(const Rational& s) const {
    std::vector<Rational> r = c_;
    for (auto& v : r)
        v *= s;
    return Poly(std::move(r));
}

Poly Poly::operator-() const { return *this * Rational(-1); }

std::pair<Poly, Poly> Poly::divmod(const Poly& d) const {
    if (d.is_zero())
        throw InputError("polynomial division by zero");
    std::vector<Rational> rem = c_;
    int dd = d.degree();
    if (degree() < dd)
        return {Poly(), *this};
    std::vector<Rational> quot(static_cast<std::size_t>(degree() - dd) + 1);
    for (int k = degree() - dd; k >= 0; --k) {
        Rational q = rem[static_cast<std::size_t>(k + dd)] / d.c_.back();
        quot[static_cast<std::size_t>(k)] = q;
        if (q == 0)
            continue;
        for (int j = 0; j <= dd; ++j)
            rem[static_cast<std::size_t>(k + j)] -= q * d.c_[static_cast<std::size_t>(j)];
    }
    return {Poly(std::move(quot)), Poly(std::move(rem))};
}

Poly Poly::derivative() const {
    if (c_.size() <= 1)
        return Poly();
    std::vector<Rational> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
        r[i - 1] = c_[i] * Rational(static_cast<long>(i));
    return Poly(std::move(r));
}

Poly Poly::monic() const {
    if (is_zero())
        return Poly();
    return *this * (Rational(1) / c_.back());
}

Rational Poly::eval(const Rational& z) const {
    Rational acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * z + *it;
    return acc;
}

std::complex<double> Poly::eval(const std::complex<double>& z) const {
    std::complex<double> acc = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it)
        acc = acc * z + static_cast<double>(*it);
    return acc;
}

std::string Poly::to_string(const std::string& var) const {
    if (is_zero())
        return "0";
    std::string out;
    for (int k = degree(); k >= 0; --k) {
        Rational c = coeff(k);
        if (c == 0)
            continue;
        if (!out.empty())
            out += c > 0 ? " + " : " - ";
        else if (c < 0)
            out += "-";
        Rational a = boost::multiprecision::abs(c);
        bool unit = a == 1;
        if (!unit || k == 0)
            out += tsc::to_string(a);
        if (k > 0) {
            if (!unit)
                out += "*";
            out += var;
            if (k > 1)
                out += "^" + std::to_string(k);
        }
    }
    return out;
}

Poly gcd(const Poly& a, const Poly& b) {
    Poly x = a, y = b;
    while (!y.is_zero()) {
        Poly r = x.divmod(y).second;
        x = std::move(y);
        y = std::move(r);
    }
    if (x.is_zero())
        return Poly();
    return x.monic();
}

Poly lcm(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero())
        return Poly();
    Poly g = gcd(a, b);
    return (a * b).divmod(g).first.monic();
}

namespace {

// prime factorization by trial division, prob-prime cofactor allowed
bool factorize(BigInt n, std::vector<std::pair<BigInt, int>>& out) {
    if (n < 0)
        n = -n;
    if (n <= 1)
        return true;
    for (BigInt p = 2; p * p <= n && p <= 1000000; p += (p == 2 ? 1 : 2)) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e)
            out.emplace_back(p, e);
    }
    if (n > 1) {
        if (!boost::multiprecision::miller_rabin_test(n, 32))
            return false; // composite cofactor with large factors: give up
        out.emplace_back(n, 1);
    }
    return true;
}

bool divisors_of(const BigInt& n, std::vector<BigInt>& out, std::size_t cap) {
    std::vector<std::pair<BigInt, int>> fac;
    if (!factorize(n, fac))
        return false;
    out = {BigInt(1)};
    for (auto& [p, e] : fac) {
        std::size_t base = out.size();
        BigInt pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) {
                out.push_back(out[i] * pk);
                if (out.size() > cap)
                    return false;
            }
        }
    }
    return true;
}

} // namespace

RationalRoots rational_roots(const Poly& p) {
    if (p.is_zero())
        throw InputError("root search on the zero polynomial");
    RationalRoots res;
    Poly q = p;

    // roots at zero
    int zero_mult = 0;
    while (!q.is_zero() && q.coeff(0) == 0) {
        q = q.divmod(Poly::variable()).first;
        ++zero_mult;
    }
    if (zero_mult)
        res.roots.emplace_back(Rational(0), zero_mult);
    if (q.degree() < 1)
        return res;

    // primitive integer form
    BigInt den_lcm = 1;
    for (const Rational& c : q.coeffs())
        den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
    std::vector<BigInt> ic;
    BigInt content = 0;
    for (const Rational& c : q.coeffs()) {
        Rational s = c * Rational(den_lcm);
        BigInt v = boost::multiprecision::numerator(s);
        ic.push_back(v);
        content = boost::multiprecision::gcd(content, v);
    }
    if (content > 1)
        for (auto& v : ic)
            v /= content;

    std::vector<BigInt> ps, qs;
    bool ok = divisors_of(ic.front(), ps, 4096) && divisors_of(ic.back(), qs, 4096);
    if (!ok) {
        res.complete = false;
        return res;
    }

    std::size_t tried = 0;
    for (const BigInt& pn : ps)
        for (const BigInt& qd : qs) {
            if (q.degree() < 1)
                return res;
            if (++tried > 20000) {
                res.complete = false;
                return res;
            }
            if (boost::multiprecision::gcd(pn, qd) != 1)
                continue;
            for (int sign : {1, -1}) {
                Rational cand(sign * pn, qd);
                if (q.eval(cand) != 0)
                    continue;
                Poly lin{-cand, Rational(1)};
                int mult = 0;
                while (true) {
                    auto [quo, rem] = q.divmod(lin);
                    if (!rem.is_zero())
                        break;
                    q = quo;
                    ++mult;
                }
                if (mult)
                    res.roots.emplace_back(cand, mult);
            }
        }
    return res;
}

std::vector<std::complex<double>> numeric_roots(const Poly& p) {
    Poly m = p.monic();
    int n = m.degree();
    if (n < 1)
        return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i)
        comp(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i)
        comp(i, n - 1) = -static_cast<double>(m.coeff(i));
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return roots;
}

RationalFn::RationalFn(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero())
        throw InputError("rational function with zero denominator");
    reduce();
}

RationalFn RationalFn::constant(const Rational& c) {
    return RationalFn(Poly::constant(c), Poly::constant(1));
}

void RationalFn::reduce() {
    if (num_.is_zero()) {
        den_ = Poly::constant(1);
        return;
    }
    Poly g = gcd(num_, den_);
    if (g.degree() > 0) {
        num_ = num_.divmod(g).first;
        den_ = den_.divmod(g).first;
    }
    Rational lead = den_.leading();
    den_ = den_ * (Rational(1) / lead);
    num_ = num_ * (Rational(1) / lead);
}

bool RationalFn::is_strictly_proper() const {
    return num_.degree() < den_.degree();
}

RationalFn RationalFn::operator+(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator-(const RationalFn& o) const {
    return RationalFn(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFn RationalFn::operator*(const RationalFn& o) const {
    return RationalFn(num_ * o.num_, den_ * o.den_);
}

bool RationalFn::operator==(const RationalFn& o) const {
    return num_ == o.num_ && den_ == o.den_;
}

std::complex<double> RationalFn::eval(const std::complex<double>& z) const {
    return num_.eval(z) / den_.eval(z);
}

RationalMatrix::RationalMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), e_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0)
        throw InputError("negative matrix dimension");
}

RationalFn& RationalMatrix::operator()(int i, int j) {
    return e_[static_cast<std::size_t>(i) * cols_ + j];
}
const RationalFn& RationalMatrix::operator()(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * cols_ + j];
}

bool RationalMatrix::operator==(const RationalMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_;
}

bool RationalMatrix::is_strictly_proper() const {
    return std::all_of(e_.begin(), e_.end(),
                       [](const RationalFn& f) { return f.is_zero() || f.is_strictly_proper(); });
}

} // namespace tsc
