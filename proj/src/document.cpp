#include "tscontrol/document.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "tscontrol/dynamics.hpp"
#include "tscontrol/errors.hpp"

namespace tsc {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double dense_scalar_exp(const TimeScaleGrid& grid, double rate, double t) {
    const auto& pts = grid.points();
    double tol = 1e-12 * std::max(1.0, std::abs(t));
    if (t < pts.front().t - tol || t > pts.back().t + tol)
        throw InputError("tse evaluated outside the time scale window");
    if (grid.contains(t))
        return scalar_exp(grid, rate, grid.point(grid.index_of(t)).t, grid.t_min()).real();
    auto it = std::upper_bound(pts.begin(), pts.end(), t,
                               [](double v, const GridPoint& p) { return v < p.t; });
    std::size_t i = static_cast<std::size_t>(it - pts.begin()) - 1;
    if (pts[i].step != StepKind::Dense)
        throw InputError("tse evaluated inside a gap of the time scale");
    std::complex<double> base = scalar_exp(grid, rate, pts[i].t, grid.t_min());
    return (base * std::exp(rate * (t - pts[i].t))).real();
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
    std::size_t h = line.find('#');
    return h == std::string::npos ? line : line.substr(0, h);
}

struct Cursor {
    const std::string& s;
    std::size_t i = 0;
    std::string where; // for diagnostics

    void skip_ws() {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
            ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw InputError(where + ": " + msg + " in '" + s + "'");
    }
};

struct NumberLit {
    Rational value;
    bool exact = true;
};

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// integer | p/q | decimal (optional exponent); records the lexical class
NumberLit scan_number(Cursor& cur) {
    cur.skip_ws();
    std::size_t start = cur.i;
    const std::string& s = cur.s;
    std::size_t i = cur.i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-'))
        ++i;
    std::size_t digits0 = i;
    while (i < s.size() && is_digit(s[i]))
        ++i;
    bool exact = true;
    if (i < s.size() && s[i] == '.') {
        exact = false;
        ++i;
        while (i < s.size() && is_digit(s[i]))
            ++i;
    } else if (i > digits0 && i < s.size() && s[i] == '/' && i + 1 < s.size() &&
               is_digit(s[i + 1])) {
        ++i;
        while (i < s.size() && is_digit(s[i]))
            ++i;
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-'))
            ++j;
        if (j < s.size() && is_digit(s[j])) {
            exact = false;
            i = j;
            while (i < s.size() && is_digit(s[i]))
                ++i;
        }
    }
    std::string text = s.substr(start, i - start);
    std::string body = text;
    if (!body.empty() && (body[0] == '+' || body[0] == '-'))
        body = body.substr(1);
    if (body.empty() || body[0] == '.' || body[0] == '/')
        cur.fail("expected a number");
    cur.i = i;
    NumberLit lit;
    lit.exact = exact;
    lit.value = parse_rational(text);
    return lit;
}

std::string ident(Cursor& cur) {
    cur.skip_ws();
    std::size_t i = cur.i;
    while (i < cur.s.size() && cur.s[i] >= 'a' && cur.s[i] <= 'z')
        ++i;
    std::string name = cur.s.substr(cur.i, i - cur.i);
    cur.i = i;
    return name;
}

// t | t^k | sin(w*t) | cos(w*t) | tse(r); fills everything but the coefficient
void scan_atom(Cursor& cur, ExprTerm& term) {
    std::string name = ident(cur);
    if (name == "t") {
        term.kind = ExprTerm::Kind::Power;
        term.power = 1;
        if (cur.eat('^')) {
            cur.skip_ws();
            std::size_t i = cur.i;
            while (i < cur.s.size() && is_digit(cur.s[i]))
                ++i;
            if (i == cur.i)
                cur.fail("expected an exponent after '^'");
            term.power = std::atoi(cur.s.substr(cur.i, i - cur.i).c_str());
            cur.i = i;
            if (term.power < 1)
                cur.fail("exponent must be at least 1");
        }
        return;
    }
    if (name == "sin" || name == "cos" || name == "tse") {
        term.kind = name == "sin"   ? ExprTerm::Kind::Sin
                    : name == "cos" ? ExprTerm::Kind::Cos
                                    : ExprTerm::Kind::Tse;
        if (!cur.eat('('))
            cur.fail("expected '(' after '" + name + "'");
        if (term.kind == ExprTerm::Kind::Tse) {
            NumberLit r = scan_number(cur);
            term.arg = r.value;
            term.arg_exact = r.exact;
        } else if (cur.peek() == 't') {
            cur.eat('t');
            term.arg = 1;
            term.arg_exact = true;
        } else {
            NumberLit w = scan_number(cur);
            term.arg = w.value;
            term.arg_exact = w.exact;
            if (!cur.eat('*') || !cur.eat('t'))
                cur.fail("expected '*t' inside '" + name + "(...)'");
        }
        if (!cur.eat(')'))
            cur.fail("expected ')'");
        return;
    }
    cur.fail("unknown function or variable '" + name + "'");
}

ExprTerm scan_term(Cursor& cur, int sign) {
    ExprTerm term;
    char c = cur.peek();
    if (is_digit(c) || c == '.') {
        NumberLit lit = scan_number(cur);
        term.coeff = lit.value;
        term.coeff_exact = lit.exact;
        if (cur.eat('*'))
            scan_atom(cur, term);
    } else {
        term.coeff = 1;
        term.coeff_exact = true;
        scan_atom(cur, term);
    }
    if (sign < 0)
        term.coeff = -term.coeff;
    return term;
}

std::string coeff_text(const Rational& v, bool exact) {
    return exact ? to_string(v) : format_double(static_cast<double>(v));
}

std::string atom_text(const ExprTerm& t) {
    switch (t.kind) {
    case ExprTerm::Kind::Constant:
        return "";
    case ExprTerm::Kind::Power:
        return t.power == 1 ? "t" : "t^" + std::to_string(t.power);
    case ExprTerm::Kind::Sin:
    case ExprTerm::Kind::Cos: {
        std::string fn = t.kind == ExprTerm::Kind::Sin ? "sin" : "cos";
        if (t.arg == 1 && t.arg_exact)
            return fn + "(t)";
        return fn + "(" + coeff_text(t.arg, t.arg_exact) + "*t)";
    }
    case ExprTerm::Kind::Tse:
        return "tse(" + coeff_text(t.arg, t.arg_exact) + ")";
    }
    return "";
}

// coefficient with the sign stripped; the caller renders the sign
std::string term_text(const ExprTerm& t) {
    Rational mag = t.coeff < 0 ? Rational(-t.coeff) : t.coeff;
    std::string atom = atom_text(t);
    if (atom.empty())
        return coeff_text(mag, t.coeff_exact);
    if (mag == 1 && t.coeff_exact)
        return atom;
    return coeff_text(mag, t.coeff_exact) + "*" + atom;
}

// split at top level (paren depth 0) on a separator character
std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '(')
            ++depth;
        else if (c == ')')
            --depth;
        if (c == sep && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

EntryExpr EntryExpr::parse(const std::string& text) {
    Cursor cur{text, 0, "entry"};
    EntryExpr e;
    int sign = 1;
    if (cur.eat('-'))
        sign = -1;
    else
        cur.eat('+');
    e.terms_.push_back(scan_term(cur, sign));
    while (!cur.done()) {
        if (cur.eat('+'))
            sign = 1;
        else if (cur.eat('-'))
            sign = -1;
        else
            cur.fail("expected '+' or '-' between terms");
        e.terms_.push_back(scan_term(cur, sign));
    }
    return e;
}

EntryExpr EntryExpr::constant(const Rational& c) {
    EntryExpr e;
    ExprTerm t;
    t.coeff = c;
    e.terms_.push_back(t);
    return e;
}

bool EntryExpr::is_constant() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const ExprTerm& t) { return t.kind == ExprTerm::Kind::Constant; });
}

bool EntryExpr::exact() const {
    return std::all_of(terms_.begin(), terms_.end(),
                       [](const ExprTerm& t) { return t.coeff_exact && t.arg_exact; });
}

bool EntryExpr::uses_tse() const {
    return std::any_of(terms_.begin(), terms_.end(),
                       [](const ExprTerm& t) { return t.kind == ExprTerm::Kind::Tse; });
}

Rational EntryExpr::constant_value() const {
    if (!is_constant())
        throw InputError("entry is not constant");
    Rational acc = 0;
    for (const auto& t : terms_)
        acc += t.coeff;
    return acc;
}

double EntryExpr::value(double t, const TseFn& tse) const {
    double acc = 0;
    for (const auto& term : terms_) {
        double c = static_cast<double>(term.coeff);
        switch (term.kind) {
        case ExprTerm::Kind::Constant:
            acc += c;
            break;
        case ExprTerm::Kind::Power:
            acc += c * std::pow(t, term.power);
            break;
        case ExprTerm::Kind::Sin:
            acc += c * std::sin(static_cast<double>(term.arg) * t);
            break;
        case ExprTerm::Kind::Cos:
            acc += c * std::cos(static_cast<double>(term.arg) * t);
            break;
        case ExprTerm::Kind::Tse:
            if (!tse)
                throw InputError("tse entry evaluated without a time scale");
            acc += c * tse(static_cast<double>(term.arg), t);
            break;
        }
    }
    return acc;
}

std::string EntryExpr::to_text() const {
    if (terms_.empty())
        return "0";
    std::string out;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        bool neg = terms_[i].coeff < 0;
        if (i == 0)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        out += term_text(terms_[i]);
    }
    return out;
}

ExprMatrix::ExprMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0)
        throw InputError("matrix dimensions must be nonnegative");
    e_.resize(static_cast<std::size_t>(rows) * cols, EntryExpr::constant(0));
}

ExprMatrix ExprMatrix::parse(const std::string& text) {
    std::string s = trim(text);
    if (s.size() < 2 || s.front() != '[' || s.back() != ']')
        throw InputError("matrix must be enclosed in [ ]: '" + text + "'");
    s = s.substr(1, s.size() - 2);
    std::vector<std::vector<std::string>> cells;
    for (const std::string& row : split_top(s, ';')) {
        std::vector<std::string> cols;
        for (const std::string& cell : split_top(row, ','))
            cols.push_back(trim(cell));
        cells.push_back(std::move(cols));
    }
    ExprMatrix m(static_cast<int>(cells.size()), static_cast<int>(cells.front().size()));
    for (int i = 0; i < m.rows_; ++i) {
        if (static_cast<int>(cells[i].size()) != m.cols_)
            throw InputError("matrix rows have unequal lengths: '" + text + "'");
        for (int j = 0; j < m.cols_; ++j)
            m.at(i, j) = EntryExpr::parse(cells[i][j]);
    }
    return m;
}

ExprMatrix ExprMatrix::from_exact(const RatMat& src) {
    ExprMatrix m(src.rows(), src.cols());
    for (int i = 0; i < src.rows(); ++i)
        for (int j = 0; j < src.cols(); ++j)
            m.at(i, j) = EntryExpr::constant(src(i, j));
    return m;
}

EntryExpr& ExprMatrix::at(int i, int j) {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
        throw InputError("matrix index out of range");
    return e_[static_cast<std::size_t>(i) * cols_ + j];
}

const EntryExpr& ExprMatrix::at(int i, int j) const {
    return const_cast<ExprMatrix*>(this)->at(i, j);
}

bool ExprMatrix::is_constant() const {
    return std::all_of(e_.begin(), e_.end(), [](const EntryExpr& e) { return e.is_constant(); });
}

bool ExprMatrix::exact() const {
    return std::all_of(e_.begin(), e_.end(), [](const EntryExpr& e) { return e.exact(); });
}

bool ExprMatrix::uses_tse() const {
    return std::any_of(e_.begin(), e_.end(), [](const EntryExpr& e) { return e.uses_tse(); });
}

RatMat ExprMatrix::exact_value() const {
    if (!exact())
        throw InputError("matrix has float entries; exact value unavailable");
    RatMat m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m(i, j) = at(i, j).constant_value();
    return m;
}

Eigen::MatrixXd ExprMatrix::constant_value() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m(i, j) = static_cast<double>(at(i, j).constant_value());
    return m;
}

Eigen::MatrixXd ExprMatrix::value(double t, const TseFn& tse) const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            m(i, j) = at(i, j).value(t, tse);
    return m;
}

std::string ExprMatrix::to_text() const {
    std::string out = "[";
    for (int i = 0; i < rows_; ++i) {
        if (i)
            out += "; ";
        for (int j = 0; j < cols_; ++j) {
            if (j)
                out += ", ";
            out += at(i, j).to_text();
        }
    }
    return out + "]";
}

namespace {

double parse_double_strict(const std::string& s, const std::string& where) {
    std::string t = trim(s);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(v))
        throw InputError(where + ": expected a finite number, got '" + s + "'");
    return v;
}

int parse_int_strict(const std::string& s, const std::string& where) {
    std::string t = trim(s);
    char* end = nullptr;
    long v = std::strtol(t.c_str(), &end, 10);
    if (t.empty() || end != t.c_str() + t.size())
        throw InputError(where + ": expected an integer, got '" + s + "'");
    return static_cast<int>(v);
}

std::vector<double> parse_double_list(const std::string& s, const std::string& where) {
    std::vector<double> out;
    for (const std::string& part : split_top(s, ','))
        out.push_back(parse_double_strict(part, where));
    return out;
}

} // namespace

SystemDocument SystemDocument::parse(const std::string& text) {
    SystemDocument doc;
    enum class Section { None, System, Timescale, Options };
    Section section = Section::None;
    std::string timescale_text;
    bool saw_a = false, saw_b = false, saw_c = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(strip_comment(raw));
        if (line.empty())
            continue;
        std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos &&
            line.find(';') == std::string::npos && line.find(',') == std::string::npos &&
            (line == "[system]" || line == "[timescale]" || line == "[options]")) {
            section = line == "[system]"      ? Section::System
                      : line == "[timescale]" ? Section::Timescale
                                              : Section::Options;
            continue;
        }
        if (section == Section::None)
            throw InputError(where + ": content before the first section header");
        if (section == Section::Timescale) {
            timescale_text += line + "\n";
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InputError(where + ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw InputError(where + ": empty value for '" + key + "'");
        try {
            if (section == Section::System) {
                if (key == "A") {
                    doc.A = ExprMatrix::parse(value);
                    saw_a = true;
                } else if (key == "B") {
                    doc.B = ExprMatrix::parse(value);
                    saw_b = true;
                } else if (key == "C") {
                    doc.C = ExprMatrix::parse(value);
                    saw_c = true;
                } else if (key == "D") {
                    doc.D = ExprMatrix::parse(value);
                } else if (key == "u") {
                    doc.u = ExprMatrix::parse(value);
                } else if (key == "x0") {
                    doc.x0 = ExprMatrix::parse(value);
                } else {
                    throw InputError("unknown key '" + key + "' in [system]");
                }
            } else {
                if (key == "horizons")
                    doc.options.horizons = parse_double_list(value, where);
                else if (key == "delta_margin")
                    doc.options.delta_margin = parse_double_strict(value, where);
                else if (key == "tol")
                    doc.options.tol = parse_double_strict(value, where);
                else if (key == "q")
                    doc.options.q = parse_int_strict(value, where);
                else if (key == "t0")
                    doc.options.t0 = parse_double_strict(value, where);
                else if (key == "tf")
                    doc.options.tf = parse_double_strict(value, where);
                else
                    throw InputError("unknown key '" + key + "' in [options]");
            }
        } catch (const InputError& e) {
            std::string msg = e.what();
            if (msg.rfind(where, 0) == 0)
                throw;
            throw InputError(where + ": " + msg);
        }
    }
    if (!saw_a || !saw_b || !saw_c)
        throw InputError("[system] must define A, B and C");
    if (timescale_text.empty())
        throw InputError("missing [timescale] section");
    doc.timescale = TimeScaleSpec::parse(timescale_text);
    doc.validate();
    return doc;
}

std::string SystemDocument::to_text() const {
    std::string out = "[system]\n";
    out += "A = " + A.to_text() + "\n";
    out += "B = " + B.to_text() + "\n";
    out += "C = " + C.to_text() + "\n";
    if (D)
        out += "D = " + D->to_text() + "\n";
    if (u)
        out += "u = " + u->to_text() + "\n";
    if (x0)
        out += "x0 = " + x0->to_text() + "\n";
    out += "\n[timescale]\n" + timescale.to_text();
    std::string opts;
    if (options.t0)
        opts += "t0 = " + format_double(*options.t0) + "\n";
    if (options.tf)
        opts += "tf = " + format_double(*options.tf) + "\n";
    if (options.horizons) {
        opts += "horizons = ";
        for (std::size_t i = 0; i < options.horizons->size(); ++i)
            opts += (i ? ", " : "") + format_double((*options.horizons)[i]);
        opts += "\n";
    }
    if (options.delta_margin)
        opts += "delta_margin = " + format_double(*options.delta_margin) + "\n";
    if (options.tol)
        opts += "tol = " + format_double(*options.tol) + "\n";
    if (options.q)
        opts += "q = " + std::to_string(*options.q) + "\n";
    if (!opts.empty())
        out += "\n[options]\n" + opts;
    return out;
}

void SystemDocument::validate() const {
    if (A.rows() == 0 || A.rows() != A.cols())
        throw InputError("A must be square and nonempty");
    if (B.rows() != A.rows() || B.cols() == 0)
        throw InputError("B must have as many rows as A");
    if (C.cols() != A.cols() || C.rows() == 0)
        throw InputError("C must have as many columns as A");
    if (D && (D->rows() != C.rows() || D->cols() != B.cols()))
        throw InputError("D must be p x m");
    if (u && (u->rows() != B.cols() || u->cols() != 1))
        throw InputError("u must be an m x 1 signal");
    if (x0) {
        if (x0->rows() != A.rows() || x0->cols() != 1)
            throw InputError("x0 must be an n x 1 vector");
        if (!x0->is_constant())
            throw InputError("x0 must be constant");
    }
    timescale.validate();
    if (options.horizons) {
        if (options.horizons->empty())
            throw InputError("horizons must be a nonempty list");
        for (std::size_t i = 1; i < options.horizons->size(); ++i)
            if (!((*options.horizons)[i] > (*options.horizons)[i - 1]))
                throw InputError("horizons must be strictly increasing");
    }
    if (options.delta_margin && !(*options.delta_margin > 0))
        throw InputError("delta_margin must be positive");
    if (options.tol && !(*options.tol > 0))
        throw InputError("tol must be positive");
    if (options.q && *options.q < 1)
        throw InputError("q must be at least 1");
    if (options.t0 && options.tf && !(*options.tf > *options.t0))
        throw InputError("tf must exceed t0");
}

bool SystemDocument::constant_coefficients() const {
    return A.is_constant() && B.is_constant() && C.is_constant() && (!D || D->is_constant());
}

bool SystemDocument::exact() const {
    return constant_coefficients() && A.exact() && B.exact() && C.exact() && (!D || D->exact());
}

LinearSystem SystemDocument::to_system(const TimeScaleGrid& grid) const {
    bool needs_grid = A.uses_tse() || B.uses_tse() || C.uses_tse() || (D && D->uses_tse());
    if (constant_coefficients()) {
        Eigen::MatrixXd d;
        if (D)
            d = D->constant_value();
        return LinearSystem::constant(A.constant_value(), B.constant_value(), C.constant_value(),
                                      d);
    }
    TseFn tse;
    if (needs_grid) {
        auto gp = std::make_shared<TimeScaleGrid>(grid);
        tse = [gp](double rate, double t) { return dense_scalar_exp(*gp, rate, t); };
    }
    auto wrap = [&tse](const ExprMatrix& m) -> MatrixFn {
        return [m, tse](double t) { return m.value(t, tse); };
    };
    MatrixFn dfn;
    if (D)
        dfn = wrap(*D);
    return LinearSystem::varying(n(), m(), p(), wrap(A), wrap(B), wrap(C), dfn);
}

RatMat SystemDocument::exact_D() const {
    if (D)
        return D->exact_value();
    return RatMat::zero(p(), m());
}

Eigen::VectorXd SystemDocument::x0_or_zero() const {
    if (!x0)
        return Eigen::VectorXd::Zero(n());
    return x0->constant_value().col(0);
}

Trajectory SystemDocument::input_trajectory(const TimeScaleGrid& grid) const {
    if (!u)
        throw InputError("document has no input signal");
    TseFn tse;
    if (u->uses_tse()) {
        auto gp = std::make_shared<TimeScaleGrid>(grid);
        tse = [gp](double rate, double t) { return dense_scalar_exp(*gp, rate, t); };
    }
    ExprMatrix sig = *u;
    Trajectory traj;
    traj.role = Trajectory::Role::Input;
    for (const auto& p : grid.points()) {
        traj.times.push_back(p.t);
        traj.values.push_back(sig.value(p.t, tse).col(0));
    }
    traj.evaluator = [sig, tse](double t) -> Eigen::VectorXd { return sig.value(t, tse).col(0); };
    return traj;
}

TransferDocument TransferDocument::parse(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string raw;
    while (std::getline(in, raw)) {
        std::string line = trim(strip_comment(raw));
        if (!line.empty())
            lines.push_back(line);
    }
    if (lines.empty())
        throw InputError("empty transfer-function document");

    int rows = 1, cols = 1;
    std::size_t first = 0;
    {
        std::istringstream head(lines[0]);
        std::string tag;
        head >> tag;
        if (tag == "dims") {
            std::string r, c, extra;
            head >> r >> c;
            if (head >> extra || r.empty() || c.empty())
                throw InputError("dims line must be 'dims p m'");
            rows = parse_int_strict(r, "dims");
            cols = parse_int_strict(c, "dims");
            if (rows < 1 || cols < 1)
                throw InputError("dims must be positive");
            first = 1;
        }
    }
    if (lines.size() - first != static_cast<std::size_t>(rows) * cols)
        throw InputError("expected " + std::to_string(rows * cols) + " entry lines, got " +
                         std::to_string(lines.size() - first));

    auto parse_coeffs = [](const std::string& csv, const std::string& where) {
        std::vector<Rational> out;
        for (const std::string& part : split_top(csv, ',')) {
            std::string item = trim(part);
            if (item.empty())
                throw InputError(where + ": empty coefficient");
            out.push_back(parse_rational(item));
        }
        return out;
    };

    TransferDocument doc;
    doc.G = RationalMatrix(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const std::string& line = lines[first + static_cast<std::size_t>(i) * cols + j];
            std::string where = "entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
            std::istringstream ls(line);
            std::string numtok, slash, dentok, extra;
            ls >> numtok >> slash >> dentok;
            if (slash != "/" || dentok.empty() || (ls >> extra))
                throw InputError(where + ": expected 'num_coeffs / den_coeffs', got '" + line +
                                 "'");
            Poly num(parse_coeffs(numtok, where));
            Poly den(parse_coeffs(dentok, where));
            if (den.is_zero())
                throw InputError(where + ": zero denominator");
            doc.G(i, j) = RationalFn(num, den);
        }
    return doc;
}

std::string TransferDocument::to_text() const {
    auto csv = [](const Poly& p) {
        if (p.is_zero())
            return std::string("0");
        std::string out;
        for (std::size_t k = 0; k < p.coeffs().size(); ++k)
            out += (k ? "," : "") + to_string(p.coeffs()[k]);
        return out;
    };
    std::string out = "dims " + std::to_string(G.rows()) + " " + std::to_string(G.cols()) + "\n";
    for (int i = 0; i < G.rows(); ++i)
        for (int j = 0; j < G.cols(); ++j)
            out += csv(G(i, j).num()) + " / " + csv(G(i, j).den()) + "\n";
    return out;
}

} // namespace tsc
