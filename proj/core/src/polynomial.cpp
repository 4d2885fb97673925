#include "stackel/polynomial.hpp"

#include "stackel/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace stk {

bool GrlexLess::operator()(const ExpVec& a, const ExpVec& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    unsigned long da = std::accumulate(a.begin(), a.end(), 0UL);
    unsigned long db = std::accumulate(b.begin(), b.end(), 0UL);
    if (da != db) return da < db;
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void Polynomial::insert_term(const ExpVec& e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::constant(int nvars, const Rational& value) {
    Polynomial p(nvars);
    p.insert_term(ExpVec(static_cast<std::size_t>(nvars), 0), value);
    return p;
}

Polynomial Polynomial::variable(int nvars, int index) {
    if (index < 0 || index >= nvars) throw std::out_of_range("variable index");
    ExpVec e(static_cast<std::size_t>(nvars), 0);
    e[static_cast<std::size_t>(index)] = 1;
    return monomial(nvars, std::move(e), Rational(1));
}

Polynomial Polynomial::monomial(int nvars, ExpVec exponents, const Rational& coeff) {
    if (exponents.size() != static_cast<std::size_t>(nvars))
        throw std::invalid_argument("exponent vector length");
    Polynomial p(nvars);
    p.insert_term(exponents, coeff);
    return p;
}

Polynomial Polynomial::from_terms(int nvars, TermMap terms) {
    Polynomial p(nvars);
    for (auto it = terms.begin(); it != terms.end();) {
        if (it->first.size() != static_cast<std::size_t>(nvars))
            throw std::invalid_argument("exponent vector length");
        it = it->second == 0 ? terms.erase(it) : std::next(it);
    }
    p.terms_ = std::move(terms);
    return p;
}

bool Polynomial::is_constant() const noexcept {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const ExpVec& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t k) { return k == 0; });
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw std::logic_error("polynomial is not constant");
    return terms_.begin()->second;
}

Polynomial Polynomial::operator-() const {
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
    if (nvars_ != other.nvars_) throw std::invalid_argument("mixed variable counts");
    Polynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.insert_term(e, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
    if (nvars_ != other.nvars_) throw std::invalid_argument("mixed variable counts");
    Polynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.insert_term(e, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
    if (nvars_ != other.nvars_) throw std::invalid_argument("mixed variable counts");
    Polynomial out(nvars_);
    ExpVec e(static_cast<std::size_t>(nvars_));
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.insert_term(e, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::operator*(const Rational& scalar) const {
    if (scalar == 0) return Polynomial(nvars_);
    Polynomial out(nvars_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, c * scalar);
    return out;
}

Polynomial Polynomial::pow(unsigned exponent) const {
    Polynomial result = constant(nvars_, Rational(1));
    Polynomial base = *this;
    unsigned e = exponent;
    while (e > 0) {
        if (e & 1U) result = result * base;
        base = (e >>= 1U) ? base * base : base;
    }
    return result;
}

Polynomial Polynomial::derivative(int var) const {
    if (var < 0 || var >= nvars_) throw std::out_of_range("variable index");
    Polynomial out(nvars_);
    auto v = static_cast<std::size_t>(var);
    for (const auto& [e, c] : terms_) {
        if (e[v] == 0) continue;
        ExpVec d = e;
        d[v] -= 1;
        out.insert_term(d, c * Rational(e[v]));
    }
    return out;
}

namespace {

template <typename Scalar>
std::vector<std::vector<Scalar>> power_table(const Polynomial& p, std::span<const Scalar> point) {
    std::vector<std::uint32_t> maxdeg(point.size(), 0);
    for (const auto& [e, c] : p.terms())
        for (std::size_t i = 0; i < point.size(); ++i) maxdeg[i] = std::max(maxdeg[i], e[i]);
    std::vector<std::vector<Scalar>> pw(point.size());
    for (std::size_t i = 0; i < point.size(); ++i) {
        pw[i].resize(maxdeg[i] + 1);
        pw[i][0] = Scalar(1);
        for (std::uint32_t k = 1; k <= maxdeg[i]; ++k) pw[i][k] = pw[i][k - 1] * point[i];
    }
    return pw;
}

} // namespace

Rational Polynomial::evaluate(std::span<const Rational> point) const {
    if (point.size() != static_cast<std::size_t>(nvars_))
        throw std::invalid_argument("point dimension");
    auto pw = power_table<Rational>(*this, point);
    Rational sum(0);
    for (const auto& [e, c] : terms_) {
        Rational term = c;
        for (std::size_t i = 0; i < point.size(); ++i)
            if (e[i] > 0) term *= pw[i][e[i]];
        sum += term;
    }
    return sum;
}

double Polynomial::evaluate(std::span<const double> point) const {
    if (point.size() != static_cast<std::size_t>(nvars_))
        throw std::invalid_argument("point dimension");
    auto pw = power_table<double>(*this, point);
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = to_double(c);
        for (std::size_t i = 0; i < point.size(); ++i)
            if (e[i] > 0) term *= pw[i][e[i]];
        sum += term;
    }
    return sum;
}

std::set<int> Polynomial::support() const {
    std::set<int> vars;
    for (const auto& [e, c] : terms_)
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) vars.insert(static_cast<int>(i));
    return vars;
}

int Polynomial::degree(int var) const {
    if (terms_.empty()) return -1;
    auto v = static_cast<std::size_t>(var);
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[v]);
    return static_cast<int>(d);
}

int Polynomial::total_degree() const {
    if (terms_.empty()) return -1;
    const ExpVec& e = terms_.rbegin()->first; // graded order: last term has max degree
    return static_cast<int>(std::accumulate(e.begin(), e.end(), 0UL));
}

const std::pair<const ExpVec, Rational>& Polynomial::leading_term() const {
    if (terms_.empty()) throw std::logic_error("zero polynomial has no leading term");
    return *terms_.rbegin();
}

Rational Polynomial::content() const {
    if (terms_.empty()) return Rational(0);
    Integer num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
        num_gcd = ::gcd(num_gcd, c.get_num());
        den_lcm = ::lcm(den_lcm, c.get_den());
    }
    Rational magnitude(num_gcd, den_lcm);
    magnitude.canonicalize();
    if (leading_term().second < 0) magnitude = -magnitude;
    return magnitude;
}

Polynomial Polynomial::primitive_part() const {
    if (terms_.empty()) return *this;
    return *this * (Rational(1) / content());
}

Polynomial Polynomial::divide_exact(const Polynomial& a, const Polynomial& b) {
    if (b.is_zero()) throw std::logic_error("division by zero polynomial");
    Polynomial q(a.nvars());
    Polynomial r = a;
    const auto& [eb, cb] = b.leading_term();
    while (!r.is_zero()) {
        const auto& [er, cr] = r.leading_term();
        ExpVec d(er.size());
        for (std::size_t i = 0; i < er.size(); ++i) {
            if (er[i] < eb[i]) throw std::logic_error("polynomial division is not exact");
            d[i] = er[i] - eb[i];
        }
        Polynomial m = monomial(a.nvars(), std::move(d), cr / cb);
        q = q + m;
        r = r - m * b;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Multivariate GCD. The workhorse is the evaluation/reconstruction heuristic
// (integer gcd at a large point, digits recovered base xi, result verified by
// exact division); a primitive pseudo-remainder sequence remains as the
// deterministic fallback.
// ---------------------------------------------------------------------------

namespace {

int max_var(const Polynomial& p) {
    int v = -1;
    for (const auto& [e, c] : p.terms())
        for (std::size_t i = 0; i < e.size(); ++i)
            if (e[i] > 0) v = std::max(v, static_cast<int>(i));
    return v;
}

int deg_in(const Polynomial& p, int var) {
    return p.is_zero() ? -1 : p.degree(var);
}

// Coefficient of x_var^k, as a polynomial with exponent zero in x_var.
Polynomial coeff_of(const Polynomial& p, int var, std::uint32_t k) {
    Polynomial::TermMap terms;
    auto v = static_cast<std::size_t>(var);
    for (const auto& [ex, c] : p.terms()) {
        if (ex[v] != k) continue;
        ExpVec e = ex;
        e[v] = 0;
        terms.emplace(std::move(e), c);
    }
    return Polynomial::from_terms(p.nvars(), std::move(terms));
}

Polynomial shift(const Polynomial& p, int var, std::uint32_t k) {
    if (k == 0) return p;
    Polynomial::TermMap terms;
    auto v = static_cast<std::size_t>(var);
    for (const auto& [ex, c] : p.terms()) {
        ExpVec e = ex;
        e[v] += k;
        terms.emplace(std::move(e), c);
    }
    return Polynomial::from_terms(p.nvars(), std::move(terms));
}

// GCD of all coefficients of p viewed as univariate in x_var.
Polynomial content_wrt(const Polynomial& p, int var) {
    Polynomial g(p.nvars());
    int d = deg_in(p, var);
    for (int k = 0; k <= d; ++k) {
        Polynomial ck = coeff_of(p, var, static_cast<std::uint32_t>(k));
        if (ck.is_zero()) continue;
        g = Polynomial::gcd(g, ck);
        if (g.is_constant()) break; // cannot shrink further
    }
    return g.is_zero() ? Polynomial::constant(p.nvars(), Rational(1)) : g;
}

// Pseudo-remainder of a by b with respect to x_var (deg_var a >= deg_var b).
Polynomial prem(Polynomial r, const Polynomial& b, int var) {
    int db = deg_in(b, var);
    Polynomial lb = coeff_of(b, var, static_cast<std::uint32_t>(db));
    while (!r.is_zero()) {
        int dr = deg_in(r, var);
        if (dr < db) break;
        Polynomial lr = coeff_of(r, var, static_cast<std::uint32_t>(dr));
        r = lb * r - shift(lr, var, static_cast<std::uint32_t>(dr - db)) * b;
    }
    return r;
}

Polynomial monomial_gcd(const Polynomial& mono, const Polynomial& other) {
    ExpVec e = mono.leading_term().first;
    for (const auto& [ex, c] : other.terms())
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = std::min(e[i], ex[i]);
    return Polynomial::monomial(mono.nvars(), std::move(e), Rational(1));
}

Polynomial gcd_recursive(const Polynomial& a, const Polynomial& b) {
    if (a.is_constant() || b.is_constant())
        return Polynomial::constant(a.nvars(), Rational(1));
    if (a.term_count() == 1) return monomial_gcd(a, b);
    if (b.term_count() == 1) return monomial_gcd(b, a);

    int v = std::max(max_var(a), max_var(b));
    int da = deg_in(a, v);
    int db = deg_in(b, v);
    if (da == 0) return gcd_recursive(a, content_wrt(b, v));
    if (db == 0) return gcd_recursive(content_wrt(a, v), b);

    Polynomial cont_a = content_wrt(a, v);
    Polynomial cont_b = content_wrt(b, v);
    Polynomial c = Polynomial::gcd(cont_a, cont_b);
    Polynomial pa = Polynomial::divide_exact(a, cont_a).primitive_part();
    Polynomial pb = Polynomial::divide_exact(b, cont_b).primitive_part();

    if (deg_in(pa, v) < deg_in(pb, v)) std::swap(pa, pb);
    Polynomial g(a.nvars());
    while (true) {
        Polynomial r = prem(pa, pb, v);
        if (r.is_zero()) {
            g = pb;
            break;
        }
        if (deg_in(r, v) == 0) {
            g = Polynomial::constant(a.nvars(), Rational(1));
            break;
        }
        pa = std::move(pb);
        pb = Polynomial::divide_exact(r, content_wrt(r, v)).primitive_part();
    }
    return (c * g).primitive_part();
}

// --- evaluation/reconstruction heuristic -----------------------------------

bool divides(const Polynomial& divisor, const Polynomial& dividend) {
    try {
        (void)Polynomial::divide_exact(dividend, divisor);
        return true;
    } catch (const std::logic_error&) {
        return false;
    }
}

Integer max_abs_numerator(const Polynomial& p) {
    Integer best(0);
    for (const auto& [e, c] : p.terms()) {
        Integer a = abs(c.get_num());
        if (a > best) best = a;
    }
    return best;
}

// Substitute x_var = xi (integer-coefficient input assumed).
Polynomial eval_at_var(const Polynomial& p, int var, const Integer& xi) {
    std::vector<Integer> powers(static_cast<std::size_t>(p.degree(var)) + 1);
    powers[0] = 1;
    for (std::size_t k = 1; k < powers.size(); ++k) powers[k] = powers[k - 1] * xi;
    Polynomial::TermMap terms;
    auto v = static_cast<std::size_t>(var);
    for (const auto& [ex, c] : p.terms()) {
        ExpVec e = ex;
        std::uint32_t k = e[v];
        e[v] = 0;
        Rational scaled = c * Rational(powers[k]);
        auto [it, inserted] = terms.emplace(std::move(e), scaled);
        if (!inserted) it->second += scaled;
    }
    return Polynomial::from_terms(p.nvars(), std::move(terms));
}

// Balanced remainder of every (integer) coefficient mod xi; q gets (p - r)/xi.
void split_digit(const Polynomial& p, const Integer& xi, Polynomial& digit, Polynomial& rest) {
    Polynomial::TermMap digit_terms, rest_terms;
    Integer half = xi / 2;
    for (const auto& [e, c] : p.terms()) {
        Integer value = c.get_num(); // denominators are 1 here
        Integer r = value % xi;      // truncated toward zero
        if (r > half) r -= xi;
        if (r < -half) r += xi;
        Integer q = (value - r) / xi;
        if (r != 0) digit_terms.emplace(e, Rational(r));
        if (q != 0) rest_terms.emplace(e, Rational(q));
    }
    digit = Polynomial::from_terms(p.nvars(), std::move(digit_terms));
    rest = Polynomial::from_terms(p.nvars(), std::move(rest_terms));
}

// Content-faithful gcd attempt over Z: integer gcd at the base, xi-adic
// digit reconstruction per variable, and no normalization inside the tower
// (stripping contents here would lose the digits of eliminated variables).
// The division check makes an accepted candidate a true common divisor of
// maximal degree; persistent failure returns nullopt and the caller falls
// back to the pseudo-remainder sequence.
std::optional<Polynomial> gcd_heuristic_z(const Polynomial& a, const Polynomial& b) {
    if (a.is_constant() && b.is_constant()) {
        Integer g = ::gcd(a.constant_value().get_num(), b.constant_value().get_num());
        return Polynomial::constant(a.nvars(), Rational(g));
    }
    int v = std::max(max_var(a), max_var(b));

    Integer na = max_abs_numerator(a);
    Integer nb = max_abs_numerator(b);
    Integer xi = 2 * (na < nb ? na : nb) + 29;
    for (int attempt = 0; attempt < 6; ++attempt) {
        Polynomial ea = eval_at_var(a, v, xi);
        Polynomial eb = eval_at_var(b, v, xi);
        if (!ea.is_zero() && !eb.is_zero()) {
            std::optional<Polynomial> image = gcd_heuristic_z(ea, eb);
            if (image && !image->is_zero()) {
                // Recover the candidate digit by digit in base xi.
                Polynomial candidate(a.nvars());
                Polynomial rest = *image;
                std::uint32_t power = 0;
                bool runaway = false;
                while (!rest.is_zero()) {
                    Polynomial digit(a.nvars()), next(a.nvars());
                    split_digit(rest, xi, digit, next);
                    candidate = candidate + shift(digit, v, power);
                    rest = std::move(next);
                    if (++power > 512) {
                        runaway = true;
                        break;
                    }
                }
                if (!runaway && !candidate.is_zero() && divides(candidate, a) &&
                    divides(candidate, b))
                    return candidate;
            }
        }
        // Grow the evaluation point and try again.
        xi = xi * xi / 2 + 29;
    }
    return std::nullopt;
}

} // namespace

Polynomial Polynomial::gcd(const Polynomial& a, const Polynomial& b) {
    if (a.nvars() != b.nvars()) throw std::invalid_argument("mixed variable counts");
    if (a.is_zero() && b.is_zero()) return Polynomial(a.nvars());
    if (a.is_zero()) return b.primitive_part();
    if (b.is_zero()) return a.primitive_part();
    Polynomial pa = a.primitive_part();
    Polynomial pb = b.primitive_part();
    if (pa.is_constant() || pb.is_constant())
        return Polynomial::constant(a.nvars(), Rational(1));
    if (pa.term_count() == 1) return monomial_gcd(pa, pb);
    if (pb.term_count() == 1) return monomial_gcd(pb, pa);
    if (std::optional<Polynomial> heuristic = gcd_heuristic_z(pa, pb))
        return heuristic->primitive_part();
    return gcd_recursive(pa, pb);
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        Rational coeff = c;
        if (first) {
            if (coeff < 0) {
                out << "-";
                coeff = -coeff;
            }
        } else {
            out << (coeff < 0 ? " - " : " + ");
            if (coeff < 0) coeff = -coeff;
        }
        first = false;
        bool has_vars = std::any_of(e.begin(), e.end(), [](std::uint32_t k) { return k > 0; });
        bool printed = false;
        if (coeff != 1 || !has_vars) {
            out << stk::to_string(coeff);
            printed = true;
        }
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            if (printed) out << "*";
            out << names.at(i);
            if (e[i] > 1) out << "^" << e[i];
            printed = true;
        }
    }
    return out.str();
}

} // namespace stk
