#include "stackel/phase_poly.hpp"

#include "stackel/errors.hpp"
#include "stackel/sampling.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace stk {

MomentaPolynomial::MomentaPolynomial(Chart chart, Backend backend)
    : chart_(std::move(chart)), backend_(backend) {}

MomentaPolynomial MomentaPolynomial::momentum(const Chart& chart, int index, Backend backend) {
    if (index < 0 || index >= chart.dimension()) throw std::out_of_range("momentum index");
    MomentaPolynomial p(chart, backend);
    ExpVec e(static_cast<std::size_t>(chart.dimension()), 0);
    e[static_cast<std::size_t>(index)] = 1;
    p.add_term(e, ScalarField::one(chart, backend));
    return p;
}

void MomentaPolynomial::add_term(const ExpVec& exponents, const ScalarField& coeff) {
    if (exponents.size() != static_cast<std::size_t>(chart_.dimension()))
        throw std::invalid_argument("momentum multi-index length");
    if (coeff.chart() != chart_ || coeff.backend() != backend_)
        throw MixedOperandError("coefficient chart/backend mismatch");
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        if (!coeff.is_identically_zero()) terms_.emplace(exponents, coeff);
        return;
    }
    ScalarField sum = it->second + coeff;
    if (sum.is_identically_zero())
        terms_.erase(it);
    else
        it->second = sum;
}

ScalarField MomentaPolynomial::coefficient(const ExpVec& exponents) const {
    auto it = terms_.find(exponents);
    if (it == terms_.end()) return ScalarField::zero(chart_, backend_);
    return it->second;
}

MomentaPolynomial MomentaPolynomial::operator-() const {
    MomentaPolynomial out(chart_, backend_);
    for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
    return out;
}

MomentaPolynomial MomentaPolynomial::operator+(const MomentaPolynomial& other) const {
    if (chart_ != other.chart_ || backend_ != other.backend_)
        throw MixedOperandError("momenta polynomial chart/backend mismatch");
    MomentaPolynomial out = *this;
    for (const auto& [e, c] : other.terms_) out.add_term(e, c);
    return out;
}

MomentaPolynomial MomentaPolynomial::operator-(const MomentaPolynomial& other) const {
    return *this + (-other);
}

MomentaPolynomial MomentaPolynomial::operator*(const MomentaPolynomial& other) const {
    if (chart_ != other.chart_ || backend_ != other.backend_)
        throw MixedOperandError("momenta polynomial chart/backend mismatch");
    MomentaPolynomial out(chart_, backend_);
    ExpVec e(static_cast<std::size_t>(chart_.dimension()));
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            out.add_term(e, ca * cb);
        }
    }
    return out;
}

MomentaPolynomial MomentaPolynomial::scaled(const ScalarField& factor) const {
    MomentaPolynomial out(chart_, backend_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * factor);
    return out;
}

MomentaPolynomial MomentaPolynomial::scaled(const Rational& factor) const {
    MomentaPolynomial out(chart_, backend_);
    for (const auto& [e, c] : terms_) out.add_term(e, c.scaled(factor));
    return out;
}

MomentaPolynomial MomentaPolynomial::partial_position(int var) const {
    MomentaPolynomial out(chart_, backend_);
    for (const auto& [e, c] : terms_) out.add_term(e, c.partial(var));
    return out;
}

MomentaPolynomial MomentaPolynomial::partial_momentum(int var) const {
    if (var < 0 || var >= chart_.dimension()) throw std::out_of_range("momentum index");
    auto v = static_cast<std::size_t>(var);
    MomentaPolynomial out(chart_, backend_);
    for (const auto& [e, c] : terms_) {
        if (e[v] == 0) continue;
        ExpVec d = e;
        d[v] -= 1;
        out.add_term(d, c.scaled(Rational(e[v])));
    }
    return out;
}

double MomentaPolynomial::evaluate(const PhaseState& state) const {
    if (state.position.size() != static_cast<std::size_t>(chart_.dimension()) ||
        state.momentum.size() != static_cast<std::size_t>(chart_.dimension()))
        throw std::invalid_argument("phase state dimension");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        double term = c.evaluate(state.position);
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k) term *= state.momentum[i];
        sum += term;
    }
    return sum;
}

int MomentaPolynomial::momentum_degree() const {
    if (terms_.empty()) return -1;
    const ExpVec& e = terms_.rbegin()->first;
    return static_cast<int>(std::accumulate(e.begin(), e.end(), 0UL));
}

std::optional<int> MomentaPolynomial::homogeneous_degree() const {
    std::optional<int> degree;
    for (const auto& [e, c] : terms_) {
        int d = static_cast<int>(std::accumulate(e.begin(), e.end(), 0UL));
        if (!degree)
            degree = d;
        else if (*degree != d)
            return std::nullopt;
    }
    return degree;
}

ZeroReport MomentaPolynomial::zero_report(std::uint64_t seed) const {
    ZeroReport report;
    bool exact = backend_ == Backend::Exact;
    if (exact) {
        report.zero = true;
        for (const auto& [e, c] : terms_)
            if (!c.rational().is_zero()) report.zero = false;
        if (report.zero) {
            report.residual = 0.0;
            return report;
        }
    }
    // Sampled residual: max |coefficient| over 32 pole-free points.
    std::vector<ScalarField> fields;
    fields.reserve(terms_.size());
    for (const auto& [e, c] : terms_) fields.push_back(c);
    if (fields.empty()) {
        report.zero = true;
        report.residual = 0.0;
        return report;
    }
    SeededRng rng(seed);
    double residual = 0.0;
    for (int k = 0; k < 32; ++k) {
        std::vector<double> point = sample_point(fields, chart_.dimension(), rng);
        for (const ScalarField& f : fields)
            residual = std::max(residual, std::abs(f.evaluate(point)));
    }
    report.residual = residual;
    if (!exact) report.zero = residual < kNumericZeroTol;
    return report;
}

std::string MomentaPolynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        if (!first) out << " + ";
        first = false;
        out << "(" << c.to_string() << ")";
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            out << "*p" << (i + 1);
            if (e[i] > 1) out << "^" << e[i];
        }
    }
    return out.str();
}

MomentaPolynomial poisson_bracket(const MomentaPolynomial& f, const MomentaPolynomial& g) {
    if (f.chart() != g.chart() || f.backend() != g.backend())
        throw MixedOperandError("poisson bracket operands mismatch");
    MomentaPolynomial out(f.chart(), f.backend());
    const int n = f.chart().dimension();
    for (int i = 0; i < n; ++i) {
        out = out + f.partial_momentum(i) * g.partial_position(i);
        out = out - f.partial_position(i) * g.partial_momentum(i);
    }
    return out;
}

} // namespace stk
