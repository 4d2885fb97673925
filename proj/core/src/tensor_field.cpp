#include "stackel/tensor_field.hpp"

#include "stackel/errors.hpp"
#include "stackel/sampling.hpp"

#include <cmath>
#include <unordered_map>

namespace stk {

FieldMatrix::FieldMatrix(Chart chart, Backend backend, int size)
    : chart_(std::move(chart)), backend_(backend), size_(size) {
    if (size_ <= 0) throw std::invalid_argument("matrix size");
    entries_.assign(static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_),
                    ScalarField::zero(chart_, backend_));
}

FieldMatrix::FieldMatrix(Chart chart, std::vector<ScalarField> row_major)
    : chart_(std::move(chart)), backend_(Backend::Exact) {
    std::size_t count = row_major.size();
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count))));
    if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != count || n == 0)
        throw std::invalid_argument("row-major entry count is not a square");
    size_ = n;
    backend_ = row_major.front().backend();
    for (const ScalarField& f : row_major) {
        if (f.chart() != chart_ || f.backend() != backend_)
            throw MixedOperandError("matrix entries disagree on chart/backend");
    }
    entries_ = std::move(row_major);
}

const ScalarField& FieldMatrix::at(int row, int col) const {
    return entries_.at(static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
                       static_cast<std::size_t>(col));
}

void FieldMatrix::set(int row, int col, ScalarField value) {
    if (value.chart() != chart_ || value.backend() != backend_)
        throw MixedOperandError("matrix entry chart/backend mismatch");
    entries_.at(static_cast<std::size_t>(row) * static_cast<std::size_t>(size_) +
                static_cast<std::size_t>(col)) = std::move(value);
}

bool FieldMatrix::is_symmetric() const {
    if (backend_ == Backend::Exact) {
        for (int i = 0; i < size_; ++i)
            for (int j = i + 1; j < size_; ++j)
                if (!(at(i, j) == at(j, i))) {
                    ScalarField diff = at(i, j) - at(j, i);
                    if (!diff.is_identically_zero()) return false;
                }
        return true;
    }
    // Numeric: sampled agreement at 8 pole-free points.
    SeededRng rng(kZeroSampleSeed);
    for (int i = 0; i < size_; ++i) {
        for (int j = i + 1; j < size_; ++j) {
            std::vector<ScalarField> pair = {at(i, j), at(j, i)};
            for (int k = 0; k < 8; ++k) {
                std::vector<double> p = sample_point(pair, chart_.dimension(), rng);
                double a = at(i, j).evaluate(p);
                double b = at(j, i).evaluate(p);
                if (std::abs(a - b) > 1e-9 * (1.0 + std::abs(a))) return false;
            }
        }
    }
    return true;
}

FieldMatrix FieldMatrix::operator*(const FieldMatrix& other) const {
    if (size_ != other.size_ || chart_ != other.chart_ || backend_ != other.backend_)
        throw MixedOperandError("matrix product operands mismatch");
    FieldMatrix out(chart_, backend_, size_);
    for (int i = 0; i < size_; ++i) {
        for (int j = 0; j < size_; ++j) {
            ScalarField sum = ScalarField::zero(chart_, backend_);
            for (int k = 0; k < size_; ++k) sum = sum + at(i, k) * other.at(k, j);
            out.set(i, j, sum);
        }
    }
    return out;
}

FieldMatrix FieldMatrix::operator+(const FieldMatrix& other) const {
    if (size_ != other.size_ || chart_ != other.chart_ || backend_ != other.backend_)
        throw MixedOperandError("matrix sum operands mismatch");
    FieldMatrix out(chart_, backend_, size_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) out.set(i, j, at(i, j) + other.at(i, j));
    return out;
}

FieldMatrix FieldMatrix::scaled(const Rational& factor) const {
    FieldMatrix out(chart_, backend_, size_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) out.set(i, j, at(i, j).scaled(factor));
    return out;
}

namespace {

// Determinant of the lower-right block over the columns selected by `mask`,
// expanding along row n - popcount(mask).
ScalarField det_over(const FieldMatrix& m, std::uint32_t mask,
                     std::unordered_map<std::uint32_t, ScalarField>& memo) {
    const int n = m.size();
    int k = __builtin_popcount(mask);
    int row = n - k;
    if (k == 0) return ScalarField::one(m.chart(), m.backend());
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    ScalarField sum = ScalarField::zero(m.chart(), m.backend());
    int position = 0;
    for (int col = 0; col < n; ++col) {
        if (!(mask & (1U << col))) continue;
        ScalarField term = m.at(row, col) * det_over(m, mask & ~(1U << col), memo);
        sum = (position % 2 == 0) ? sum + term : sum - term;
        ++position;
    }
    memo.emplace(mask, sum);
    return sum;
}

} // namespace

ScalarField FieldMatrix::determinant() const {
    if (size_ > 16) throw std::invalid_argument("symbolic determinant limited to n <= 16");
    std::unordered_map<std::uint32_t, ScalarField> memo;
    return det_over(*this, (1U << size_) - 1U, memo);
}

FieldMatrix FieldMatrix::inverse() const {
    ScalarField det = determinant();
    if (backend_ == Backend::Exact && det.is_identically_zero())
        throw SingularError("matrix determinant is identically zero");
    FieldMatrix adj(chart_, backend_, size_);
    if (size_ == 1) {
        adj.set(0, 0, ScalarField::one(chart_, backend_));
    } else {
        for (int i = 0; i < size_; ++i) {
            for (int j = 0; j < size_; ++j) {
                // Minor deleting row i, column j.
                FieldMatrix minor(chart_, backend_, size_ - 1);
                for (int r = 0, rr = 0; r < size_; ++r) {
                    if (r == i) continue;
                    for (int c = 0, cc = 0; c < size_; ++c) {
                        if (c == j) continue;
                        minor.set(rr, cc, at(r, c));
                        ++cc;
                    }
                    ++rr;
                }
                ScalarField cof = minor.determinant();
                if ((i + j) % 2 == 1) cof = -cof;
                adj.set(j, i, cof);
            }
        }
    }
    FieldMatrix out(chart_, backend_, size_);
    for (int i = 0; i < size_; ++i)
        for (int j = 0; j < size_; ++j) out.set(i, j, adj.at(i, j) / det);
    return out;
}

std::vector<double> FieldMatrix::evaluate(std::span<const double> point) const {
    std::vector<double> values;
    values.reserve(entries_.size());
    for (const ScalarField& f : entries_) values.push_back(f.evaluate(point));
    return values;
}

// ---------------------------------------------------------------------------

namespace {

void require_symmetric(const FieldMatrix& m, const char* what) {
    if (!m.is_symmetric())
        throw std::invalid_argument(std::string(what) + " must be symmetric in upper indices");
}

void check_not_identically_singular(const FieldMatrix& m, const char* what) {
    if (m.backend() == Backend::Exact) {
        if (m.determinant().is_identically_zero())
            throw SingularError(std::string(what) + " has identically zero determinant");
        return;
    }
    // Numeric backend: determinant must clear 1e-9 at 16 sampled points.
    ScalarField det = m.determinant();
    std::vector<ScalarField> fields;
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j) fields.push_back(m.at(i, j));
    SeededRng rng(kZeroSampleSeed);
    for (int k = 0; k < 16; ++k) {
        std::vector<double> p = sample_point(fields, m.chart().dimension(), rng);
        double d;
        try {
            d = det.evaluate(p);
        } catch (const PoleError&) {
            continue;
        }
        if (std::abs(d) <= 1e-9)
            throw SingularError(std::string(what) + " determinant vanishes at a sampled point");
    }
}

} // namespace

Metric::Metric(Chart chart, FieldMatrix inverse_components)
    : chart_(std::move(chart)), upper_(std::move(inverse_components)), lower_(upper_) {
    if (upper_.size() != chart_.dimension())
        throw std::invalid_argument("metric size does not match chart dimension");
    require_symmetric(upper_, "metric");
    check_not_identically_singular(upper_, "metric");
    lower_ = upper_.inverse();
}

MomentaPolynomial Metric::twice_hamiltonian() const {
    QuadraticIntegral k(chart_, upper_, "2H");
    return quadratic_to_poly(k);
}

QuadraticIntegral::QuadraticIntegral(Chart chart_in, FieldMatrix components_in, std::string label_in)
    : chart(std::move(chart_in)), components(std::move(components_in)), label(std::move(label_in)) {
    if (components.size() != chart.dimension())
        throw std::invalid_argument("integral size does not match chart dimension");
    require_symmetric(components, "quadratic integral");
}

CombinationSpec::CombinationSpec(std::vector<Rational> coefficients_in)
    : coefficients(std::move(coefficients_in)) {
    bool all_zero = !coefficients.empty();
    for (const Rational& c : coefficients)
        if (c != 0) all_zero = false;
    if (all_zero) throw std::invalid_argument("combination coefficients must not all be zero");
}

MomentaPolynomial quadratic_to_poly(const QuadraticIntegral& k) {
    const int n = k.components.size();
    MomentaPolynomial poly(k.chart, k.components.backend());
    ExpVec e(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            std::fill(e.begin(), e.end(), 0U);
            e[static_cast<std::size_t>(i)] += 1;
            e[static_cast<std::size_t>(j)] += 1;
            ScalarField coeff = k.components.at(i, j);
            if (i != j) coeff = coeff.scaled(Rational(2));
            poly.add_term(e, coeff);
        }
    }
    return poly;
}

MomentaPolynomial killing_residual(const Metric& g, const QuadraticIntegral& k) {
    if (g.chart() != k.chart || g.backend() != k.components.backend())
        throw MixedOperandError("metric and integral chart/backend mismatch");
    return poisson_bracket(g.twice_hamiltonian(), quadratic_to_poly(k));
}

FieldMatrix one_one(const QuadraticIntegral& k, const Metric& g) {
    if (g.chart() != k.chart || g.backend() != k.components.backend())
        throw MixedOperandError("metric and integral chart/backend mismatch");
    return k.components * g.lowered();
}

QuadraticIntegral generic_combination(std::span<const QuadraticIntegral> ks,
                                      const CombinationSpec& lambda) {
    if (ks.size() != lambda.coefficients.size())
        throw std::invalid_argument("combination length mismatch");
    if (ks.empty()) throw std::invalid_argument("empty combination");
    FieldMatrix sum = ks[0].components.scaled(lambda.coefficients[0]);
    for (std::size_t a = 1; a < ks.size(); ++a)
        sum = sum + ks[a].components.scaled(lambda.coefficients[a]);
    return QuadraticIntegral(ks[0].chart, std::move(sum), "combination");
}

} // namespace stk
