#include "stackel/stackel.hpp"

#include "stackel/errors.hpp"
#include "stackel/parser.hpp"

#include <cmath>
#include <sstream>

namespace stk {

StackelMatrix::StackelMatrix(Chart chart_in, FieldMatrix entries_in)
    : chart(std::move(chart_in)), entries(std::move(entries_in)) {
    if (entries.size() != chart.dimension())
        throw std::invalid_argument("Stackel matrix size does not match chart dimension");
}

std::string StackelDiagnostics::summary() const {
    std::ostringstream out;
    if (valid() && first_row_zeros.empty()) return "valid";
    for (const auto& [i, j] : univariance_violations)
        out << "UNIVARIANCE_VIOLATION(" << i + 1 << "," << j + 1 << ") ";
    if (!nonsingular) out << "SINGULAR ";
    for (int j : first_row_zeros) out << "FIRST_ROW_ZERO(" << j + 1 << ") ";
    std::string text = out.str();
    if (!text.empty() && text.back() == ' ') text.pop_back();
    return text;
}

StackelDiagnostics validate_stackel(const StackelMatrix& s, int hamiltonian_row) {
    const int n = s.chart.dimension();
    if (hamiltonian_row < 0 || hamiltonian_row >= n)
        throw std::invalid_argument("hamiltonian row out of range");
    StackelDiagnostics diag;

    // Row i may only depend on coordinate i.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            std::set<int> vars = s.entries.at(i, j).variable_support();
            vars.erase(i);
            if (!vars.empty()) diag.univariance_violations.emplace_back(i, j);
        }
    }

    // Non-degeneracy of S.
    ScalarField det = s.entries.determinant();
    if (s.entries.backend() == Backend::Exact) {
        diag.nonsingular = !det.is_identically_zero();
    } else {
        std::vector<ScalarField> fields;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) fields.push_back(s.entries.at(i, j));
        SeededRng rng(kZeroSampleSeed);
        diag.nonsingular = true;
        try {
            for (int k = 0; k < 16; ++k) {
                std::vector<double> p = sample_point(fields, n, rng);
                if (std::abs(det.evaluate(p)) <= 1e-9) {
                    diag.nonsingular = false;
                    break;
                }
            }
        } catch (const PoleError&) {
            diag.nonsingular = false;
        }
    }

    // Zeros in the Hamiltonian row of S^-1 make the metric degenerate.
    if (diag.valid()) {
        FieldMatrix inv = s.entries.inverse();
        for (int j = 0; j < n; ++j) {
            const ScalarField& entry = inv.at(hamiltonian_row, j);
            if (entry.backend() == Backend::Exact) {
                if (entry.is_identically_zero()) diag.first_row_zeros.push_back(j);
            } else {
                MomentaPolynomial probe(s.chart, Backend::Numeric);
                probe.add_term(ExpVec(static_cast<std::size_t>(n), 0), entry);
                if (probe.zero_report().zero) diag.first_row_zeros.push_back(j);
            }
        }
    }
    return diag;
}

StackelSystem stackel_integrals(const StackelMatrix& s, int hamiltonian_row) {
    StackelDiagnostics diag = validate_stackel(s, hamiltonian_row);
    if (!diag.univariance_violations.empty()) {
        const auto& [i, j] = diag.univariance_violations.front();
        throw std::invalid_argument("UNIVARIANCE_VIOLATION(" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + "): entry depends on foreign variables");
    }
    if (!diag.nonsingular) throw SingularError("Stackel matrix is singular");
    if (!diag.first_row_zeros.empty())
        throw SingularError("row " + std::to_string(hamiltonian_row + 1) +
                            " of the inverse has zero entries; metric would be degenerate");

    const int n = s.chart.dimension();
    const Backend backend = s.entries.backend();
    FieldMatrix inv = s.entries.inverse();

    // Integral a is diagonal with entries (S^-1)_{a j}; the Hamiltonian row
    // is listed first.
    std::vector<int> row_order;
    row_order.push_back(hamiltonian_row);
    for (int a = 0; a < n; ++a)
        if (a != hamiltonian_row) row_order.push_back(a);

    std::vector<QuadraticIntegral> integrals;
    integrals.reserve(static_cast<std::size_t>(n));
    for (int idx = 0; idx < n; ++idx) {
        int a = row_order[static_cast<std::size_t>(idx)];
        FieldMatrix components(s.chart, backend, n);
        for (int j = 0; j < n; ++j) components.set(j, j, inv.at(a, j));
        integrals.emplace_back(s.chart, std::move(components), "I" + std::to_string(idx + 1));
    }

    Metric metric(s.chart, integrals.front().components);
    return StackelSystem{std::move(metric), std::move(integrals), s, hamiltonian_row};
}

int StackelSystem::list_index_of_row(int row) const {
    if (row == hamiltonian_row) return 0;
    return row < hamiltonian_row ? row + 1 : row;
}

std::vector<MomentaPolynomial> StackelSystem::integral_polys() const {
    std::vector<MomentaPolynomial> polys;
    polys.reserve(integrals.size());
    for (const QuadraticIntegral& k : integrals) polys.push_back(quadratic_to_poly(k));
    return polys;
}

std::vector<std::vector<ZeroReport>> involution_matrix(std::span<const MomentaPolynomial> integrals) {
    const std::size_t n = integrals.size();
    std::vector<std::vector<ZeroReport>> matrix(n, std::vector<ZeroReport>(n));
    for (std::size_t a = 0; a < n; ++a) {
        matrix[a][a] = ZeroReport{true, 0.0}; // {I,I} = 0 identically
        for (std::size_t b = a + 1; b < n; ++b) {
            ZeroReport report = poisson_bracket(integrals[a], integrals[b]).zero_report();
            matrix[a][b] = report;
            matrix[b][a] = report;
        }
    }
    return matrix;
}

namespace {

StackelMatrix matrix_from_strings(const std::vector<std::vector<const char*>>& rows,
                                  Backend backend) {
    Chart chart = Chart::standard(static_cast<int>(rows.size()));
    std::vector<ScalarField> entries;
    for (const auto& row : rows)
        for (const char* text : row) entries.push_back(parse_expression(text, chart, backend));
    return StackelMatrix(chart, FieldMatrix(chart, std::move(entries)));
}

} // namespace

StackelMatrix example_flat_matrix(Backend backend) {
    return matrix_from_strings({{"1", "-1"}, {"0", "1"}}, backend);
}

StackelMatrix example_polar_matrix(Backend backend) {
    return matrix_from_strings({{"1", "-1/x1^2"}, {"0", "1"}}, backend);
}

StackelMatrix example_liouville_matrix(Backend backend) {
    return matrix_from_strings({{"x1", "-1"}, {"x2", "-1"}}, backend);
}

StackelMatrix random_stackel_matrix(int dimension, SeededRng& rng, Backend backend) {
    Chart chart = Chart::standard(dimension);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<ScalarField> entries;
        entries.reserve(static_cast<std::size_t>(dimension) * static_cast<std::size_t>(dimension));
        for (int i = 0; i < dimension; ++i) {
            ScalarField xi = ScalarField::coordinate(chart, i, backend);
            for (int j = 0; j < dimension; ++j) {
                ScalarField entry = ScalarField::constant(chart, rng.rational(3, 2), backend);
                entry = entry + xi.scaled(rng.rational(3, 2));
                if (rng.integer(0, 2) == 0) entry = entry + xi.pow(2).scaled(rng.rational(2, 2));
                entries.push_back(entry);
            }
        }
        StackelMatrix candidate(chart, FieldMatrix(chart, std::move(entries)));
        StackelDiagnostics diag = validate_stackel(candidate);
        if (diag.valid() && diag.first_row_zeros.empty()) return candidate;
    }
    throw std::runtime_error("failed to sample a usable Stackel matrix");
}

} // namespace stk
