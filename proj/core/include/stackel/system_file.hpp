#pragma once

#include "stackel/stackel.hpp"
#include "stackel/tensor_field.hpp"

#include <optional>
#include <string>
#include <vector>

namespace stk {

/// Parsed form of a system description file: expression strings in the
/// input grammar, upper-triangle storage (row major) for symmetric
/// matrices. The Hamiltonian's own integral is implicit in the metric, so
/// `integrals` holds the remaining n-1 entries.
struct SystemDescription {
    std::vector<std::string> chart_names;
    Backend backend = Backend::Exact;
    std::vector<std::string> metric_upper; // empty when the file only carries S

    struct IntegralEntry {
        std::string label;
        std::vector<std::string> upper;
    };
    std::vector<IntegralEntry> integrals;

    std::vector<std::vector<std::string>> stackel_rows; // empty when absent

    bool has_metric() const { return !metric_upper.empty(); }
    bool has_stackel() const { return !stackel_rows.empty(); }
    int dimension() const { return static_cast<int>(chart_names.size()); }
};

/// Throws SchemaError on malformed JSON or schema violations.
SystemDescription parse_system_description(const std::string& json_text);
SystemDescription load_system_description(const std::string& path);

std::string system_description_to_json(const SystemDescription& description);

/// Domain objects built from a description: metric plus the full integral
/// list (the metric's quadratic form first).
struct BuiltSystem {
    Metric metric;
    std::vector<QuadraticIntegral> integrals;
    std::optional<StackelMatrix> stackel;
};

BuiltSystem build_system(const SystemDescription& description);

/// Stackel matrix alone (for generation); requires has_stackel().
StackelMatrix build_stackel_matrix(const SystemDescription& description);

/// Description of a generated system, serializable back to JSON.
SystemDescription describe_system(const StackelSystem& system);

} // namespace stk
