#include "stackel/system_file.hpp"

#include "stackel/errors.hpp"
#include "stackel/parser.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace stk {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void schema_fail(const std::string& message) { throw SchemaError(message); }

std::vector<std::string> string_array(const ordered_json& node, const std::string& what) {
    if (!node.is_array() || node.empty()) schema_fail(what + " must be a non-empty array");
    std::vector<std::string> out;
    for (const auto& item : node) {
        if (!item.is_string()) schema_fail(what + " entries must be strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::size_t upper_count(int n) {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1) / 2;
}

} // namespace

SystemDescription parse_system_description(const std::string& json_text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const ordered_json::parse_error& e) {
        schema_fail(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) schema_fail("top-level value must be an object");

    SystemDescription description;
    if (!doc.contains("chart")) schema_fail("missing \"chart\"");
    description.chart_names = string_array(doc["chart"], "chart");
    for (std::size_t i = 0; i < description.chart_names.size(); ++i)
        for (std::size_t j = i + 1; j < description.chart_names.size(); ++j)
            if (description.chart_names[i] == description.chart_names[j])
                schema_fail("duplicate chart coordinate name");
    const int n = description.dimension();

    if (doc.contains("backend")) {
        if (!doc["backend"].is_string()) schema_fail("backend must be a string");
        std::string tag = doc["backend"].get<std::string>();
        if (tag == "exact")
            description.backend = Backend::Exact;
        else if (tag == "numeric")
            description.backend = Backend::Numeric;
        else
            schema_fail("backend must be \"exact\" or \"numeric\"");
    }

    if (doc.contains("metric")) {
        const auto& metric = doc["metric"];
        if (!metric.is_object() || !metric.contains("upper"))
            schema_fail("metric must be an object with an \"upper\" array");
        description.metric_upper = string_array(metric["upper"], "metric.upper");
        if (description.metric_upper.size() != upper_count(n))
            schema_fail("metric.upper must list the n(n+1)/2 upper-triangle entries row-major");
    }

    if (doc.contains("integrals")) {
        if (!doc["integrals"].is_array()) schema_fail("integrals must be an array");
        int index = 2;
        for (const auto& item : doc["integrals"]) {
            if (!item.is_object() || !item.contains("upper"))
                schema_fail("each integral needs an \"upper\" array");
            SystemDescription::IntegralEntry entry;
            entry.label = item.contains("label") && item["label"].is_string()
                              ? item["label"].get<std::string>()
                              : "I" + std::to_string(index);
            entry.upper = string_array(item["upper"], "integral upper");
            if (entry.upper.size() != upper_count(n))
                schema_fail("integral upper-triangle entry count mismatch");
            description.integrals.push_back(std::move(entry));
            ++index;
        }
    }

    if (doc.contains("stackel")) {
        const auto& rows = doc["stackel"];
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n))
            schema_fail("stackel must be an n x n array of expression strings");
        for (const auto& row : rows) {
            auto parsed = string_array(row, "stackel row");
            if (parsed.size() != static_cast<std::size_t>(n))
                schema_fail("stackel row length mismatch");
            description.stackel_rows.push_back(std::move(parsed));
        }
    }

    if (!description.has_metric() && !description.has_stackel())
        schema_fail("file must provide a metric or a stackel matrix");
    return description;
}

SystemDescription load_system_description(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError("cannot open file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_system_description(text.str());
}

std::string system_description_to_json(const SystemDescription& description) {
    ordered_json doc;
    doc["chart"] = description.chart_names;
    doc["backend"] = description.backend == Backend::Exact ? "exact" : "numeric";
    if (description.has_metric()) doc["metric"] = {{"upper", description.metric_upper}};
    if (!description.integrals.empty()) {
        ordered_json list = ordered_json::array();
        for (const auto& entry : description.integrals)
            list.push_back({{"label", entry.label}, {"upper", entry.upper}});
        doc["integrals"] = list;
    }
    if (description.has_stackel()) doc["stackel"] = description.stackel_rows;
    return doc.dump(2) + "\n";
}

namespace {

FieldMatrix matrix_from_upper(const Chart& chart, Backend backend,
                              const std::vector<std::string>& upper, const std::string& what) {
    const int n = chart.dimension();
    FieldMatrix m(chart, backend, n);
    std::size_t index = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            ScalarField f = [&] {
                try {
                    return parse_expression(upper[index], chart, backend);
                } catch (const ParseError& e) {
                    throw SchemaError(what + " entry \"" + upper[index] + "\": " + e.what());
                }
            }();
            m.set(i, j, f);
            if (i != j) m.set(j, i, f);
            ++index;
        }
    }
    return m;
}

} // namespace

BuiltSystem build_system(const SystemDescription& description) {
    if (!description.has_metric()) throw SchemaError("file has no metric");
    Chart chart(description.chart_names);
    Backend backend = description.backend;

    FieldMatrix g = matrix_from_upper(chart, backend, description.metric_upper, "metric");
    Metric metric(chart, g);

    std::vector<QuadraticIntegral> integrals;
    integrals.emplace_back(chart, metric.inverse_components(), "I1");
    for (const auto& entry : description.integrals) {
        FieldMatrix k = matrix_from_upper(chart, backend, entry.upper, entry.label);
        integrals.emplace_back(chart, std::move(k), entry.label);
    }

    std::optional<StackelMatrix> stackel;
    if (description.has_stackel()) {
        SystemDescription only = description;
        stackel = build_stackel_matrix(only);
    }
    return BuiltSystem{std::move(metric), std::move(integrals), std::move(stackel)};
}

StackelMatrix build_stackel_matrix(const SystemDescription& description) {
    if (!description.has_stackel()) throw SchemaError("file has no stackel matrix");
    Chart chart(description.chart_names);
    const int n = chart.dimension();
    std::vector<ScalarField> entries;
    entries.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::string& text =
                description.stackel_rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            try {
                entries.push_back(parse_expression(text, chart, description.backend));
            } catch (const ParseError& e) {
                throw SchemaError("stackel entry \"" + text + "\": " + e.what());
            }
        }
    }
    return StackelMatrix(chart, FieldMatrix(chart, std::move(entries)));
}

SystemDescription describe_system(const StackelSystem& system) {
    SystemDescription description;
    const Chart& chart = system.metric.chart();
    const int n = chart.dimension();
    description.chart_names = chart.names();
    description.backend = system.metric.backend();

    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            description.metric_upper.push_back(system.metric.inverse_components().at(i, j).to_string());

    for (std::size_t a = 1; a < system.integrals.size(); ++a) {
        SystemDescription::IntegralEntry entry;
        entry.label = system.integrals[a].label;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                entry.upper.push_back(system.integrals[a].components.at(i, j).to_string());
        description.integrals.push_back(std::move(entry));
    }

    for (int i = 0; i < n; ++i) {
        std::vector<std::string> row;
        for (int j = 0; j < n; ++j) row.push_back(system.source.entries.at(i, j).to_string());
        description.stackel_rows.push_back(std::move(row));
    }
    return description;
}

} // namespace stk
