#include "stackel/report.hpp"

#include <json.hpp>

#include <cinttypes>
#include <cstdio>

namespace stk {

void Report::add(std::string name, bool pass, double residual, std::string details) {
    checks.push_back({std::move(name), pass, residual, std::move(details)});
}

bool Report::all_pass() const {
    for (const CheckResult& check : checks)
        if (!check.pass) return false;
    return true;
}

namespace {

std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

} // namespace

std::string Report::to_json() const {
    nlohmann::ordered_json doc;
    doc["command"] = command;
    doc["input_digest"] = input_digest;
    doc["seed"] = seed;
    doc["tol"] = format_double(tol);
    doc["samples"] = samples;
    nlohmann::ordered_json list = nlohmann::ordered_json::array();
    for (const CheckResult& check : checks) {
        nlohmann::ordered_json item;
        item["name"] = check.name;
        item["pass"] = check.pass;
        item["residual"] = format_double(check.residual);
        if (!check.details.empty()) item["details"] = check.details;
        list.push_back(item);
    }
    doc["checks"] = list;
    doc["all_pass"] = all_pass();
    return doc.dump(2) + "\n";
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        hash ^= static_cast<std::uint64_t>(c);
        hash *= 0x100000001b3ULL;
    }
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%016" PRIx64, hash);
    return buffer;
}

} // namespace stk
