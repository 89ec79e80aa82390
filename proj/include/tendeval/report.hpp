#pragma once

#include "tendeval/stats.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace tendeval {

struct ReportMatrix {
    std::string kind;
    MaskedMatrix matrix;

    bool operator==(const ReportMatrix&) const = default;
};

/// Versioned evaluation report. Every scalar in `scores` is derived from the
/// matrices and details stored alongside it.
struct EvalReport {
    int schema_version = 0;
    std::string tool_version;
    std::string command;
    nlohmann::ordered_json config = nlohmann::ordered_json::object();
    std::vector<std::string> annotators;
    std::map<std::string, ReportMatrix> matrices;
    std::map<std::string, double> scores;
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    std::vector<std::string> warnings;

    bool operator==(const EvalReport&) const = default;
};

EvalReport make_report(const std::string& command);

nlohmann::ordered_json matrix_to_json(const MaskedMatrix& m);
MaskedMatrix matrix_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::ordered_json& j);

/// Serialized form is `report_to_json(report).dump(2)` plus a newline.
std::string serialize_report(const EvalReport& report);
void save_report(const std::filesystem::path& path, const EvalReport& report);
EvalReport load_report(const std::filesystem::path& path);

} // namespace tendeval
