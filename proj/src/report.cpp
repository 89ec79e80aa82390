#include "tendeval/report.hpp"

#include "tendeval/error.hpp"
#include "tendeval/version.hpp"

#include <fstream>
#include <sstream>

namespace tendeval {

using nlohmann::ordered_json;

EvalReport make_report(const std::string& command)
{
    EvalReport r;
    r.schema_version = kReportSchemaVersion;
    r.tool_version = kToolVersion;
    r.command = command;
    return r;
}

ordered_json matrix_to_json(const MaskedMatrix& m)
{
    ordered_json values = ordered_json::array();
    ordered_json valid = ordered_json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        ordered_json vrow = ordered_json::array();
        ordered_json mrow = ordered_json::array();
        for (std::size_t j = 0; j < m.size(); ++j) {
            if (m.valid(i, j))
                vrow.push_back(m.value(i, j));
            else
                vrow.push_back(nullptr);
            mrow.push_back(m.valid(i, j));
        }
        values.push_back(std::move(vrow));
        valid.push_back(std::move(mrow));
    }
    ordered_json j;
    j["values"] = std::move(values);
    j["valid"] = std::move(valid);
    return j;
}

MaskedMatrix matrix_from_json(const ordered_json& j)
{
    const auto& values = j.at("values");
    const auto& valid = j.at("valid");
    const std::size_t n = values.size();
    if (valid.size() != n)
        throw InputError("report matrix: values and valid have different sizes");
    MaskedMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (values[i].size() != n || valid[i].size() != n)
            throw InputError("report matrix: row " + std::to_string(i) + " is not of length " +
                             std::to_string(n));
        for (std::size_t j2 = i + 1; j2 < n; ++j2) {
            const bool a = valid[i][j2].get<bool>();
            const bool b = valid[j2][i].get<bool>();
            if (a != b)
                throw InputError("report matrix: validity mask is not symmetric");
            if (a)
                m.set(i, j2, values[i][j2].get<double>());
        }
    }
    return m;
}

ordered_json report_to_json(const EvalReport& report)
{
    ordered_json j;
    j["schema_version"] = report.schema_version;
    j["tool_version"] = report.tool_version;
    j["command"] = report.command;
    j["config"] = report.config;
    j["annotators"] = report.annotators;
    ordered_json matrices = ordered_json::object();
    for (const auto& [name, rm] : report.matrices) {
        ordered_json mj;
        mj["kind"] = rm.kind;
        const auto body = matrix_to_json(rm.matrix);
        mj["values"] = body["values"];
        mj["valid"] = body["valid"];
        matrices[name] = std::move(mj);
    }
    j["matrices"] = std::move(matrices);
    ordered_json scores = ordered_json::object();
    for (const auto& [name, value] : report.scores)
        scores[name] = value;
    j["scores"] = std::move(scores);
    j["details"] = report.details;
    j["warnings"] = report.warnings;
    return j;
}

EvalReport report_from_json(const ordered_json& j)
{
    try {
        EvalReport r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kReportSchemaVersion)
            throw InputError("unsupported report schema version " +
                             std::to_string(r.schema_version));
        r.tool_version = j.at("tool_version").get<std::string>();
        r.command = j.at("command").get<std::string>();
        r.config = j.at("config");
        r.annotators = j.at("annotators").get<std::vector<std::string>>();
        for (const auto& [name, mj] : j.at("matrices").items())
            r.matrices[name] = {mj.at("kind").get<std::string>(), matrix_from_json(mj)};
        for (const auto& [name, v] : j.at("scores").items())
            r.scores[name] = v.get<double>();
        r.details = j.at("details");
        r.warnings = j.at("warnings").get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed report: ") + e.what());
    }
}

std::string serialize_report(const EvalReport& report)
{
    return report_to_json(report).dump(2) + "\n";
}

void save_report(const std::filesystem::path& path, const EvalReport& report)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    out << serialize_report(report);
}

EvalReport load_report(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open '" + path.string() + "'");
    ordered_json j;
    try {
        j = ordered_json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(path.string() + ": invalid JSON: " + e.what());
    }
    return report_from_json(j);
}

} // namespace tendeval
