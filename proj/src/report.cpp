#include "taxoalign/report.hpp"
#include "taxoalign/errors.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

namespace taxoalign {

const std::vector<std::string> kReportColumns = {
    "delta", "bleu2", "rouge_l", "bertscore", "nsr", "ner", "llm_judge"};

namespace {

nlohmann::json row_json(const std::string& id, const MetricReport* r) {
    nlohmann::json j;
    j["instance_id"] = id;
    if (!r) {
        for (const auto& col : kReportColumns) j[col] = nullptr;
        return j;
    }
    j["delta"] = r->delta;
    j["bleu2"] = r->bleu2;
    j["rouge_l"] = r->rouge_l;
    j["bertscore"] = r->embed_score;
    j["nsr"] = r->nsr;
    j["ner"] = r->ner;
    j["llm_judge"] = r->judge ? nlohmann::json(*r->judge) : nlohmann::json();
    return j;
}

std::string csv_value(const nlohmann::json& v) {
    if (v.is_null()) return "";
    std::ostringstream out;
    out << std::setprecision(10) << v.get<double>();
    return out.str();
}

} // namespace

void write_report_files(const std::string& path_without_extension,
                        const std::vector<InstanceRow>& rows,
                        const MetricReport& aggregate) {
    nlohmann::json doc;
    doc["instances"] = nlohmann::json::array();
    for (const auto& row : rows)
        doc["instances"].push_back(
            row_json(row.instance_id, row.report ? &*row.report : nullptr));
    doc["aggregate"] = row_json("aggregate", &aggregate);

    std::ofstream json_out(path_without_extension + ".json");
    if (!json_out) throw Error("cannot write report: " + path_without_extension + ".json");
    json_out << doc.dump(2) << "\n";

    std::ofstream csv_out(path_without_extension + ".csv");
    if (!csv_out) throw Error("cannot write report: " + path_without_extension + ".csv");
    csv_out << "instance_id";
    for (const auto& col : kReportColumns) csv_out << "," << col;
    csv_out << "\n";
    auto emit_row = [&](const nlohmann::json& j) {
        csv_out << j.at("instance_id").get<std::string>();
        for (const auto& col : kReportColumns) csv_out << "," << csv_value(j.at(col));
        csv_out << "\n";
    };
    for (const auto& row : doc["instances"]) emit_row(row);
    emit_row(doc["aggregate"]);
}

void write_transcript_file(const std::string& path,
                           const std::vector<TranscriptEntry>& transcript) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write transcript: " + path);
    for (const auto& e : transcript) {
        nlohmann::json j;
        j["phase"] = e.phase;
        if (!e.document_id.empty()) j["document_id"] = e.document_id;
        j["request_hash"] = e.request_hash;
        j["response_hash"] = e.response_hash;
        if (!e.error.empty()) j["error"] = e.error;
        out << j.dump() << "\n";
    }
}

} // namespace taxoalign
