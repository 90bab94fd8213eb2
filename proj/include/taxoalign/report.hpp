#pragma once

#include "taxoalign/metrics.hpp"
#include "taxoalign/pipeline.hpp"

#include <optional>
#include <string>
#include <vector>

namespace taxoalign {

struct InstanceRow {
    std::string instance_id;
    std::optional<MetricReport> report; // absent when the generated tree is missing
};

/// Table column order: Δ, BLEU-2, ROUGE-L, BERTScore slot, NSR, NER, judge.
extern const std::vector<std::string> kReportColumns;

/// Writes per-instance rows plus an "aggregate" row to <path>.json and
/// <path>.csv.
void write_report_files(const std::string& path_without_extension,
                        const std::vector<InstanceRow>& rows,
                        const MetricReport& aggregate);

void write_transcript_file(const std::string& path,
                           const std::vector<TranscriptEntry>& transcript);

} // namespace taxoalign
