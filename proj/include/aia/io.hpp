#pragma once

// Line-delimited and document JSON forms of pools, transcripts, reports and
// interrogation checkpoints.

#include <string>
#include <vector>

#include "aia/interrogation.hpp"

namespace aia::io {

/// One JSON array of atom strings per line.
std::string write_states(const std::vector<State>& states);
std::vector<State> read_states(std::string_view text);

std::string write_transcript(const std::vector<TranscriptRecord>& records);
std::vector<TranscriptRecord> read_transcript(std::string_view text);

/// One record per outer iteration.
std::string write_report_jsonl(const RunReport& report, const Vocabulary& vocabulary);

struct Summary {
  std::string domain;
  std::string problem;
  std::size_t instantiated_predicates = 0;
  std::size_t actions = 0;
  std::size_t pal_tuples = 0;
  std::size_t lattice_queries = 0;
  std::size_t repair_queries = 0;
  std::size_t states = 0;
  std::uint64_t models = 0;
  double mean_query_seconds = 0;
  double variance_query_seconds = 0;
  std::size_t safety_violations = 0;
  std::optional<double> accuracy;
  std::optional<double> palm_accuracy;
  std::string status = "converged";
};

Summary summarize(const InterrogationState& state, const RunReport& report, const Vocabulary& vocabulary,
                  const ProblemInstance& instance, std::size_t states);
std::string write_summary(const Summary& summary);

std::string write_model_set(const ModelSet& models);
ModelSet read_model_set(std::string_view text, std::shared_ptr<const Vocabulary> vocabulary);

std::string write_checkpoint(const InterrogationState& state);
InterrogationState read_checkpoint(std::string_view text, std::shared_ptr<const Vocabulary> vocabulary);

}  // namespace aia::io
