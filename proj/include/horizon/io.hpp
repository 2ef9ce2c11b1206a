#pragma once

// JSON and CSV encodings shared by the library and the CLI.

#include <horizon/causal_circuit.hpp>
#include <horizon/evaporation.hpp>
#include <horizon/inequalities.hpp>
#include <horizon/qcore.hpp>

#include <json.hpp>

#include <filesystem>
#include <string>

namespace horizon {

using Json = nlohmann::ordered_json;

/// Flat list of [re, im] pairs in amplitude-index order.
Json state_to_json(const PureState &state);
PureState state_from_json(const Json &j);

Json to_json(const InequalityResult &r);
Json to_json(const ScanSummary &s);
Json to_json(const EpochSpec &s);
Json to_json(const MatterEpochSpec &s);
Json to_json(const ParadoxReport &r);

/// Columns k, mean_S_R, std_S_R, mean_MI, std_MI, pred_S_R, pred_MI; 12 significant
/// digits, '.' decimal separator regardless of locale.
std::string trace_csv(const EvaporationTrace &trace);
Json trace_to_json(const EvaporationTrace &trace);

std::string format_number(double value);

/// Writes to a sibling temporary and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, const std::string &content);

} // namespace horizon
