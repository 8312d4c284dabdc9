#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "flowdisc/coloring.hpp"
#include "flowdisc/equivalence.hpp"
#include "flowdisc/game.hpp"
#include "flowdisc/instance.hpp"
#include "flowdisc/maxflow.hpp"
#include "flowdisc/sdp.hpp"
#include "flowdisc/totalflow.hpp"

namespace flowdisc {

using Json = nlohmann::ordered_json;

/// Rationals travel as "num/den" strings. `where` names the field in error
/// messages, e.g. "jobs[2].p[0]".
Json rational_to_json(const Rational& q);
Rational rational_from_json(const Json& j, const std::string& where);

/// {"m": int, "jobs": [{"r": "rat", "p": ["rat" | null, ...]}]}
Json instance_to_json(const SchedulingInstance& inst);
SchedulingInstance instance_from_json(const Json& j);

/// {"m": int, "vectors": [["rat", ...], ...], "signs": [int, ...]}; signs optional.
Json sequence_to_json(const SignedVectorSequence& seq);
SignedVectorSequence sequence_from_json(const Json& j);

/// Reads "assignment": [int, ...] from any object carrying one.
MachineAssignment assignment_from_json(const Json& j);

Json report_to_json(const DiscrepancyReport& rep);

Json maxflow_result_to_json(const SchedulingInstance& inst, const MaxflowResult& res);
Json totalflow_result_to_json(const SchedulingInstance& inst, const TotalflowResult& res,
                              const ScheduleReport& schedule);
Json roundtrip_to_json(const RoundtripReport& rep);

/// {"r": int, "w": [[+-1, ...], ...]}; each row stands for r^(-1/2) times the signs.
Json sdp_solution_to_json(const SdpSolution& w);
SdpSolution sdp_solution_from_json(const Json& j);

/// turn,player,index_or_wait,sign,max_prefix_after
std::string game_trace_csv(const GameResult& result);

Json read_json_file(const std::string& path);
std::string dump_json(const Json& j);
void write_text_file(const std::string& path, const std::string& text);

struct SummaryRow {
  int id = 0;
  int n = 0;
  int m = 0;
  std::string base;      // T* or LP cost
  std::vector<std::string> level_D;
  std::string bound;
  std::string measured;
  bool ok = false;
};

struct Summary {
  std::string kind;  // "maxflow" or "totalflow"; empty for an empty batch
  std::vector<SummaryRow> rows;
  bool all_ok = true;
};

/// Rows from result files of a single kind; mixed kinds are a ValidationError.
Summary summarize(const std::vector<Json>& results);
std::string summary_csv(const Summary& s);
std::string summary_table(const Summary& s);

}  // namespace flowdisc
