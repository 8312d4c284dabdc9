#include "flowdisc/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "flowdisc/errors.hpp"

namespace flowdisc {

namespace {

const Json& field(const Json& j, const char* name, const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + ": expected an object");
  auto it = j.find(name);
  if (it == j.end()) throw ValidationError(where + (where.empty() ? "" : ".") + name + ": missing field");
  return *it;
}

std::string at(const std::string& where, const char* name) {
  return where.empty() ? std::string(name) : where + "." + name;
}

std::string at(const std::string& where, std::size_t index) { return where + "[" + std::to_string(index) + "]"; }

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ValidationError(where + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw ValidationError(where + ": integer out of range");
  }
  return static_cast<int>(v);
}

const Json& array_field(const Json& j, const char* name, const std::string& where) {
  const Json& a = field(j, name, where);
  if (!a.is_array()) throw ValidationError(at(where, name) + ": expected an array");
  return a;
}

Json rationals(const std::vector<Rational>& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(rational_to_json(x));
  return out;
}

}  // namespace

Json rational_to_json(const Rational& q) { return to_string(q); }

Rational rational_from_json(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ValidationError(where + ": expected a rational string \"num/den\"");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const ValidationError& e) {
    throw ValidationError(where + ": " + e.what());
  }
}

Json instance_to_json(const SchedulingInstance& inst) {
  Json jobs = Json::array();
  for (const auto& job : inst.jobs) {
    Json p = Json::array();
    for (const auto& x : job.proc) p.push_back(x ? rational_to_json(*x) : Json(nullptr));
    jobs.push_back(Json{{"r", rational_to_json(job.release)}, {"p", std::move(p)}});
  }
  return Json{{"m", inst.m}, {"jobs", std::move(jobs)}};
}

SchedulingInstance instance_from_json(const Json& j) {
  SchedulingInstance inst;
  inst.m = int_from_json(field(j, "m", ""), "m");
  const Json& jobs = array_field(j, "jobs", "");
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const std::string where = at("jobs", k);
    Job job;
    job.release = rational_from_json(field(jobs[k], "r", where), at(where, "r"));
    const Json& p = array_field(jobs[k], "p", where);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (p[i].is_null()) job.proc.push_back(std::nullopt);
      else job.proc.push_back(rational_from_json(p[i], at(at(where, "p"), i)));
    }
    inst.jobs.push_back(std::move(job));
  }
  require_valid(inst);
  return inst;
}

Json sequence_to_json(const SignedVectorSequence& seq) {
  Json vectors = Json::array();
  for (const auto& v : seq.vectors) vectors.push_back(rationals(v));
  Json out{{"m", seq.m}, {"vectors", std::move(vectors)}};
  if (!seq.signs.empty()) out["signs"] = seq.signs;
  return out;
}

SignedVectorSequence sequence_from_json(const Json& j) {
  SignedVectorSequence seq;
  seq.m = int_from_json(field(j, "m", ""), "m");
  const Json& vectors = array_field(j, "vectors", "");
  for (std::size_t k = 0; k < vectors.size(); ++k) {
    const std::string where = at("vectors", k);
    if (!vectors[k].is_array()) throw ValidationError(where + ": expected an array");
    std::vector<Rational> v;
    for (std::size_t i = 0; i < vectors[k].size(); ++i) v.push_back(rational_from_json(vectors[k][i], at(where, i)));
    seq.vectors.push_back(std::move(v));
  }
  if (j.contains("signs")) {
    const Json& signs = array_field(j, "signs", "");
    for (std::size_t k = 0; k < signs.size(); ++k) seq.signs.push_back(int_from_json(signs[k], at("signs", k)));
  }
  validate_sequence(seq);
  return seq;
}

MachineAssignment assignment_from_json(const Json& j) {
  MachineAssignment asg;
  const Json& a = array_field(j, "assignment", "");
  for (std::size_t k = 0; k < a.size(); ++k) asg.assign.push_back(int_from_json(a[k], at("assignment", k)));
  return asg;
}

Json report_to_json(const DiscrepancyReport& rep) {
  return Json{{"mode", to_string(rep.mode)},
              {"value", rational_to_json(rep.value)},
              {"coordinate", rep.coordinate},
              {"begin", rep.begin},
              {"end", rep.end}};
}

Json maxflow_result_to_json(const SchedulingInstance& inst, const MaxflowResult& res) {
  const auto& tr = res.trace;
  Json levels = Json::array();
  for (const auto& level : tr.levels) {
    levels.push_back(Json{{"h", level.h},
                          {"D", rational_to_json(level.D)},
                          {"p_max", rational_to_json(level.p_max_level)},
                          {"T_before", rational_to_json(level.T_before)},
                          {"T_after", rational_to_json(level.T_after)},
                          {"split_jobs", level.split_jobs},
                          {"fractional_jobs", level.fractional_jobs},
                          {"skipped", level.skipped}});
  }
  const bool ok = tr.T_final <= tr.bound && tr.max_flow <= tr.T_final;
  return Json{{"kind", "maxflow"},
              {"n", inst.n()},
              {"m", inst.m},
              {"T_star", rational_to_json(tr.T_star)},
              {"T_infeasible", rational_to_json(tr.T_infeasible)},
              {"p_max", rational_to_json(tr.p_max)},
              {"ell", tr.ell},
              {"T_quantized", rational_to_json(tr.T_quantized)},
              {"levels", std::move(levels)},
              {"T_final", rational_to_json(tr.T_final)},
              {"bound", rational_to_json(tr.bound)},
              {"max_flow", rational_to_json(tr.max_flow)},
              {"assignment", res.assignment.assign},
              {"bound_ok", ok}};
}

Json totalflow_result_to_json(const SchedulingInstance& inst, const TotalflowResult& res,
                              const ScheduleReport& schedule) {
  const auto& tr = res.trace;
  Json levels = Json::array();
  for (const auto& level : tr.levels) {
    levels.push_back(Json{{"h", level.h},
                          {"D", rational_to_json(level.D)},
                          {"pieces", level.pieces},
                          {"split_pieces", level.split_pieces},
                          {"flipped", level.flipped},
                          {"alpha_before", rational_to_json(level.alpha_before)},
                          {"alpha_after", rational_to_json(level.alpha_after)},
                          {"aux_cost", rational_to_json(level.cost_after)}});
  }
  Json slots = Json::array();
  for (const auto& [key, v] : res.y.y) {
    slots.push_back(Json{{"machine", std::get<0>(key)},
                         {"job", std::get<1>(key)},
                         {"slot", std::get<2>(key)},
                         {"volume", rational_to_json(v)}});
  }
  return Json{{"kind", "totalflow"},
              {"n", inst.n()},
              {"m", inst.m},
              {"H", tr.H},
              {"lp_cost", rational_to_json(tr.lp_cost)},
              {"lp_aux_cost", rational_to_json(tr.lp_aux_cost)},
              {"ell", tr.ell},
              {"alpha_quantized", rational_to_json(tr.alpha_quantized)},
              {"alpha_levels", std::move(levels)},
              {"alpha_final", rational_to_json(tr.alpha_final)},
              {"alpha_bound", rational_to_json(tr.alpha_bound)},
              {"aux_cost_final", rational_to_json(tr.cost_final)},
              {"total_flow", rational_to_json(schedule.metrics.total_flow)},
              {"flow_to_lp_ratio", rational_to_json(schedule.ratio)},
              {"log2_P", schedule.log2_P},
              {"assignment", schedule.assignment.assign},
              {"slots", std::move(slots)},
              {"bound_ok", tr.alpha_final <= tr.alpha_bound}};
}

Json roundtrip_to_json(const RoundtripReport& rep) {
  return Json{{"lp_optimum", rational_to_json(rep.lp_optimum)},
              {"opt_max_flow", rational_to_json(rep.opt_max_flow)},
              {"assignment", rep.assignment.assign},
              {"extracted_signs", rep.extracted_signs},
              {"extracted", report_to_json(rep.extracted)},
              {"brute_signs", rep.brute_signs},
              {"brute", report_to_json(rep.brute)},
              {"equal", rep.equal}};
}

Json sdp_solution_to_json(const SdpSolution& w) { return Json{{"r", w.r}, {"w", w.signs}}; }

SdpSolution sdp_solution_from_json(const Json& j) {
  SdpSolution w;
  w.r = int_from_json(field(j, "r", ""), "r");
  if (w.r < 1) throw ValidationError("r: must be at least 1");
  const Json& rows = array_field(j, "w", "");
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const std::string where = at("w", k);
    if (!rows[k].is_array() || static_cast<int>(rows[k].size()) != w.r) {
      throw ValidationError(where + ": expected an array of r signs");
    }
    std::vector<int> row;
    for (std::size_t l = 0; l < rows[k].size(); ++l) {
      const int e = int_from_json(rows[k][l], at(where, l));
      if (e != 1 && e != -1) throw ValidationError(at(where, l) + ": sign must be +1 or -1");
      row.push_back(e);
    }
    w.signs.push_back(std::move(row));
  }
  return w;
}

std::string game_trace_csv(const GameResult& result) {
  std::ostringstream out;
  out << "turn,player,index_or_wait,sign,max_prefix_after\n";
  for (std::size_t t = 0; t < result.history.size(); ++t) {
    const auto& e = result.history[t];
    out << t + 1 << ',' << to_string(e.player) << ',';
    if (e.move.wait) out << "wait";
    else out << e.move.index;
    out << ',' << e.move.sign << ',' << to_string(e.max_prefix_after) << '\n';
  }
  return out.str();
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
  if (!out) throw ValidationError("failed writing " + path);
}

Summary summarize(const std::vector<Json>& results) {
  Summary s;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const Json& r = results[k];
    const std::string where = "result[" + std::to_string(k) + "]";
    const Json& kind_field = field(r, "kind", where);
    if (!kind_field.is_string()) throw ValidationError(where + ".kind: expected a string");
    const std::string kind = kind_field.get<std::string>();
    if (kind != "maxflow" && kind != "totalflow") throw ValidationError(where + ".kind: unknown result kind " + kind);
    if (s.kind.empty()) s.kind = kind;
    else if (s.kind != kind) throw ValidationError("cannot summarize mixed result kinds " + s.kind + " and " + kind);
    const bool maxflow = kind == "maxflow";
    SummaryRow row;
    row.id = static_cast<int>(k);
    row.n = int_from_json(field(r, "n", where), where + ".n");
    row.m = int_from_json(field(r, "m", where), where + ".m");
    row.base = field(r, maxflow ? "T_star" : "lp_cost", where).get<std::string>();
    for (const auto& level : array_field(r, maxflow ? "levels" : "alpha_levels", where)) {
      row.level_D.push_back(field(level, "D", where).get<std::string>());
    }
    row.bound = field(r, maxflow ? "bound" : "alpha_bound", where).get<std::string>();
    row.measured = field(r, maxflow ? "T_final" : "alpha_final", where).get<std::string>();
    const Json& ok = field(r, "bound_ok", where);
    if (!ok.is_boolean()) throw ValidationError(where + ".bound_ok: expected a boolean");
    row.ok = ok.get<bool>();
    s.all_ok = s.all_ok && row.ok;
    s.rows.push_back(std::move(row));
  }
  return s;
}

namespace {

std::string join(const std::vector<std::string>& parts, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += sep;
    out += parts[k];
  }
  return out;
}

std::vector<std::string> header(const Summary& s) {
  const bool total = s.kind == "totalflow";
  return {"id", "n", "m", total ? "lp_cost" : "T_star", "level_D", total ? "alpha_bound" : "bound",
          total ? "alpha_final" : "T_final", "bound_ok"};
}

std::vector<std::string> cells(const SummaryRow& row) {
  return {std::to_string(row.id), std::to_string(row.n), std::to_string(row.m), row.base,
          join(row.level_D, ";"), row.bound, row.measured, row.ok ? "true" : "false"};
}

}  // namespace

std::string summary_csv(const Summary& s) {
  std::string out = join(header(s), ",") + "\n";
  for (const auto& row : s.rows) out += join(cells(row), ",") + "\n";
  return out;
}

std::string summary_table(const Summary& s) {
  std::vector<std::vector<std::string>> grid{header(s)};
  for (const auto& row : s.rows) grid.push_back(cells(row));
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& line : grid) {
    for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t c = 0; c < grid[r].size(); ++c) {
      out << (c ? "  " : "") << grid[r][c] << std::string(width[c] - grid[r][c].size(), ' ');
    }
    out << '\n';
    if (r == 0) {
      for (std::size_t c = 0; c < width.size(); ++c) out << (c ? "  " : "") << std::string(width[c], '-');
      out << '\n';
    }
  }
  out << s.rows.size() << " rows, " << (s.all_ok ? "all bounds hold" : "BOUND VIOLATED") << '\n';
  return out.str();
}

}  // namespace flowdisc
