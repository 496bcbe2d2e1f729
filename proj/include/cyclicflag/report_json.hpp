#pragma once

// JSON renderings of reports, campaign results and protocol transcripts.

#include <string>
#include <vector>

#include "json.hpp"

#include "cyclicflag/consecutive.hpp"
#include "cyclicflag/css_code.hpp"
#include "cyclicflag/ft_verifier.hpp"
#include "cyclicflag/protocols.hpp"

namespace cyclicflag {

using json = nlohmann::ordered_json;

inline json to_json(const DistinguishabilityReport& r) {
  json j;
  j["method"] = to_string(r.method);
  j["distinguishable"] = r.verdict;
  if (r.witness) {
    j["witness"] = {r.witness->first.to_sparse(), r.witness->second.to_sparse()};
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

inline json to_json(const Theorem2Report& r) {
  json j;
  j["method"] = "theorem2";
  j["all_pass"] = r.all_pass();
  j["shifts_checked"] = r.shifts.size();
  j["failing_shifts"] = r.failing_shifts();
  json shifts = json::array();
  for (const auto& s : r.shifts) {
    json e = to_json(s.report);
    e["l"] = s.l;
    shifts.push_back(e);
  }
  j["shifts"] = shifts;
  return j;
}

inline json to_json(const CampaignResult& r) {
  json j;
  j["code"] = r.code_id;
  j["protocol"] = r.protocol;
  if (!r.operator_string.empty()) j["operator"] = r.operator_string;
  j["seed"] = r.seed;
  j["cases"] = r.cases;
  j["samples"] = r.samples;
  j["passes"] = r.passes;
  j["failures"] = r.failures;
  j["max_syndrome_rounds"] = r.max_syndrome_rounds;
  j["max_operator_rounds"] = r.max_operator_rounds;
  j["branch_counts"] = r.branch_counts;
  json table = json::object();
  for (const auto& [row, branches] : r.table) {
    json cells = json::object();
    for (const auto& b : branches) cells[b] = r.table_examples.at(row).at(b);
    table[row] = cells;
  }
  j["table"] = table;
  json fails = json::array();
  for (const auto& f : r.failure_list) {
    fails.push_back({{"input", f.input},
                     {"fault", f.fault},
                     {"branch", f.branch},
                     {"condition", f.condition},
                     {"residual", f.residual}});
  }
  j["failure_list"] = fails;
  return j;
}

inline json to_json(const FaultTable& t) {
  json j;
  j["title"] = t.title;
  j["pass"] = t.pass();
  json rows = json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"row", r.label},
                    {"listed", r.listed},
                    {"observed", r.observed},
                    {"exact", r.exact},
                    {"pass", r.pass()}});
  }
  j["rows"] = rows;
  return j;
}

inline json to_json(const ProtocolOutcome& o) {
  json j;
  j["branch"] = to_string(o.branch);
  if (o.reported_outcome) j["outcome"] = *o.reported_outcome;
  json rounds = json::array();
  for (const auto& r : o.transcript) {
    json flags = json::array();
    for (const auto& f : r.flags) flags.push_back(f.to_string());
    rounds.push_back({{"kind", to_string(r.kind)},
                      {"block", r.block + 1},
                      {"outcomes", r.outcomes.to_string()},
                      {"flags", flags},
                      {"stopped", r.stopped}});
  }
  j["rounds"] = rounds;
  json corr = json::array();
  for (const auto& c : o.corrections) corr.push_back(c.to_sparse());
  j["corrections"] = corr;
  j["residual"] = o.residual.to_sparse();
  if (!o.block_branches.empty()) {
    json bb = json::array();
    for (auto b : o.block_branches) bb.push_back(to_string(b));
    j["block_branches"] = bb;
  }
  j["lookup_miss"] = o.lookup_miss;
  return j;
}

}  // namespace cyclicflag
