#pragma once

// JSON readers and writers for the file-driven front end.
//
//   tree      {"nodes": [{"id": "root", "parent": null, "p": 1, "t": 0}, ...]}
//             or {"uniform_binomial": depth}
//   process   {"values": {"<node id>": x, ...}}        missing nodes are 0
//             {"payoff": {"<leaf id>": y, ...}}        terminal payoff, closed
//                                                      to a martingale
//   bimeasure {"pr": [{"node": id, "increment": x}], "op": [...]}
//   spec      {"elements": [{"measure": <bimeasure or file path>,
//                            "gamma": g, "label": name}, ...]}
//             or {"family": "worst_case"} / {"family": "avar", "alpha": a}
//
// Writers emit canonical node order and sorted keys with shortest round-trip
// decimals, so a written object re-reads to the identical value.

#include "scenrisk/scenrisk.hpp"

#include "json.hpp"

#include <filesystem>
#include <string>
#include <optional>

namespace scenrisk::cli {

using Json = nlohmann::json;

/// Parses text; syntax errors become ValidationError naming the source,
/// line and column.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::filesystem::path& path);

TreePtr tree_from_json(const Json& j);
Json tree_to_json(const ScenarioTree& tree);

/// Either an adapted process or a terminal payoff, as written in the file.
struct ProcessInput {
    AdaptedProcess process;
    std::optional<StaticRV> payoff;
};

ProcessInput process_from_json(const Json& j, const TreePtr& tree);
Json process_to_json(const AdaptedProcess& x);
Json payoff_to_json(const StaticRV& y);

BiMeasure bimeasure_from_json(const Json& j, const TreePtr& tree);
Json bimeasure_to_json(const BiMeasure& a);

/// `base` resolves measure file references relative to the spec file.
RiskMeasureSpec spec_from_json(const Json& j, const TreePtr& tree, const std::filesystem::path& base = {});
Json spec_to_json(const RiskMeasureSpec& spec);

} // namespace scenrisk::cli
