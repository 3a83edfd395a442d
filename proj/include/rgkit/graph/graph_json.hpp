#pragma once

#include <filesystem>

#include <json.hpp>

#include "rgkit/graph/feynman_graph.hpp"

namespace rgkit::graph {

// {vertices:[{id, kind:"internal"|"external", degree?}], lines:[{from:[v,slot], to:[v,slot]}]}
nlohmann::json to_json(const FeynmanGraph& g);
FeynmanGraph from_json(const nlohmann::json& j);

FeynmanGraph load_graph(const std::filesystem::path& path);
void save_graph(const FeynmanGraph& g, const std::filesystem::path& path);

}  // namespace rgkit::graph
