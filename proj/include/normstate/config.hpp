#pragma once

#include <json.hpp>
#include <string>

#include "normstate/fiber.hpp"
#include "normstate/gn.hpp"
#include "normstate/harness.hpp"
#include "normstate/solver.hpp"

namespace normstate {

/// Config file sections: {problem, grid, solver, sweep}.
struct AppConfig {
    Params problem;
    SolveConfig solve;
    std::vector<double> sweep_nu;
};

AppConfig parse_config(const nlohmann::json& j);
AppConfig load_config(const std::string& path);

nlohmann::json to_json(const SolveReport& rep);
nlohmann::json to_json(const GNReport& rep);
nlohmann::json to_json(const FiberCriticalSet& cs);
nlohmann::json to_json(const Nu1Estimate& est);
nlohmann::json to_json(const LimitClosedForm& lcf);
nlohmann::json to_json(const SmallNuFit& fit);
nlohmann::json to_json(const LargeNuFit& fit);
nlohmann::json to_json(const NonpositiveReport& rep);

FiberScalars fiber_scalars_from_json(const nlohmann::json& j);

/// deterministic serialization (ordered keys, fixed float format)
std::string dump_json(const nlohmann::json& j);

}  // namespace normstate
