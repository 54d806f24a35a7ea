#ifndef SELFSIM_REPORT_HPP
#define SELFSIM_REPORT_HPP

#include <json.hpp>

#include "selfsim/fiber.hpp"
#include "selfsim/limit.hpp"

namespace selfsim::report {

/// Exact matrix schema: { "rows": r, "cols": c, "entries": ["p/q", ...] }
/// row-major, every number a decimal string.
nlohmann::json matrix_json(const exact::IntMatrix& m);
nlohmann::json matrix_json(const exact::RatMatrix& m);
exact::IntMatrix int_matrix_from_json(const nlohmann::json& j);
exact::RatMatrix rat_matrix_from_json(const nlohmann::json& j);

std::string render_matrix(const exact::IntMatrix& m);
std::string render_matrix(const exact::RatMatrix& m, bool approx = false);

nlohmann::json fiber_json(const fiber::FiberDecomposition& dec);

std::string orbits_dot(const ifs::MapSpec& spec, const std::vector<ifs::PQOrbit>& orbits);

/// Envelope with the run metadata and standing assumptions.
nlohmann::json envelope(const ifs::MapSpec& spec, nlohmann::json result);

} // namespace selfsim::report

#endif
