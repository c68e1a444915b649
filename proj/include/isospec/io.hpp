#pragma once

#include <string>

#include "json.hpp"

#include "isospec/a_transform.hpp"
#include "isospec/forward.hpp"
#include "isospec/grid_potential.hpp"
#include "isospec/measure.hpp"
#include "isospec/reconstruct.hpp"
#include "isospec/verify.hpp"

namespace isospec::io {

using Json = nlohmann::ordered_json;

/// Serialises with every number at 17 significant digits, which parses back
/// to the same double. Non-finite numbers are rejected.
std::string dump(const Json& value);

/// "%.17g" of a finite double.
std::string format_number(double value);

std::string read_text(const std::string& path);
Json read_json(const std::string& path);
Json parse_json(const std::string& text, const std::string& origin = "input");

/// Writes through a temporary file in the same directory and renames it.
void write_text_atomic(const std::string& path, const std::string& content);
void write_json(const std::string& path, const Json& value);

Json to_json(const GridPotential& pot);
GridPotential potential_from_json(const Json& j);

/// Support indices are 1-based in files and 0-based in memory.
Json to_json(const SpectralMeasure& m);
SpectralMeasure measure_from_json(const Json& j);

Json to_json(const IsospectralPath& path);
IsospectralPath path_from_json(const Json& j);

Json to_json(const EigenSolveReport& report);
Json to_json(const IsospectralityReport& report);
Json sidecar_json(const ReconstructionResult& result,
                  const ReconstructionOptions& opts);

std::string a_function_csv(const AFunction& a);
std::string reconstruction_csv(const ReconstructionResult& result);

}  // namespace isospec::io
