#pragma once

#include <optional>
#include <ostream>

#include "json.hpp"

#include "lnlab/admissible.hpp"
#include "lnlab/solver.hpp"

namespace lnlab {

nlohmann::ordered_json to_json(const ProblemSpec& spec);
nlohmann::ordered_json to_json(const SolveReport& report,
                               bool include_profile = true);
nlohmann::ordered_json to_json(const DeltaSweep& sweep);
nlohmann::ordered_json to_json(
    const AdmissibilityCertificate& cert,
    const std::optional<Verification>& verification = std::nullopt);

/// Pretty-printed JSON with every number at 17 significant digits.
/// Non-finite numbers become null.
void write_json(std::ostream& os, const nlohmann::ordered_json& value);

/// Columns r,u,residual,margin. Boundary rows carry the Dirichlet residual
/// and an empty margin.
void write_solution_csv(std::ostream& os, const SolveReport& report,
                        const ProblemSpec& spec);

}  // namespace lnlab
