#pragma once

#include <string>

#include "enttest/operators.hpp"

namespace enttest {

// State file format: {"factor_dims":[...], "entries":[[re,im],...]} row-major.
// Hermiticity and trace are validated on load. Throws FileFormatError with the
// offending location for malformed files, DomainError/DimensionError for
// semantically invalid operators.
DensityOperator load_state(const std::string& path);
void save_state(const DensityOperator& rho, const std::string& path);

std::string state_to_json(const DensityOperator& rho);
DensityOperator state_from_json(const std::string& text, const std::string& origin = "<string>");

}  // namespace enttest
