#pragma once

#include "kpls/kpls.hpp"

#include <iosfwd>
#include <string>

namespace kpls {

/// Self-describing JSON document carrying the kernel spec, scaling params,
/// coefficients, score matrices, centering state, and the scaled training
/// features. Reals round-trip bit-exactly; output bytes are deterministic.
void save_model(const KplsModel& model, const std::string& path);
void save_model(const KplsModel& model, std::ostream& out);

KplsModel load_model(const std::string& path);
KplsModel load_model(std::istream& in);

} // namespace kpls
