#pragma once

#include <string>

#include "json.hpp"
#include "toral/solver.hpp"
#include "toral/spectral.hpp"

namespace toral {

// ordered_json keeps field order stable, so serialised artifacts are
// byte-identical across runs.
using Json = nlohmann::ordered_json;

Json matrix_to_json(const IntMatrix& A);
IntMatrix matrix_from_json(const Json& j);  // {"l": int, "rows": [[int,...],...]}

Json spectral_to_json(const SpectralData& sd);

Json certificate_to_json(const EntropyCertificate& cert);
EntropyCertificate certificate_from_json(const Json& j);

Json load_json_file(const std::string& path);  // throws ParseError
void write_text_file(const std::string& path, const std::string& content);

} // namespace toral
