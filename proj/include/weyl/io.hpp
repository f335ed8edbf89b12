#pragma once

#include <string>

#include <json.hpp>

#include "weyl/diagnostics.hpp"

namespace weyl {

using Json = nlohmann::ordered_json;

Json to_json(const FockMatrix& m);
FockMatrix fock_from_json(const Json& j);

/// Little-endian binary layout: 32-byte header (magic "WEYL0001"; N, d, k,
/// method code as u32; 8 reserved zero bytes), then row-major interleaved
/// re/im float64 entries.
void write_fock_binary(const FockMatrix& m, const std::string& path);
FockMatrix read_fock_binary(const std::string& path);

/// Sampled symbols share the binary container (method code TOEPLITZ_SYMBOL,
/// N = points per axis); grid metadata goes to a JSON sidecar at
/// path + ".meta.json".
void write_sampled_binary(const SampledSymbol& s, const std::string& path);
SampledSymbol read_sampled_binary(const std::string& path);

Json to_json(const OscillationProfile& p);
Json to_json(const CriterionVerdict& v);
Json to_json(const SupEstimate& e);
Json to_json(const DiagnosticsReport& r);  // schema "weyl-lab-report/1"
Json to_json(const BCSpectrumTable& t);

std::string bc_table_csv(const BCSpectrumTable& t, const std::string& config_comment = "");

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace weyl
