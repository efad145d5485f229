#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "commonsys/certificate.hpp"
#include "commonsys/certify.hpp"
#include "commonsys/counting.hpp"
#include "commonsys/optimize.hpp"

namespace commonsys {

inline constexpr const char* kToolVersion = "0.1.0";

using Json = nlohmann::json;

Json to_json(const Property& p);
Property property_from_json(const Json& j);

Json to_json(const DefectReport& r);

Json to_json(const SearchConfig& c);
SearchConfig search_config_from_json(const Json& j);

Json to_json(const SearchResult& r);
/// The embedded report is rebuilt from the stored fields; exact fields are
/// not carried.
SearchResult search_result_from_json(const Json& j);

Json to_json(const AlgebraicNumber& x);
Json to_json(const ExactPoly& p);
Json to_json(const Certificate& c);
Json to_json(const SlackRow& row);
Json to_json(const ConstantLedger& ledger);

struct RunManifest {
  std::string subcommand;
  /// name -> sha256 of the resolved input bytes
  std::map<std::string, std::string> input_digests;
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> parameters;
  std::string timestamp;  // ISO 8601 UTC; excluded from the digest
};

Json to_json(const RunManifest& m);
/// sha256 of the manifest without its timestamp.
std::string manifest_digest(const RunManifest& m);
std::string utc_timestamp();

}  // namespace commonsys
