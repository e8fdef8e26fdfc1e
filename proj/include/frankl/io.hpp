#pragma once

#include <string>
#include <vector>

#include "frankl/driver.hpp"
#include "frankl/separation.hpp"

#include <nlohmann/json_fwd.hpp>

namespace frankl {

struct parse_error : error {
    using error::error;
};

// Family text format: one set per line, elements as whitespace- or
// comma-separated positive integers, `empty` for the empty set, `#` comments,
// optional `ground <n>` header (otherwise n = max element). Blank lines
// separate stanzas, one family each.
std::vector<SetFamily> parse_families(const std::string& text);
SetFamily parse_family(const std::string& text);
SetFamily load_family(const std::string& path);
std::string print_family(const SetFamily& f);  // normalized, re-parses equal

nlohmann::json family_to_json(const SetFamily& f);
SetFamily family_from_json(const nlohmann::json& j);

nlohmann::json system_to_json(const LinearSystem& sys);
LinearSystem system_from_json(const nlohmann::json& j);

nlohmann::json duals_to_json(const std::map<std::string, Rat>& duals);
std::map<std::string, Rat> duals_from_json(const nlohmann::json& j);

nlohmann::json proof_to_json(const BnbProof& proof);
BnbProof proof_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const ClassificationCertificate& cert);
ClassificationCertificate certificate_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json load_json_file(const std::string& path);

}  // namespace frankl
