#pragma once

#include <string>
#include <variant>

#include <json.hpp>

#include "geomlaw/dependence.hpp"
#include "geomlaw/exchangeable.hpp"
#include "geomlaw/extendibility.hpp"
#include "geomlaw/samplers.hpp"
#include "geomlaw/sequences.hpp"
#include "geomlaw/shock_models.hpp"

namespace geomlaw::io {

using json = nlohmann::ordered_json;

enum class MissingKeys { Reject, FillNarrowOnes, FillWideZeros };

using FamilyParams = std::variant<NarrowParams, WideParams>;

/// {"family":"narrow"|"wide","d":3,"params":{"<mask>":value,...}}
FamilyParams parse_family_params(const json& doc, MissingKeys fill = MissingKeys::Reject);
json to_json(const NarrowParams& params);
json to_json(const WideParams& params);

/// {"role":"beta","d":3,"values":[...]}
ExchangeableSeq parse_seq(const json& doc);
json to_json(const ExchangeableSeq& seq);

/// {"law":"gamma","shape":2,"rate":3} and friends.
InfDivLaw parse_law(const json& doc);
json to_json(const InfDivLaw& law);

MixingLaw parse_mixing(const json& doc);

json to_json(const Verdict& verdict);
json to_json(const SequenceClassReport& report);
json to_json(const FamilyReport& report);
json to_json(const ExtensionInterval& interval);
json to_json(const DependenceReport& report);

json read_json_file(const std::string& path);

}  // namespace geomlaw::io
