#include "geomlaw/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace geomlaw::io {
namespace {

template <class F>
auto parse_guard(F&& body) -> decltype(body())
{
    try
    {
        return body();
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::Parse, std::string("malformed JSON input: ") + e.what());
    }
}

const json& require(const json& doc, const char* key)
{
    if (!doc.is_object() || !doc.contains(key))
        throw Error(ErrorCode::Parse, std::string("missing field '") + key + "'");
    return doc.at(key);
}

/// Numbers, or the strings "inf"/"infinity".
double number(const json& v)
{
    if (v.is_string())
    {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "infinity" || s == "Infinity")
            return law::kInfinity;
        throw Error(ErrorCode::Parse, "expected a number, got '" + s + "'");
    }
    return v.get<double>();
}

json number_json(double v)
{
    if (std::isinf(v))
        return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

std::uint32_t parse_mask_key(const std::string& key)
{
    std::size_t used = 0;
    unsigned long value = 0;
    try
    {
        value = std::stoul(key, &used, 10);
    }
    catch (const std::exception&)
    {
        used = 0;
    }
    if (used != key.size() || key.empty() || value > 0xffffffffUL)
        throw Error(ErrorCode::Parse, "subset key '" + key + "' is not a decimal mask");
    return static_cast<std::uint32_t>(value);
}

json witness_json(const std::optional<Witness>& w)
{
    if (!w)
        return nullptr;
    return json{{"k", w->offset}, {"order", w->order}, {"value", w->value}};
}


}  // namespace

FamilyParams parse_family_params(const json& doc, MissingKeys fill)
{
    return parse_guard([&]() -> FamilyParams {
        const std::string family = require(doc, "family").get<std::string>();
        const int d = require(doc, "d").get<int>();
        check_dim(d);
        RawParamMap raw;
        for (const auto& [key, value] : require(doc, "params").items())
            raw[parse_mask_key(key)] = number(value);
        const std::uint32_t count = 1u << d;
        if (family == "narrow")
        {
            if (fill == MissingKeys::FillNarrowOnes)
                for (std::uint32_t b = 1; b < count; ++b)
                    raw.try_emplace(b, 1.0);
            return validate_narrow(raw, d);
        }
        if (family == "wide")
        {
            if (fill == MissingKeys::FillWideZeros)
                for (std::uint32_t b = 0; b < count; ++b)
                    raw.try_emplace(b, 0.0);
            return validate_wide(raw, d);
        }
        throw Error(ErrorCode::Parse, "family must be 'narrow' or 'wide', got '" + family + "'");
    });
}

json to_json(const NarrowParams& params)
{
    json p = json::object();
    for (const auto& [bits, value] : to_raw(params))
        p[std::to_string(bits)] = value;
    return json{{"family", "narrow"}, {"d", params.dim()}, {"params", p}};
}

json to_json(const WideParams& params)
{
    json p = json::object();
    for (const auto& [bits, value] : to_raw(params))
        p[std::to_string(bits)] = value;
    return json{{"family", "wide"}, {"d", params.dim()}, {"params", p}};
}

ExchangeableSeq parse_seq(const json& doc)
{
    return parse_guard([&] {
        const Role role = role_from_string(require(doc, "role").get<std::string>());
        std::vector<double> values;
        for (const auto& v : require(doc, "values"))
            values.push_back(number(v));
        ExchangeableSeq seq = make_seq(role, std::move(values));
        if (doc.contains("d") && doc.at("d").get<int>() != seq.dim)
        {
            throw Error(ErrorCode::DimensionMismatch,
                        "field d = " + std::to_string(doc.at("d").get<int>())
                            + " disagrees with the number of values");
        }
        return seq;
    });
}

json to_json(const ExchangeableSeq& seq)
{
    return json{{"role", to_string(seq.role)}, {"d", seq.dim}, {"values", seq.values}};
}

InfDivLaw parse_law(const json& doc)
{
    return parse_guard([&]() -> InfDivLaw {
        const std::string name = require(doc, "law").get<std::string>();
        InfDivLaw law;
        if (name == "degenerate")
            law = law::Degenerate{number(require(doc, "value"))};
        else if (name == "gamma")
            law = law::Gamma{number(require(doc, "shape")), number(require(doc, "rate"))};
        else if (name == "compound-poisson-exp")
            law = law::CompoundPoissonExp{number(require(doc, "intensity")),
                                          number(require(doc, "jump_rate"))};
        else if (name == "geometric-killed")
            law = law::GeometricKilled{number(require(doc, "p")),
                                       doc.contains("finite_mass") ? number(doc.at("finite_mass")) : 1.0};
        else if (name == "bernoulli")
            law = law::Bernoulli{number(require(doc, "q")), number(require(doc, "level"))};
        else
            throw Error(ErrorCode::Parse, "unknown law '" + name + "'");
        validate_law(law);
        return law;
    });
}

json to_json(const InfDivLaw& law)
{
    json out{{"law", law_name(law)}};
    std::visit(
        [&out](const auto& l) {
            using T = std::decay_t<decltype(l)>;
            if constexpr (std::is_same_v<T, law::Degenerate>)
                out["value"] = number_json(l.value);
            else if constexpr (std::is_same_v<T, law::Gamma>)
            {
                out["shape"] = l.shape;
                out["rate"] = l.rate;
            }
            else if constexpr (std::is_same_v<T, law::CompoundPoissonExp>)
            {
                out["intensity"] = l.intensity;
                out["jump_rate"] = l.jump_rate;
            }
            else if constexpr (std::is_same_v<T, law::GeometricKilled>)
            {
                out["p"] = l.p;
                out["finite_mass"] = l.finite_mass;
            }
            else
            {
                out["q"] = l.q;
                out["level"] = number_json(l.level);
            }
        },
        law);
    out["infinitely_divisible"] = is_infinitely_divisible(law);
    return out;
}

MixingLaw parse_mixing(const json& doc)
{
    return parse_guard([&]() -> MixingLaw {
        const std::string name = require(doc, "mixing").get<std::string>();
        MixingLaw m;
        if (name == "point")
            m = mixing::PointMass{number(require(doc, "value"))};
        else if (name == "uniform")
            m = mixing::Uniform{number(require(doc, "lower")), number(require(doc, "upper"))};
        else if (name == "quantiles")
            m = mixing::QuantileTable{require(doc, "quantiles").get<std::vector<double>>()};
        else if (name == "exp-of-law")
            m = mixing::ExpOfLaw{parse_law(require(doc, "law"))};
        else
            throw Error(ErrorCode::Parse, "unknown mixing law '" + name + "'");
        validate_mixing(m);
        return m;
    });
}

json to_json(const Verdict& verdict)
{
    return json{{"member", verdict.member},
                {"boundary_failure", verdict.boundary_failure},
                {"witness", witness_json(verdict.witness)}};
}

json to_json(const SequenceClassReport& report)
{
    json out{{"checked", report.checked},
             {"in_M", report.in_M.member},
             {"in_LM", report.in_LM.member},
             {"in_SM", report.in_SM.member},
             {"hankel_extendible", report.hankel.extendible},
             {"hankel_min_eigenvalues",
              json::array({report.hankel.min_eigenvalue_moments,
                           report.hankel.min_eigenvalue_differences})}};
    if (report.lm_ext)
    {
        out["lm_extendible"] = json{
            {"extendible", report.lm_ext->extendible},
            {"exact", report.lm_ext->exact},
            {"failing_power",
             report.lm_ext->failing_power ? json(*report.lm_ext->failing_power) : json(nullptr)}};
    }
    else
    {
        out["lm_extendible"] = nullptr;
    }
    json witnesses = json::object();
    if (!report.in_M.member)
        witnesses["M"] = to_json(report.in_M);
    if (!report.in_LM.member)
        witnesses["LM"] = to_json(report.in_LM);
    if (!report.in_SM.member)
        witnesses["SM"] = to_json(report.in_SM);
    out["witnesses"] = witnesses;
    return out;
}

json to_json(const FamilyReport& report)
{
    return json{{"family", to_string(report.family)},
                {"wide_exchangeable", report.wide_exch},
                {"narrow_exchangeable", report.narrow_exch},
                {"wide_extendible", report.wide_ext},
                {"narrow_extendible", report.narrow_ext},
                {"narrow_extendible_heuristic", report.narrow_ext_heuristic},
                {"hankel_extendible", report.report.hankel.extendible},
                {"report", to_json(report.report)}};
}

json to_json(const ExtensionInterval& interval)
{
    json out{{"feasible", !interval.empty()}};
    if (!interval.empty())
    {
        out["lower"] = interval.lower;
        out["upper"] = interval.upper;
        out["open_lower"] = interval.open_lower;
        out["open_upper"] = interval.open_upper;
    }
    return out;
}

json to_json(const DependenceReport& report)
{
    json out{{"d", report.dim}, {"corr", report.corr}};
    out["mrti"] = report.mrti ? json(*report.mrti) : json(nullptr);
    out["mrti_witness_k"] = report.mrti_witness ? json(*report.mrti_witness) : json(nullptr);
    out["notes"] = report.notes;
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    try
    {
        return json::parse(in);
    }
    catch (const json::exception& e)
    {
        throw Error(ErrorCode::Parse, "'" + path + "' is not valid JSON: " + e.what());
    }
}

}  // namespace geomlaw::io
