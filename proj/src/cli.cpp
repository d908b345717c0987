#include "geomlaw/cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "geomlaw/dependence.hpp"
#include "geomlaw/exchangeable.hpp"
#include "geomlaw/extendibility.hpp"
#include "geomlaw/json_io.hpp"
#include "geomlaw/samplers.hpp"
#include "geomlaw/sequences.hpp"
#include "geomlaw/shock_models.hpp"
#include "geomlaw/verify.hpp"

namespace geomlaw::cli {
namespace {

using io::json;

struct Options
{
    std::string json_path;
    std::string params_path;
    std::string out_path;
    std::string at;
    std::string model = "narrow";
    std::string suite = "quick";
    std::string from;
    std::string to;
    std::string role = "beta";
    std::string law_name;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    double tolerance = tol::kMembership;
    bool fill_narrow = false;
    bool fill_wide = false;
    std::size_t n = 1000;
    int d = 0;
    std::optional<double> q;
    // Law parameters for `moments`.
    double value = 0, shape = 1, rate = 1, intensity = 1, jump_rate = 1;
    double p = 0.5, finite_mass = 1, bernoulli_q = 0.5, level = 1;
};

std::vector<Count> parse_counts(const std::string& text)
{
    std::vector<Count> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        Count v = 0;
        const auto* end = item.data() + item.size();
        const auto [ptr, ec] = std::from_chars(item.data(), end, v);
        if (ec != std::errc() || ptr != end)
            throw Error(ErrorCode::Parse, "--at expects comma-separated non-negative integers");
        out.push_back(v);
    }
    if (out.empty())
        throw Error(ErrorCode::Parse, "--at is empty");
    return out;
}

io::MissingKeys fill_mode(const Options& o)
{
    if (o.fill_narrow && o.fill_wide)
        throw Error(ErrorCode::Parse, "--fill-narrow-ones and --fill-wide-zeros are exclusive");
    if (o.fill_narrow)
        return io::MissingKeys::FillNarrowOnes;
    if (o.fill_wide)
        return io::MissingKeys::FillWideZeros;
    return io::MissingKeys::Reject;
}

std::string require_path(const std::string& path, const char* flag)
{
    if (path.empty())
        throw Error(ErrorCode::Parse, std::string("missing required option ") + flag);
    return path;
}

/// Sequence document; a bare array or a document without "role" is read as
/// `default_role`.
ExchangeableSeq load_seq(const std::string& path, Role default_role)
{
    json doc = io::read_json_file(path);
    if (doc.is_array())
        doc = json{{"values", doc}};
    if (doc.is_object() && !doc.contains("role"))
        doc["role"] = std::string(to_string(default_role));
    return io::parse_seq(doc);
}

std::vector<double> load_values(const std::string& path)
{
    const json doc = io::read_json_file(path);
    try
    {
        if (doc.is_array())
            return doc.get<std::vector<double>>();
        return doc.at("values").get<std::vector<double>>();
    }
    catch (const json::exception&)
    {
        throw Error(ErrorCode::Parse, "expected a numeric array or {\"values\": [...]}");
    }
}

SurvivalFn load_survival(const Options& o, int& dim)
{
    if (!o.params_path.empty())
    {
        const io::FamilyParams fp =
            io::parse_family_params(io::read_json_file(o.params_path), fill_mode(o));
        return std::visit(
            [&dim](const auto& params) {
                dim = params.dim();
                return survival_fn(params);
            },
            fp);
    }
    const ExchangeableSeq seq = load_seq(require_path(o.json_path, "--params or --json"), Role::Beta);
    dim = seq.dim;
    return survival_fn(seq);
}

std::vector<Count> load_at(const Options& o, int dim)
{
    const std::vector<Count> at = parse_counts(require_path(o.at, "--at"));
    if (at.size() != static_cast<std::size_t>(dim))
    {
        throw Error(ErrorCode::DimensionMismatch,
                    "--at has " + std::to_string(at.size()) + " entries, model has d = "
                        + std::to_string(dim));
    }
    return at;
}

InfDivLaw law_from_flags(const Options& o)
{
    const std::string& name = o.law_name;
    InfDivLaw law;
    if (name == "degenerate")
        law = law::Degenerate{o.value};
    else if (name == "gamma")
        law = law::Gamma{o.shape, o.rate};
    else if (name == "compound-poisson-exp")
        law = law::CompoundPoissonExp{o.intensity, o.jump_rate};
    else if (name == "geometric-killed")
        law = law::GeometricKilled{o.p, o.finite_mass};
    else if (name == "bernoulli")
        law = law::Bernoulli{o.bernoulli_q, o.level};
    else
        throw Error(ErrorCode::Parse, "unknown law '" + name + "'");
    validate_law(law);
    return law;
}

std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_csv(const SampleBatch& batch, std::ostream& os)
{
    std::string text;
    for (int k = 1; k <= batch.dim; ++k)
        text += (k > 1 ? ",tau" : "tau") + std::to_string(k);
    text += '\n';
    char buf[24];
    for (std::size_t i = 0; i < batch.n_samples; ++i)
    {
        const auto row = batch.row(i);
        for (int k = 0; k < batch.dim; ++k)
        {
            if (k > 0)
                text += ',';
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, row[k]);
            text.append(buf, ptr);
        }
        text += '\n';
        if (text.size() > (1u << 20))
        {
            os << text;
            text.clear();
        }
    }
    os << text;
}

class Runner
{
  public:
    Runner(Options& o, std::ostream& out) : o_(o), out_(out) {}

    void emit(const json& doc)
    {
        const std::string text = doc.dump(2) + "\n";
        if (o_.out_path.empty())
        {
            out_ << text;
            return;
        }
        std::ofstream f(o_.out_path, std::ios::binary);
        if (!f)
            throw Error(ErrorCode::Parse, "cannot write '" + o_.out_path + "'");
        f << text;
    }

    int classify_seq()
    {
        const std::vector<double> x = load_values(require_path(o_.json_path, "--json"));
        emit(io::to_json(classify_sequence(x, o_.tolerance)));
        return kOk;
    }

    int classify()
    {
        const ExchangeableSeq seq = load_seq(require_path(o_.json_path, "--json"), Role::Beta);
        emit(io::to_json(classify_family(seq, o_.tolerance)));
        return kOk;
    }

    int survival()
    {
        int dim = 0;
        const SurvivalFn f = load_survival(o_, dim);
        const std::vector<Count> at = load_at(o_, dim);
        emit(json{{"at", at}, {"survival", f(at)}});
        return kOk;
    }

    int pmf_cmd()
    {
        int dim = 0;
        const SurvivalFn f = load_survival(o_, dim);
        const std::vector<Count> at = load_at(o_, dim);
        const PmfValue v = pmf(f, at);
        emit(json{{"at", at}, {"pmf", v.value}, {"clamped", v.clamped}, {"violation", v.violation}});
        return kOk;
    }

    int sample()
    {
        const json doc = io::read_json_file(require_path(o_.params_path, "--params"));
        const SamplingPlan plan{o_.seed, o_.workers};
        SampleBatch batch;
        if (o_.model == "narrow" || o_.model == "wide")
        {
            const io::FamilyParams fp = io::parse_family_params(doc, fill_mode(o_));
            if (o_.model == "narrow")
            {
                const auto* params = std::get_if<NarrowParams>(&fp);
                if (!params)
                    throw Error(ErrorCode::Parse, "--model narrow needs a narrow parameter file");
                batch = sample_narrow(*params, o_.n, plan);
            }
            else
            {
                const auto* params = std::get_if<WideParams>(&fp);
                if (!params)
                    throw Error(ErrorCode::Parse, "--model wide needs a wide parameter file");
                batch = sample_wide(*params, o_.n, plan);
            }
        }
        else if (o_.model == "definetti")
        {
            batch = sample_definetti(io::parse_law(doc), require_d(), o_.n, plan);
        }
        else if (o_.model == "sieve")
        {
            batch = sample_bernoulli_sieve(io::parse_mixing(doc), require_d(), o_.n, plan);
        }
        else
        {
            throw Error(ErrorCode::Parse, "unknown model '" + o_.model + "'");
        }

        if (o_.out_path.empty())
        {
            write_csv(batch, out_);
            return kOk;
        }
        {
            std::ofstream f(o_.out_path, std::ios::binary);
            if (!f)
                throw Error(ErrorCode::Parse, "cannot write '" + o_.out_path + "'");
            write_csv(batch, f);
        }
        const Provenance& prov = batch.provenance;
        const json meta{{"model", prov.model},
                        {"algorithm", prov.algorithm},
                        {"params_digest", hex64(prov.params_digest)},
                        {"seed", prov.seed},
                        {"workers", prov.workers},
                        {"d", batch.dim},
                        {"n_samples", batch.n_samples}};
        std::ofstream m(o_.out_path + ".meta.json", std::ios::binary);
        m << meta.dump(2) << "\n";
        return kOk;
    }

    int dependence()
    {
        if (!o_.params_path.empty())
        {
            const io::FamilyParams fp =
                io::parse_family_params(io::read_json_file(o_.params_path), fill_mode(o_));
            emit(std::visit([](const auto& params) { return io::to_json(dependence_report(params)); },
                            fp));
            return kOk;
        }
        const ExchangeableSeq seq = load_seq(require_path(o_.json_path, "--params or --json"), Role::Beta);
        const bool narrow = seq.role == Role::PNarrow || seq.role == Role::ASeq || seq.role == Role::BSeq;
        if (narrow)
            emit(io::to_json(dependence_report(to_narrow_params(convert(seq, Role::PNarrow)))));
        else
            emit(io::to_json(dependence_report(to_wide_params(convert(seq, Role::PTilde)))));
        return kOk;
    }

    int moments()
    {
        const InfDivLaw law = o_.json_path.empty() ? law_from_flags(o_)
                                                   : io::parse_law(io::read_json_file(o_.json_path));
        const Role role = role_from_string(o_.role);
        if (role != Role::BSeq && role != Role::Beta)
            throw Error(ErrorCode::Parse, "--role must be b or beta");
        const ExchangeableSeq seq = laplace_moments(law, require_d(), role);
        json out{{"law", io::to_json(law)}, {"moments", io::to_json(seq)}};
        out["in_LM"] = check_LM(seq.values, o_.tolerance).member;
        out["hankel_extendible"] = hankel_extendible(seq.values).extendible;
        emit(out);
        return kOk;
    }

    int extend()
    {
        ExchangeableSeq row = load_seq(require_path(o_.json_path, "--json"), Role::PNarrow);
        const bool narrow = row.role == Role::PNarrow || row.role == Role::ASeq || row.role == Role::BSeq;
        row = convert(row, narrow ? Role::PNarrow : Role::PTilde);
        const ExtensionInterval iv = narrow ? extend_one_narrow(row) : extend_one_wide(row);
        json out{{"row", io::to_json(row)}, {"interval", io::to_json(iv)}};
        if (o_.q)
        {
            out["q"] = *o_.q;
            out["q_feasible"] = iv.contains(*o_.q);
            out["extended_row"] =
                narrow ? extension_row_narrow(row, *o_.q) : extension_row_wide(row, *o_.q);
        }
        emit(out);
        return kOk;
    }

    int verify()
    {
        const std::vector<HarnessResult> results = run_harnesses(o_.suite, o_.seed);
        bool all = true;
        json arr = json::array();
        for (const HarnessResult& r : results)
        {
            all = all && r.pass;
            arr.push_back(json{{"name", r.name},
                               {"pass", r.pass},
                               {"metric", r.metric},
                               {"threshold", r.threshold},
                               {"detail", r.detail}});
        }
        emit(json{{"suite", o_.suite}, {"seed", o_.seed}, {"pass", all}, {"results", arr}});
        return all ? kOk : kVerificationFailed;
    }

    int convert_cmd()
    {
        const Role from = role_from_string(o_.from);
        const Role to = role_from_string(o_.to);
        json doc = io::read_json_file(require_path(o_.json_path, "--json"));
        if (doc.is_array())
            doc = json{{"values", doc}};
        if (doc.is_object() && doc.contains("role")
            && role_from_string(doc.at("role").get<std::string>()) != from)
        {
            throw Error(ErrorCode::Parse, "document role disagrees with --from");
        }
        if (doc.is_object())
            doc["role"] = std::string(to_string(from));
        emit(io::to_json(convert(io::parse_seq(doc), to)));
        return kOk;
    }

  private:
    int require_d() const
    {
        if (o_.d < 1)
            throw Error(ErrorCode::Parse, "this command needs --d >= 1");
        return o_.d;
    }

    Options& o_;
    std::ostream& out_;
};

void error_json(std::ostream& err, std::string_view code, const std::string& message)
{
    err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    Options o;
    CLI::App app{"Multivariate geometric laws: classification, sampling, dependence", "geomlaw"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    auto add_common = [&o](CLI::App* sub) {
        sub->add_option("--out", o.out_path, "Write output to this file instead of stdout");
        sub->add_option("--tolerance", o.tolerance, "Membership tolerance (default 1e-12)");
    };
    auto add_family_flags = [&o](CLI::App* sub) {
        sub->add_option("--params", o.params_path, "Family parameter JSON file");
        sub->add_flag("--fill-narrow-ones", o.fill_narrow, "Missing narrow keys default to 1");
        sub->add_flag("--fill-wide-zeros", o.fill_wide, "Missing wide keys default to 0");
    };
    auto add_seed = [&o](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "RNG seed")->envname("GEOMLAW_SEED");
        sub->add_option("--workers", o.workers, "Number of sampling substreams")
            ->check(CLI::Range(1u, 1024u));
    };

    std::function<int()> action;
    Runner runner(o, out);

    auto* classify_seq = app.add_subcommand("classify-seq", "Membership in M_d, LM_d, SM_d and Hankel extendibility");
    classify_seq->add_option("--json", o.json_path, "Sequence file: array or {\"values\": [...]}")->required();
    add_common(classify_seq);
    classify_seq->footer("Example:\n  echo '[1, 0.5, 0.2]' > x.json\n  geomlaw classify-seq --json x.json\n"
                         "  -> in_M true, hankel_extendible false");
    classify_seq->callback([&] { action = [&] { return runner.classify_seq(); }; });

    auto* classify = app.add_subcommand("classify", "Family verdict for an exchangeable sequence");
    classify->add_option("--json", o.json_path, "Sequence file {\"role\": ..., \"values\": [...]}")->required();
    add_common(classify);
    classify->footer("Example:\n  echo '{\"role\":\"beta\",\"values\":[1,0.5,0.2]}' > beta.json\n"
                     "  geomlaw classify --json beta.json\n  -> family G^{W,X}, hankel_extendible false");
    classify->callback([&] { action = [&] { return runner.classify(); }; });

    auto* survival = app.add_subcommand("survival", "Evaluate P(tau > n)");
    add_family_flags(survival);
    survival->add_option("--json", o.json_path, "Exchangeable sequence file (alternative to --params)");
    survival->add_option("--at", o.at, "Comma-separated n, e.g. 1,2,0")->required();
    add_common(survival);
    survival->footer("Example:\n  echo '{\"family\":\"narrow\",\"d\":2,\"params\":{\"1\":0.5,\"2\":0.6,\"3\":0.9}}' > narrow.json\n"
                     "  geomlaw survival --params narrow.json --at 1,2\n  -> 0.5 * 0.36 * 0.81 = 0.1458");
    survival->callback([&] { action = [&] { return runner.survival(); }; });

    auto* pmf_sub = app.add_subcommand("pmf", "Evaluate P(tau = n) by inclusion-exclusion");
    add_family_flags(pmf_sub);
    pmf_sub->add_option("--json", o.json_path, "Exchangeable sequence file (alternative to --params)");
    pmf_sub->add_option("--at", o.at, "Comma-separated n >= 1")->required();
    add_common(pmf_sub);
    pmf_sub->footer("Example:\n  geomlaw pmf --params narrow.json --at 1,1");
    pmf_sub->callback([&] { action = [&] { return runner.pmf_cmd(); }; });

    auto* sample = app.add_subcommand("sample", "Draw samples as CSV");
    sample->add_option("--model", o.model, "narrow | wide | definetti | sieve")
        ->check(CLI::IsMember({"narrow", "wide", "definetti", "sieve"}));
    sample->add_option("--params", o.params_path, "Family parameters, law or mixing JSON")->required();
    sample->add_flag("--fill-narrow-ones", o.fill_narrow, "Missing narrow keys default to 1");
    sample->add_flag("--fill-wide-zeros", o.fill_wide, "Missing wide keys default to 0");
    sample->add_option("--n", o.n, "Number of draws");
    sample->add_option("--d", o.d, "Dimension (definetti and sieve)");
    sample->add_option("--out", o.out_path, "CSV path; a <out>.meta.json sidecar is written");
    add_seed(sample);
    sample->footer("Example:\n  echo '{\"law\":\"gamma\",\"shape\":2,\"rate\":3}' > gamma.json\n"
                   "  geomlaw sample --model definetti --params gamma.json --d 3 --n 1000000 --seed 42 --out s.csv");
    sample->callback([&] { action = [&] { return runner.sample(); }; });

    auto* dependence = app.add_subcommand("dependence", "Correlation matrix and MRTI verdict");
    add_family_flags(dependence);
    dependence->add_option("--json", o.json_path, "Exchangeable sequence file (alternative to --params)");
    add_common(dependence);
    dependence->footer("Example:\n  geomlaw dependence --json beta.json\n  -> pairwise correlation -0.125, mrti false");
    dependence->callback([&] { action = [&] { return runner.dependence(); }; });

    auto* moments = app.add_subcommand("moments", "Exponential moments E[exp(-kX)] of an increment law");
    moments->add_option("--law", o.law_name, "degenerate | gamma | compound-poisson-exp | geometric-killed | bernoulli");
    moments->add_option("--json", o.json_path, "Law file (alternative to --law and its flags)");
    moments->add_option("--d", o.d, "Dimension")->required();
    moments->add_option("--role", o.role, "b or beta")->check(CLI::IsMember({"b", "beta"}));
    moments->add_option("--value", o.value, "degenerate: point");
    moments->add_option("--shape", o.shape, "gamma: shape");
    moments->add_option("--rate", o.rate, "gamma: rate");
    moments->add_option("--intensity", o.intensity, "compound-poisson-exp: Poisson intensity");
    moments->add_option("--jump-rate", o.jump_rate, "compound-poisson-exp: exponential jump rate");
    moments->add_option("--p", o.p, "geometric-killed: p");
    moments->add_option("--finite-mass", o.finite_mass, "geometric-killed: P(X < inf)");
    moments->add_option("--q", o.bernoulli_q, "bernoulli: P(X = level)");
    moments->add_option("--level", o.level, "bernoulli: level");
    add_common(moments);
    moments->footer("Example:\n  geomlaw moments --law gamma --shape 2 --rate 3 --d 5");
    moments->callback([&] { action = [&] { return runner.moments(); }; });

    auto* extend = app.add_subcommand("extend", "Feasible q for a one-dimension extension of a p or p~ row");
    extend->add_option("--json", o.json_path, "Row file {\"role\": \"p\"|\"ptilde\", \"values\": [...]}")->required();
    extend->add_option("--q", o.q, "Evaluate the extended row at this q");
    add_common(extend);
    extend->footer("Example:\n  echo '{\"role\":\"p\",\"values\":[0.5,0.5]}' > row.json\n"
                   "  geomlaw extend --json row.json --q 0.7\n  -> interval [0.5, 1], q feasible");
    extend->callback([&] { action = [&] { return runner.extend(); }; });

    auto* verify = app.add_subcommand("verify", "Run the oracle harnesses");
    verify->add_option("--suite", o.suite, "all | quick")->check(CLI::IsMember({"all", "quick"}));
    verify->add_option("--seed", o.seed, "RNG seed")->envname("GEOMLAW_SEED");
    add_common(verify);
    verify->footer("Example:\n  geomlaw verify --suite quick\n  -> exit 0 iff every harness passes");
    verify->callback([&] { action = [&] { return runner.verify(); }; });

    auto* convert_sub = app.add_subcommand("convert", "Convert between exchangeable parameterizations");
    convert_sub->add_option("--from", o.from, "p | a | b | ptilde | beta")->required();
    convert_sub->add_option("--to", o.to, "p | a | b | ptilde | beta")->required();
    convert_sub->add_option("--json", o.json_path, "Sequence file")->required();
    add_common(convert_sub);
    convert_sub->footer("Example:\n  echo '[0.5, 0.8]' > p.json\n  geomlaw convert --from p --to beta --json p.json\n"
                        "  -> beta (1, 0.4, 0.2)");
    convert_sub->callback([&] { action = [&] { return runner.convert_cmd(); }; });

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try
    {
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp& e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::CallForAllHelp& e)
    {
        return app.exit(e, out, err);
    }
    catch (const CLI::ParseError& e)
    {
        error_json(err, "usage", e.what());
        return kUsage;
    }

    try
    {
        return action ? action() : kUsage;
    }
    catch (const Error& e)
    {
        error_json(err, to_string(e.code()), e.what());
        return kValidation;
    }
    catch (const std::exception& e)
    {
        error_json(err, "internal", e.what());
        return kValidation;
    }
}

}  // namespace geomlaw::cli
