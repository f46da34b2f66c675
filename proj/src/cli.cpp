#include "bibasis/cli.hpp"

#include "bibasis/checks.hpp"
#include "bibasis/constants.hpp"
#include "bibasis/io.hpp"
#include "bibasis/systems.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <ostream>
#include <sstream>

namespace bibasis {

namespace {

int need(const std::optional<int>& value, const char* flag, const std::string& name)
{
    if (!value)
        throw std::invalid_argument("system '" + name + "' requires " + flag);
    return *value;
}

int first_of(const std::optional<int>& a, const std::optional<int>& b, const char* flags,
             const std::string& name)
{
    if (a)
        return *a;
    return need(b, flags, name);
}

} // namespace

const std::vector<std::string>& system_names()
{
    static const std::vector<std::string> names{
        "unit-vectors", "summing-basis", "diff-basis",      "haar",        "haar-lp",
        "rademacher",   "walsh",         "walsh-columns",   "krengel",     "disc-rademacher",
        "abs-matrix",   "schauder",      "hadamard",        "walsh-matrix"};
    return names;
}

System named_system(const std::string& name, const SystemArgs& args)
{
    const Exponent p = Exponent::parse(args.p);
    if (name == "unit-vectors") {
        const int dim = first_of(args.n, args.m, "--n or --m", name);
        return unit_vectors(make_space(SpaceKind::lp_n, p, dim), args.m.value_or(dim));
    }
    if (name == "summing-basis")
        return summing_basis(first_of(args.n, args.m, "--n or --m", name));
    if (name == "diff-basis")
        return difference_basis(first_of(args.n, args.m, "--n or --m", name));
    if (name == "haar")
        return haar(p, need(args.level, "--level", name));
    if (name == "haar-lp")
        return haar(p, need(args.level, "--level", name), HaarNormalization::lp);
    if (name == "rademacher")
        return rademacher(p, first_of(args.m, args.level, "--m", name));
    if (name == "walsh")
        return walsh(p, first_of(args.n, args.level, "--n", name));
    if (name == "walsh-columns")
        return walsh_columns(p, need(args.n, "--n", name));
    if (name == "krengel")
        return krengel_columns(p, need(args.n, "--n", name));
    if (name == "disc-rademacher")
        return discretized_rademacher(p, need(args.level, "--level", name));
    if (name == "abs-matrix")
        return absolute_matrix_example(need(args.m, "--m", name));
    if (name == "schauder")
        return schauder_c01(need(args.level, "--level", name));
    if (name == "hadamard" || name == "walsh-matrix")
        throw std::invalid_argument("'" + name + "' is a sign matrix, not a system");
    throw UnknownNameError("unknown system '" + name + "'");
}

namespace {

struct Options {
    std::string name;
    std::string p = "2";
    int level = 0;
    int m = 0;
    int n = 0;
    std::string kind = "bibasis";
    std::string strategy = "multistart-ascent";
    long budget = 10000;
    std::uint64_t seed = 0;
    int trials = 0;
    double tol = 0.0;
    int permutations = 0;
    std::string in;
    std::string out;
    bool json = false;
    bool csv = false;
    bool serial = false;
    std::vector<std::string> only;

    CLI::Option* p_opt = nullptr;
    CLI::Option* level_opt = nullptr;
    CLI::Option* m_opt = nullptr;
    CLI::Option* n_opt = nullptr;
    CLI::Option* trials_opt = nullptr;
    CLI::Option* tol_opt = nullptr;
    CLI::Option* only_opt = nullptr;

    static std::optional<int> get(CLI::Option* opt, int value)
    {
        return opt != nullptr && opt->count() > 0 ? std::optional<int>(value) : std::nullopt;
    }

    SystemArgs system_args() const
    {
        return {p, get(level_opt, level), get(m_opt, m), get(n_opt, n)};
    }
};

void add_sizes(CLI::App* sub, Options& o)
{
    o.p_opt = sub->add_option("--p", o.p, "Exponent p >= 1 or 'inf'");
    o.level_opt = sub->add_option("--level", o.level, "Dyadic level (block count S for disc-rademacher)")
                      ->check(CLI::NonNegativeNumber);
    o.m_opt = sub->add_option("--m", o.m, "Number of vectors")->check(CLI::NonNegativeNumber);
    o.n_opt = sub->add_option("--n", o.n, "Order or dimension")->check(CLI::NonNegativeNumber);
}

void add_search(CLI::App* sub, Options& o)
{
    sub->add_option("--budget", o.budget, "Ratio evaluations per estimate")
        ->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Random seed");
}

void add_output(CLI::App* sub, Options& o)
{
    sub->add_option("--out", o.out, "Write the report to this path instead of stdout");
    auto* json = sub->add_flag("--json", o.json, "JSON output");
    auto* csv = sub->add_flag("--csv", o.csv, "CSV output");
    json->excludes(csv);
}

class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : os_(&fallback)
    {
        if (!path.empty()) {
            file_.open(path);
            if (!file_)
                throw std::runtime_error("cannot open '" + path + "' for writing");
            os_ = &file_;
        }
    }
    std::ostream& stream() { return *os_; }

private:
    std::ofstream file_;
    std::ostream* os_;
};

void write_system_json(std::ostream& os, const System& s)
{
    nlohmann::ordered_json j;
    j["name"] = s.name();
    j["space"] = {{"kind", to_string(s.space().kind())},
                  {"p", s.space().p().to_string()},
                  {"size_param", s.space().size_param()}};
    j["vectors"] = nlohmann::ordered_json::array();
    for (int k = 0; k < s.size(); ++k) {
        const Eigen::VectorXd v = s.vectors().row(k).transpose();
        j["vectors"].push_back(std::vector<double>(v.data(), v.data() + v.size()));
    }
    os << j.dump(2) << '\n';
}

void write_estimate_csv(std::ostream& os, const ConstantEstimate& e)
{
    os << "kind,system,lower,upper,upper_provenance,strategy,budget,evaluations,seed,complete\n";
    os << to_string(e.kind) << ',' << e.system << ',' << format_number(e.lower) << ','
       << (e.upper ? format_number(*e.upper) : std::string{}) << ','
       << to_string(e.upper_provenance) << ',' << to_string(e.strategy) << ',' << e.budget << ','
       << e.evaluations << ',' << e.seed << ',' << (e.complete ? "true" : "false") << '\n';
}

void write_outcomes_csv(std::ostream& os, const std::vector<CheckOutcome>& outcomes)
{
    os << "id,passed,quantity,measured,bound\n";
    for (const auto& o : outcomes) {
        for (const auto& [k, v] : o.measured) {
            const auto b = o.bound.find(k);
            os << o.id << ',' << (o.passed ? "true" : "false") << ',' << k << ','
               << format_number(v) << ',' << (b != o.bound.end() ? format_number(b->second) : "")
               << '\n';
        }
    }
}

int cmd_system(const Options& o, std::ostream& out)
{
    Sink sink(o.out, out);
    if (o.name == "hadamard" || o.name == "walsh-matrix") {
        const int n = need(Options::get(o.n_opt, o.n), "--n", o.name);
        if (o.name == "hadamard")
            write_csv(sink.stream(), hadamard(n));
        else
            write_csv(sink.stream(), walsh_matrix(n).matrix);
        return 0;
    }
    const System s = named_system(o.name, o.system_args());
    if (o.json)
        write_system_json(sink.stream(), s);
    else
        write_csv(sink.stream(), s);
    return 0;
}

int cmd_constant(const Options& o, const std::string& invocation, std::ostream& out)
{
    if (o.name.empty() == o.in.empty())
        throw std::invalid_argument("constant needs exactly one of --system and --in");
    std::optional<System> s;
    if (!o.in.empty()) {
        std::ifstream file(o.in);
        if (!file)
            throw std::invalid_argument("cannot open '" + o.in + "'");
        s.emplace(read_system_csv(file, o.in));
    } else {
        s.emplace(named_system(o.name, o.system_args()));
    }
    const ConstantKind kind = parse_constant_kind(o.kind);
    const Strategy strategy = parse_strategy(o.strategy);
    const ConstantEstimate est =
        o.permutations > 0
            ? permuted_estimate(*s, kind, PermutationMode::random(o.permutations), strategy,
                                o.budget, o.seed)
            : estimate_constant(*s, kind, strategy, o.budget, o.seed);
    Sink sink(o.out, out);
    if (o.csv)
        write_estimate_csv(sink.stream(), est);
    else
        sink.stream() << make_report(invocation, {}, {est}).dump(2) << '\n';
    return 0;
}

int cmd_checks(const Options& o, const std::vector<std::string>& ids, const std::string& invocation,
               std::ostream& out)
{
    for (const auto& id : ids)
        if (!is_check_id(id))
            throw UnknownNameError("unknown check '" + id + "'");
    SuiteConfig config;
    config.seed = o.seed;
    config.budget = o.budget;
    config.selection = ids;
    config.parallel = !o.serial;
    if (o.tol_opt != nullptr && o.tol_opt->count() > 0)
        config.tolerance = o.tol;
    config.trials = Options::get(o.trials_opt, o.trials);
    if (o.p_opt != nullptr && o.p_opt->count() > 0) {
        const Exponent p = Exponent::parse(o.p);
        config.p = p.is_infinite() ? std::numeric_limits<double>::infinity() : p.value();
    }
    config.level = Options::get(o.level_opt, o.level);
    config.m = Options::get(o.m_opt, o.m);
    config.n = Options::get(o.n_opt, o.n);

    const auto outcomes = run_suite(config);
    Sink sink(o.out, out);
    if (o.csv)
        write_outcomes_csv(sink.stream(), outcomes);
    else
        sink.stream() << make_report(invocation, outcomes, {}).dump(2) << '\n';
    return all_passed(outcomes) ? 0 : 1;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::string invocation = "bibasis";
    for (int i = 1; i < argc; ++i)
        invocation += std::string(" ") + argv[i];

    CLI::App app{"Basis, bibasis, unconditional and absolute constants of finite systems",
                 "bibasis"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.require_subcommand(1);

    Options o;
    std::string check_id;

    auto* system = app.add_subcommand("system", "Write a named system as CSV");
    system->add_option("name", o.name, "System name")->required();
    add_sizes(system, o);
    add_output(system, o);

    auto* constant = app.add_subcommand("constant", "Estimate a constant of a system");
    constant->add_option("--system", o.name, "System name");
    constant->add_option("--in", o.in, "System CSV file");
    add_sizes(constant, o);
    constant->add_option("--kind", o.kind, "basis, bibasis, unc-bibasis, unconditional, absolute");
    constant->add_option("--strategy", o.strategy,
                         "exhaustive-signs, grid-sphere, multistart-ascent");
    constant->add_option("--permutations", o.permutations,
                         "Also search this many random reorderings")
        ->check(CLI::NonNegativeNumber);
    add_search(constant, o);
    add_output(constant, o);

    auto* check = app.add_subcommand("check", "Run one named check");
    check->add_option("id", check_id, "Check id")->required();
    add_sizes(check, o);
    add_search(check, o);
    o.trials_opt = check->add_option("--trials", o.trials, "Trials for randomized checks")
                       ->check(CLI::PositiveNumber);
    o.tol_opt = check->add_option("--tol", o.tol, "Comparison tolerance")
                    ->check(CLI::NonNegativeNumber);
    add_output(check, o);

    auto* suite = app.add_subcommand("suite", "Run every check");
    add_search(suite, o);
    o.only_opt = suite->add_option("--only", o.only, "Run only these check ids");
    suite->add_flag("--serial", o.serial, "Run checks one after another");
    add_output(suite, o);

    // Only the parsed subcommand's options may be consulted.
    const auto reset_unused = [&] {
        if (!check->parsed()) {
            o.trials_opt = nullptr;
            o.tol_opt = nullptr;
        }
        for (auto* sub : {system, constant, check})
            if (sub->parsed()) {
                o.p_opt = sub->get_option("--p");
                o.level_opt = sub->get_option("--level");
                o.m_opt = sub->get_option("--m");
                o.n_opt = sub->get_option("--n");
            }
        if (suite->parsed())
            o.p_opt = o.level_opt = o.m_opt = o.n_opt = nullptr;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    reset_unused();

    try {
        if (system->parsed())
            return cmd_system(o, out);
        if (constant->parsed())
            return cmd_constant(o, invocation, out);
        if (check->parsed())
            return cmd_checks(o, {check_id}, invocation, out);
        const auto ids = o.only_opt->count() > 0 ? o.only : check_ids();
        return cmd_checks(o, ids, invocation, out);
    } catch (const std::invalid_argument& e) {
        err << "bibasis: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "bibasis: " << e.what() << '\n';
        return 1;
    }
}

} // namespace bibasis
