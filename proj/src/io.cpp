#include "bibasis/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#ifndef BIBASIS_VERSION
#define BIBASIS_VERSION "0.0.0"
#endif

namespace bibasis {

std::string_view tool_version() noexcept
{
    return BIBASIS_VERSION;
}

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, ptr};
}

namespace {

void write_header(std::ostream& os, const Space& space)
{
    os << to_string(space.kind()) << ',' << space.p().to_string() << ',' << space.size_param()
       << '\n';
}

template <typename Row>
void write_row(std::ostream& os, const Row& row)
{
    for (Eigen::Index i = 0; i < row.size(); ++i) {
        if (i > 0)
            os << ',';
        os << format_number(row[i]);
    }
    os << '\n';
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.emplace_back();
    return fields;
}

std::string trim(std::string s)
{
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string{} : s.substr(first, last - first + 1);
}

double parse_number(const std::string& text)
{
    const std::string t = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw std::invalid_argument("CSV: cannot parse number '" + t + "'");
    return value;
}

SpacePtr read_header(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line))
        throw std::invalid_argument("CSV: missing space header");
    const auto fields = split(trim(line));
    if (fields.size() != 3)
        throw std::invalid_argument("CSV: header must be kind,p,dim_or_level");
    const double size = parse_number(fields[2]);
    if (size != std::floor(size))
        throw std::invalid_argument("CSV: dim_or_level must be an integer");
    return make_space(parse_space_kind(trim(fields[0])), Exponent::parse(trim(fields[1])),
                      static_cast<int>(size));
}

std::vector<Eigen::VectorXd> read_rows(std::istream& is, int dim)
{
    std::vector<Eigen::VectorXd> rows;
    std::string line;
    while (std::getline(is, line)) {
        line = trim(line);
        if (line.empty())
            continue;
        const auto fields = split(line);
        if (static_cast<int>(fields.size()) != dim)
            throw std::invalid_argument("CSV: row " + std::to_string(rows.size() + 1) + " has "
                                        + std::to_string(fields.size()) + " values, expected "
                                        + std::to_string(dim));
        Eigen::VectorXd v(dim);
        for (int i = 0; i < dim; ++i)
            v[i] = parse_number(fields[static_cast<std::size_t>(i)]);
        rows.push_back(std::move(v));
    }
    return rows;
}

} // namespace

void write_csv(std::ostream& os, const System& system)
{
    write_header(os, system.space());
    for (int k = 0; k < system.size(); ++k)
        write_row(os, system.vectors().row(k));
}

void write_csv(std::ostream& os, const LVec& v)
{
    write_header(os, v.space());
    write_row(os, v.coords());
}

void write_csv(std::ostream& os, const SignMatrix& matrix)
{
    const IntMatrix& e = matrix.entries();
    for (Eigen::Index r = 0; r < e.rows(); ++r) {
        for (Eigen::Index c = 0; c < e.cols(); ++c) {
            if (c > 0)
                os << ',';
            os << e(r, c);
        }
        os << '\n';
    }
}

System read_system_csv(std::istream& is, std::string name)
{
    SpacePtr space = read_header(is);
    const auto rows = read_rows(is, space->dim());
    if (rows.empty())
        throw std::invalid_argument("CSV: a system needs at least one vector");
    VectorRows vectors(static_cast<Eigen::Index>(rows.size()), space->dim());
    for (std::size_t k = 0; k < rows.size(); ++k)
        vectors.row(static_cast<Eigen::Index>(k)) = rows[k].transpose();
    return {std::move(name), std::move(space), std::move(vectors)};
}

LVec read_lvec_csv(std::istream& is)
{
    SpacePtr space = read_header(is);
    auto rows = read_rows(is, space->dim());
    if (rows.size() != 1)
        throw std::invalid_argument("CSV: a vector file holds exactly one row");
    return {std::move(space), std::move(rows.front())};
}

namespace {

nlohmann::ordered_json number(double v)
{
    // JSON has no infinities; they are written as null.
    return std::isfinite(v) ? nlohmann::ordered_json(v) : nlohmann::ordered_json(nullptr);
}

nlohmann::ordered_json number_map(const std::map<std::string, double>& values)
{
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (const auto& [k, v] : values)
        obj[k] = number(v);
    return obj;
}

} // namespace

nlohmann::ordered_json to_json(const ConstantEstimate& e)
{
    nlohmann::ordered_json j;
    j["kind"] = to_string(e.kind);
    j["system"] = e.system;
    j["lower"] = number(e.lower);
    j["upper"] = e.upper ? number(*e.upper) : nlohmann::ordered_json(nullptr);
    j["upper_provenance"] = to_string(e.upper_provenance);
    j["witness"] = std::vector<double>(e.witness.data(), e.witness.data() + e.witness.size());
    j["signs"] = e.signs;
    j["permutation"] = e.permutation;
    j["strategy"] = to_string(e.strategy);
    j["budget"] = e.budget;
    j["evaluations"] = e.evaluations;
    j["seed"] = e.seed;
    j["complete"] = e.complete;
    return j;
}

nlohmann::ordered_json to_json(const CheckOutcome& o)
{
    nlohmann::ordered_json j;
    j["id"] = o.id;
    j["paper_anchor"] = o.paper_anchor;
    j["measured"] = number_map(o.measured);
    j["bound"] = number_map(o.bound);
    j["passed"] = o.passed;
    j["tolerance"] = number(o.tolerance);
    j["runtime_ms"] = o.runtime_ms;
    j["seed"] = o.seed;
    nlohmann::ordered_json w = nlohmann::ordered_json::object();
    for (const auto& [k, v] : o.witnesses)
        w[k] = v;
    j["witnesses"] = std::move(w);
    return j;
}

nlohmann::ordered_json make_report(const std::string& invocation,
                                   const std::vector<CheckOutcome>& outcomes,
                                   const std::vector<ConstantEstimate>& estimates)
{
    nlohmann::ordered_json j;
    j["tool_version"] = std::string(tool_version());
    j["invocation"] = invocation;
    j["outcomes"] = nlohmann::ordered_json::array();
    for (const auto& o : outcomes)
        j["outcomes"].push_back(to_json(o));
    j["estimates"] = nlohmann::ordered_json::array();
    for (const auto& e : estimates)
        j["estimates"].push_back(to_json(e));
    return j;
}

} // namespace bibasis
