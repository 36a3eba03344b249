#include "jmbell/report.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include "jmbell/errors.hpp"

namespace jmbell {

using nlohmann::json;

namespace {

std::string vertex_name(const json &v) {
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number_integer())
        return std::to_string(v.get<long long>());
    throw ParseError("vertex names must be strings or integers, got " + v.dump());
}

std::optional<double> optional_number(const json &doc, const char *key, bool allow_auto) {
    if (!doc.contains(key) || doc[key].is_null())
        return std::nullopt;
    const auto &v = doc[key];
    if (allow_auto && v.is_string() && v.get<std::string>() == "auto")
        return std::nullopt;
    if (v.is_string() && v.get<std::string>() == "default")
        return std::nullopt;
    if (!v.is_number())
        throw ParseError(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

HermitianOperator parse_matrix(const json &m, std::size_t index) {
    if (!m.is_array() || m.empty())
        throw ParseError("povms[" + std::to_string(index) + "] must be a non-empty list of rows");
    const auto d = Eigen::Index(m.size());
    HermitianOperator out(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const auto &row = m[std::size_t(r)];
        if (!row.is_array() || Eigen::Index(row.size()) != d)
            throw ParseError("povms[" + std::to_string(index) + "] is not square");
        for (Eigen::Index c = 0; c < d; ++c) {
            const auto &e = row[std::size_t(c)];
            if (e.is_number())
                out(r, c) = e.get<double>();
            else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
                out(r, c) = {e[0].get<double>(), e[1].get<double>()};
            else
                throw ParseError("povms[" + std::to_string(index) + "] has a malformed entry");
        }
    }
    return out;
}

} // namespace

StructureInput parse_structure(const json &doc) {
    if (!doc.is_object())
        throw ParseError("structure file must hold a JSON object");
    if (!doc.contains("vertices") || !doc["vertices"].is_array())
        throw ParseError("missing \"vertices\" array");
    if (!doc.contains("maximal_compatible_sets") || !doc["maximal_compatible_sets"].is_array())
        throw ParseError("missing \"maximal_compatible_sets\" array");

    StructureInput in;
    auto &s = in.structure;
    std::map<std::string, std::size_t> index;
    for (const auto &v : doc["vertices"]) {
        const auto name = vertex_name(v);
        if (!index.emplace(name, s.labels.size()).second)
            throw ParseError("vertex \"" + name + "\" is declared twice");
        s.labels.push_back(name);
    }
    s.vertex_count = s.labels.size();

    for (const auto &edge : doc["maximal_compatible_sets"]) {
        if (!edge.is_array())
            throw ParseError("every compatible set must be an array");
        std::vector<std::size_t> members;
        for (const auto &v : edge) {
            const auto name = vertex_name(v);
            auto it = index.find(name);
            if (it == index.end()) {
                it = index.emplace(name, s.labels.size()).first;
                s.labels.push_back(name);
            }
            members.push_back(it->second);
        }
        s.edges.push_back(std::move(members));
    }

    in.q0_squared = optional_number(doc, "q0_squared", false);
    in.epsilon = optional_number(doc, "epsilon", true);
    if (doc.contains("povms") && !doc["povms"].is_null()) {
        const auto &p = doc["povms"];
        if (!p.is_array() || p.size() != s.vertex_count)
            throw ParseError("\"povms\" must list one effect per vertex");
        std::vector<HermitianOperator> effects;
        for (std::size_t i = 0; i < p.size(); ++i)
            effects.push_back(parse_matrix(p[i], i));
        in.povms = std::move(effects);
    }
    return in;
}

StructureInput parse_structure_text(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    try {
        return parse_structure(doc);
    } catch (const json::exception &e) {
        throw ParseError(e.what());
    }
}

StructureInput load_structure(const std::string &path) {
    std::ifstream file(path);
    if (!file)
        throw ParseError("cannot read " + path);
    std::stringstream buf;
    buf << file.rdbuf();
    return parse_structure_text(buf.str());
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> one_based(const std::vector<std::size_t> &members) {
    std::vector<std::size_t> out;
    for (auto m : members)
        out.push_back(m + 1);
    return out;
}

std::vector<std::size_t> zero_based(const std::vector<std::size_t> &members) {
    std::vector<std::size_t> out;
    for (auto m : members) {
        if (m == 0)
            throw ParseError("report members are 1-based");
        out.push_back(m - 1);
    }
    return out;
}

} // namespace

void to_json(json &j, const BlockContribution &c) {
    j = json{{"block_id", c.block_id},
             {"members", one_based(c.members)},
             {"N", c.N},
             {"dim", c.dim},
             {"weight", c.weight},
             {"q0_squared", c.q0_squared},
             {"epsilon", c.epsilon},
             {"eta", c.eta},
             {"steering_setting", c.steering_setting ? json(*c.steering_setting + 1) : json()},
             {"local_value", c.local_value},
             {"global_contribution", c.global_contribution}};
}

void from_json(const json &j, BlockContribution &c) {
    c.block_id = j.at("block_id").get<std::size_t>();
    c.members = zero_based(j.at("members").get<std::vector<std::size_t>>());
    c.N = j.at("N").get<int>();
    c.dim = j.at("dim").get<int>();
    c.weight = j.at("weight").get<double>();
    c.q0_squared = j.at("q0_squared").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.eta = j.at("eta").get<double>();
    const auto &s = j.at("steering_setting");
    c.steering_setting = s.is_null() ? std::nullopt
                                     : std::optional<std::size_t>(s.get<std::size_t>() - 1);
    c.local_value = j.at("local_value").get<double>();
    c.global_contribution = j.at("global_contribution").get<double>();
}

void to_json(json &j, const GlobalReport &r) {
    j = json{{"blocks", r.blocks},
             {"total_value", r.total_value},
             {"lhv_bound", r.lhv_bound},
             {"verdict", r.violation() ? "VIOLATION" : "NO_VIOLATION"}};
}

void from_json(const json &j, GlobalReport &r) {
    r.blocks = j.at("blocks").get<std::vector<BlockContribution>>();
    r.total_value = j.at("total_value").get<double>();
    r.lhv_bound = j.at("lhv_bound").get<double>();
}

void to_json(json &j, const MaterializeCheck &m) {
    j = json{{"performed", m.performed},
             {"reason", m.reason},
             {"total_value", m.total_value},
             {"delta", m.delta},
             {"max_table_delta", m.max_table_delta}};
}

void from_json(const json &j, MaterializeCheck &m) {
    m.performed = j.at("performed").get<bool>();
    m.reason = j.at("reason").get<std::string>();
    m.total_value = j.at("total_value").get<double>();
    m.delta = j.at("delta").get<double>();
    m.max_table_delta = j.at("max_table_delta").get<double>();
}

void to_json(json &j, const DiscrepancyNote &n) {
    j = json{{"block_id", n.block_id},
             {"N", n.N},
             {"worst_formula", n.worst_formula},
             {"max_formula_delta", n.max_formula_delta},
             {"at_cancelling_epsilon", n.at_cancelling_epsilon},
             {"closed_form_value", n.closed_form_value},
             {"unscaled_closed_form", n.unscaled_closed_form},
             {"trace_value", n.trace_value}};
}

void from_json(const json &j, DiscrepancyNote &n) {
    n.block_id = j.at("block_id").get<std::size_t>();
    n.N = j.at("N").get<int>();
    n.worst_formula = j.at("worst_formula").get<std::string>();
    n.max_formula_delta = j.at("max_formula_delta").get<double>();
    n.at_cancelling_epsilon = j.at("at_cancelling_epsilon").get<bool>();
    n.closed_form_value = j.at("closed_form_value").get<double>();
    n.unscaled_closed_form = j.at("unscaled_closed_form").get<double>();
    n.trace_value = j.at("trace_value").get<double>();
}

void to_json(json &j, const SamplingSummary &s) {
    j = json{{"shots", s.shots}, {"seed", s.seed}, {"value", s.value}};
}

void from_json(const json &j, SamplingSummary &s) {
    s.shots = j.at("shots").get<std::uint64_t>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.value = j.at("value").get<double>();
}

void to_json(json &j, const RealizeReport &r) {
    j = json{{"vertices", r.vertices},
             {"report", r.global},
             {"materialize", r.materialize},
             {"discrepancies", r.discrepancies},
             {"sampling", r.sampling ? json(*r.sampling) : json()}};
}

void from_json(const json &j, RealizeReport &r) {
    r.vertices = j.at("vertices").get<std::vector<std::string>>();
    r.global = j.at("report").get<GlobalReport>();
    r.materialize = j.at("materialize").get<MaterializeCheck>();
    r.discrepancies = j.at("discrepancies").get<std::vector<DiscrepancyNote>>();
    const auto &s = j.at("sampling");
    r.sampling = s.is_null() ? std::nullopt : std::optional<SamplingSummary>(s.get<SamplingSummary>());
}

std::string emit_json(const RealizeReport &report) { return json(report).dump(2) + "\n"; }

RealizeReport parse_report(const std::string &text) {
    try {
        return json::parse(text).get<RealizeReport>();
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

std::string emit_text(const RealizeReport &r) {
    std::ostringstream os;
    os << std::setprecision(7) << std::fixed;
    os << "vertices: " << r.vertices.size() << ", blocks: " << r.global.blocks.size() << "\n";
    for (const auto &b : r.global.blocks) {
        os << "block " << b.block_id << " " << format_set(b.members) << " N=" << b.N
           << " dim=" << b.dim << " weight=" << b.weight;
        if (b.N >= 3)
            os << " q0^2=" << b.q0_squared << " eps=" << b.epsilon << " eta=" << b.eta;
        else
            os << " (CHSH block)";
        if (b.steering_setting)
            os << " steering@" << *b.steering_setting + 1;
        os << "\n  local I=" << b.local_value << " global contribution=" << b.global_contribution
           << "\n";
    }
    os << "total I_vv22 = " << r.global.total_value << " (local bound " << r.global.lhv_bound
       << ")\n";
    os << "verdict: " << (r.global.violation() ? "VIOLATION" : "NO VIOLATION") << "\n";
    os << std::scientific << std::setprecision(3);
    if (r.materialize.performed)
        os << "materialized check: delta=" << r.materialize.delta
           << " max table delta=" << r.materialize.max_table_delta << "\n";
    else
        os << "materialized check skipped: " << r.materialize.reason << "\n";
    for (const auto &n : r.discrepancies) {
        os << "closed forms, block " << n.block_id << " (N=" << n.N
           << "): max formula delta=" << n.max_formula_delta << " [" << n.worst_formula << "]";
        if (n.at_cancelling_epsilon)
            os << "; eta-scaled closed form " << n.closed_form_value << ", unscaled "
               << n.unscaled_closed_form << ", trace " << n.trace_value;
        os << "\n";
    }
    if (r.sampling)
        os << "sampled I (" << r.sampling->shots << " shots/pair, seed " << r.sampling->seed
           << ") = " << r.sampling->value << "\n";
    return os.str();
}

} // namespace jmbell
