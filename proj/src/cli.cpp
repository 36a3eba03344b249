#include "jmbell/cli.hpp"

#include <functional>
#include <iomanip>
#include <ostream>

#include "jmbell/compat.hpp"
#include "jmbell/errors.hpp"

namespace jmbell {

using nlohmann::json;

namespace {

int guarded(std::ostream &err, const std::function<int()> &body) {
    try {
        return body();
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return exit_code::parse;
    } catch (const TrivialStructure &e) {
        err << "trivial structure: " << e.what() << "\n";
        return exit_code::trivial;
    } catch (const InvalidStructure &e) {
        err << "invalid structure: " << e.what() << "\n";
        return exit_code::invalid;
    } catch (const DomainError &e) {
        err << "invalid parameter: " << e.what() << "\n";
        return exit_code::invalid;
    } catch (const TooManyVertices &e) {
        err << "too many vertices: " << e.what() << "\n";
        return exit_code::invalid;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << "\n";
        return exit_code::numerical;
    }
}

FeasibilityOptions feasibility_options(const RunConfig &config) {
    FeasibilityOptions o;
    o.psd_tol = config.tol;
    o.marginal_tol = config.tol / 10.0;
    o.max_iter = config.max_iter;
    o.size_limit = config.compat_limit;
    return o;
}

double max_abs_diff(const CorrelationTable &a, const CorrelationTable &b) {
    return std::max({(a.pA - b.pA).cwiseAbs().maxCoeff(), (a.pB - b.pB).cwiseAbs().maxCoeff(),
                     (a.p00 - b.p00).cwiseAbs().maxCoeff()});
}

std::vector<std::string> declared_labels(const JmStructure &s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.vertex_count; ++i)
        out.push_back(s.label(i));
    return out;
}

} // namespace

RealizeReport build_realize_report(const StructureInput &input, const RunConfig &config,
                                   std::ostream &err) {
    RealizeConfig rc;
    rc.q0_squared = config.q0_squared ? config.q0_squared : input.q0_squared;
    rc.epsilon = config.epsilon ? config.epsilon : input.epsilon;
    const auto stacked = realize(input.structure, rc);

    RealizeReport report;
    report.vertices = declared_labels(input.structure);
    report.global = global_value(stacked);

    try {
        const auto m = materialize(stacked, config.materialize_limit);
        report.materialize.performed = true;
        report.materialize.total_value = m.value.value;
        report.materialize.delta = m.value.value - report.global.total_value;
        report.materialize.max_table_delta = max_abs_diff(m.table, weighted_table(stacked));
    } catch (const MaterializeLimitExceeded &e) {
        err << "warning: " << e.what() << "; reporting the weighted sum only\n";
        report.materialize.reason = e.what();
    }

    for (const auto &b : report.global.blocks) {
        if (b.N < 3)
            continue;
        DiscrepancyNote n;
        n.block_id = b.block_id;
        n.N = b.N;
        for (const auto &c : compare_analytic(b.N, b.q0_squared, b.epsilon)) {
            if (std::abs(c.delta()) >= n.max_formula_delta) {
                n.max_formula_delta = std::abs(c.delta());
                n.worst_formula = c.formula;
            }
        }
        n.at_cancelling_epsilon =
            std::abs(b.epsilon - optimal_epsilon<double>(b.N, b.q0_squared)) <= 1e-12;
        n.closed_form_value = analytic_block_value(b.N, b.q0_squared);
        n.unscaled_closed_form = unscaled_block_value(b.N, b.q0_squared);
        n.trace_value = b.local_value;
        report.discrepancies.push_back(std::move(n));
    }

    if (config.shots > 0) {
        const auto sampled = sample_statistics(stacked, config.shots, config.seed);
        report.sampling = SamplingSummary{config.shots, config.seed, cg_value(sampled).value};
    }
    return report;
}

int cmd_validate(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto input = load_structure(config.input);
        const auto report = validate(input.structure);
        if (config.format == OutputFormat::Json) {
            json issues = json::array();
            for (const auto &i : report.issues)
                issues.push_back({{"kind", to_string(i.kind)}, {"edge", i.edge}, {"message", i.message}});
            out << json{{"valid", report.valid()}, {"issues", issues}}.dump(2) << "\n";
        } else if (report.valid()) {
            out << "valid: " << input.structure.vertex_count << " vertices, "
                << input.structure.edges.size() << " maximal compatible sets\n";
        } else {
            for (const auto &i : report.issues)
                out << to_string(i.kind) << ": " << i.message << "\n";
        }
        return report.valid() ? exit_code::ok : exit_code::invalid;
    });
}

int cmd_decompose(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto input = load_structure(config.input);
        require_valid(input.structure);
        const auto sets = minimal_incompatible_sets(input.structure);
        if (config.format == OutputFormat::Json) {
            json list = json::array();
            for (const auto &s : sets) {
                std::vector<std::size_t> members;
                for (auto m : s.members)
                    members.push_back(m + 1);
                list.push_back({{"members", members}, {"N", s.size()}});
            }
            out << json{{"trivial", sets.empty()}, {"sets", list}}.dump(2) << "\n";
        } else {
            for (const auto &s : sets)
                out << format_set(s.members) << " N=" << s.size() << "\n";
        }
        if (sets.empty()) {
            err << "structure is trivial: all vertices are jointly compatible\n";
            return exit_code::trivial;
        }
        return exit_code::ok;
    });
}

int cmd_realize(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto input = load_structure(config.input);
        const auto report = build_realize_report(input, config, err);
        if (config.format == OutputFormat::Json)
            out << emit_json(report);
        else
            out << emit_text(report);
        if (report.materialize.performed && std::abs(report.materialize.delta) > 1e-9)
            throw NumericalFailure("materialized and weighted-sum values disagree");
        return report.global.violation() ? exit_code::ok : exit_code::unverified;
    });
}

int cmd_check_compat(const RunConfig &config, std::ostream &out, std::ostream &err) {
    return guarded(err, [&] {
        const auto input = load_structure(config.input);
        const auto &structure = input.structure;
        require_valid(structure);

        std::vector<DichotomicPovm> alice;
        GlobalReport witnesses;
        if (input.povms) {
            for (std::size_t i = 0; i < input.povms->size(); ++i) {
                auto povm = DichotomicPovm::from_effect((*input.povms)[i]);
                const auto check = verify_povm({povm.effect0, povm.effect1}, 1e-9);
                if (!check.valid)
                    throw InvalidStructure("POVM of vertex " + structure.label(i) + ": " +
                                           check.issues.front());
                alice.push_back(std::move(povm));
            }
        } else {
            const auto stacked = realize(structure);
            for (const auto &e : direct_sum_alice_effects(stacked))
                alice.push_back(DichotomicPovm::from_effect(e));
            witnesses = global_value(stacked);
        }

        const auto options = feasibility_options(config);
        bool all_ok = true;
        json edges = json::array();
        for (const auto &edge_in : structure.edges) {
            std::vector<std::size_t> edge = edge_in;
            std::sort(edge.begin(), edge.end());
            std::vector<DichotomicPovm> subset;
            for (auto v : edge)
                subset.push_back(alice[v]);
            json item{{"members", json::array()}};
            for (auto v : edge)
                item["members"].push_back(v + 1);
            try {
                const auto r = check_joint_measurability(PovmSet::from_dichotomic(subset), options);
                item["status"] = to_string(r.status);
                item["iterations"] = r.candidate.iterations;
                item["residual_psd"] = r.candidate.residual_psd;
                item["residual_marginal"] = r.candidate.residual_marginal;
                all_ok = all_ok && r.compatible();
            } catch (const LimitExceeded &e) {
                item["status"] = "LimitExceeded";
                item["reason"] = e.what();
                all_ok = false;
            }
            edges.push_back(std::move(item));
        }

        json sets = json::array();
        for (const auto &b : witnesses.blocks) {
            std::vector<std::size_t> members;
            for (auto m : b.members)
                members.push_back(m + 1);
            const bool positive = b.global_contribution > 0.0;
            all_ok = all_ok && positive;
            sets.push_back({{"members", members},
                            {"N", b.N},
                            {"witness", b.global_contribution},
                            {"positive", positive}});
        }

        if (config.format == OutputFormat::Json) {
            out << json{{"edges", edges}, {"minimal_incompatible_sets", sets}, {"all_certified", all_ok}}
                       .dump(2)
                << "\n";
        } else {
            out << std::scientific << std::setprecision(3);
            for (const auto &e : edges) {
                out << "edge " << format_set([&] {
                    std::vector<std::size_t> m;
                    for (auto v : e["members"])
                        m.push_back(v.get<std::size_t>() - 1);
                    return m;
                }()) << ": " << e["status"].get<std::string>();
                if (e.contains("iterations"))
                    out << " (iterations " << e["iterations"].get<std::size_t>() << ", psd residual "
                        << e["residual_psd"].get<double>() << ", marginal residual "
                        << e["residual_marginal"].get<double>() << ")";
                out << "\n";
            }
            for (const auto &s : sets) {
                std::vector<std::size_t> m;
                for (auto v : s["members"])
                    m.push_back(v.get<std::size_t>() - 1);
                out << "set " << format_set(m) << " N=" << s["N"].get<int>() << ": witness "
                    << s["witness"].get<double>() << (s["positive"].get<bool>() ? " positive" : " NOT positive")
                    << "\n";
            }
            out << (all_ok ? "all relations certified\n" : "some relations not certified\n");
        }
        return all_ok ? exit_code::ok : exit_code::unverified;
    });
}

} // namespace jmbell
