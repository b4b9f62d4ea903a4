#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vassan/vassan.hpp"

using namespace vassan;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_negative = 1;
constexpr int exit_input = 2;

struct MeasureSpec {
    bool length = true;
    std::string counter;
    std::string label() const { return length ? "length" : "counter=" + counter; }
};

MeasureSpec parse_measure(const std::string& s) {
    if (s == "length") return {};
    if (s.rfind("counter=", 0) == 0 && s.size() > 8) return {false, s.substr(8)};
    throw ModelError("measure must be 'length' or 'counter=<name>'");
}

struct QuerySpec {
    QueryMode mode;
    std::uint32_t k;
};

QuerySpec parse_query(const std::string& s, const CounterVass& vass) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw ModelError("query must look like theta=2");
    auto mode = parse_mode(s.substr(0, eq));
    unsigned long k = 0;
    std::size_t used = 0;
    try {
        k = std::stoul(s.substr(eq + 1), &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() - eq - 1) throw ModelError("bad exponent in query '" + s + "'");
    if (k == 0) throw ModelError("exponent k must be at least 1");
    // Finite exponents never exceed 2^(d*|Q|).
    const std::size_t bits = vass.dimension() * vass.state_count();
    if (bits < 32 && k > (1ul << bits)) throw ModelError("k exceeds the bound 2^(d*|Q|) = " + std::to_string(1ul << bits));
    if (k > 0xffffffffUL) throw ModelError("k is too large");
    return {mode, static_cast<std::uint32_t>(k)};
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');) {
        std::size_t used = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || v == 0) throw ModelError("bad list element '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ModelError("empty list");
    return out;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

CounterVass load(const std::string& path) { return parse_vass(read_file(path)); }

struct Common {
    std::string model;
    std::string report;
    std::string samples = "2,4,8,16";
    std::size_t max_nodes = 1000000;
};

GrowthOptions growth_options(const Common& c) {
    GrowthOptions o;
    o.samples = parse_list(c.samples);
    o.limits.max_nodes = c.max_nodes;
    return o;
}

// Exact whole-model maxima from every state at uniform n, fitted over the n list.
std::pair<std::vector<Sample>, FitResult> cross_check(const CounterVass& vass, const MeasureSpec& m,
                                                      const std::vector<std::uint64_t>& ns, std::size_t max_nodes) {
    std::vector<Sample> samples;
    ExploreLimits lim;
    lim.max_nodes = max_nodes;
    for (auto n : ns) {
        std::vector<Configuration> starts;
        for (std::size_t p = 0; p < vass.state_count(); ++p) starts.push_back(uniform_configuration(vass, p, BigInt(n)));
        ExploreResult r;
        try {
            r = explore_demonic_max(vass, starts, lim);
        } catch (const BudgetExceeded&) {
            break;
        }
        const auto& v = m.length ? r.max_length : r.counter_max[vass.counter_index(m.counter)];
        samples.push_back({n, double(v.value), !v.exact()});
    }
    FitResult fit;
    std::vector<Sample> exact;
    for (const auto& s : samples)
        if (!s.saturated) exact.push_back(s);
    if (exact.size() >= 2) fit = fit_exponent(exact);
    return {samples, fit};
}

int run_analyze(const Common& c, const std::string& measure_text, const std::vector<std::string>& queries,
                bool do_cross_check, const std::string& n_list) {
    auto vass = load(c.model);
    if (!vass.is_demonic()) throw ModelError("model has angelic states; use decide-game");
    auto measure = parse_measure(measure_text);
    std::vector<QuerySpec> qs;
    for (const auto& q : queries) qs.push_back(parse_query(q, vass));
    GrowthEngine engine(growth_options(c));
    std::optional<DemonicAnalysis> analysis;
    std::size_t counter;
    if (measure.length) {
        analysis.emplace(analyze_length(vass, engine));
        counter = analysis->model.vass.dimension() - 1;
    } else {
        counter = vass.counter_index(measure.counter);
        analysis.emplace(analyze_demonic(vass, engine, {counter}));
    }
    auto exponent = counter_exponent(*analysis, counter);
    std::cout << measure.label() << ": exponent " << exponent << "\n";
    auto json = report_header(vass, "analyze");
    json["measure"] = measure.label();
    json["exponent"] = exponent_json(exponent);
    json["decomposition"] = demonic_section(*analysis, engine);
    bool all_true = true;
    for (const auto& q : qs) {
        auto r = query_counter(*analysis, counter, q.k, q.mode);
        all_true = all_true && r.verdict;
        std::cout << mode_name(q.mode) << "(" << q.k << "): " << (r.verdict ? "true" : "false") << "\n";
        json["queries"].push_back(query_json(measure.label(), q.mode, q.k, r));
    }
    if (do_cross_check) {
        auto [samples, fit] = cross_check(vass, measure, parse_list(n_list), c.max_nodes);
        json["cross_check"] = cross_check_json(measure.label(), samples, fit, exponent);
        for (const auto& s : samples)
            if (s.saturated) json["saturation"].push_back("cross-check sample n=" + std::to_string(s.n) + " saturated");
        std::cout << "oracle slope " << fit.estimate << " (k=" << fit.k << (fit.stable ? ", stable" : ", unstable") << ")\n";
    }
    if (!c.report.empty()) write_file(c.report, json.dump(2) + "\n");
    return all_true ? exit_ok : exit_negative;
}

GameModel make_game_model(const CounterVass& vass, const MeasureSpec& m, std::size_t budget, std::size_t& counter) {
    LockingOptions lo;
    lo.vertex_budget = budget;
    if (m.length) {
        auto model = length_game(vass, lo);
        counter = step_counter_index(model);
        return model;
    }
    counter = vass.counter_index(m.counter);
    return counter_game(vass, counter, lo);
}

int run_decide_game(const Common& c, const std::string& measure_text, const std::vector<std::string>& queries,
                    std::size_t budget, const std::string& strategy_out) {
    auto vass = load(c.model);
    auto measure = parse_measure(measure_text);
    std::vector<QuerySpec> qs;
    for (const auto& q : queries) qs.push_back(parse_query(q, vass));
    GrowthEngine engine(growth_options(c));
    std::size_t counter = 0;
    auto model = make_game_model(vass, measure, budget, counter);
    auto opt = optimal_exponent(model, counter, engine);
    std::cout << measure.label() << ": optimal exponent " << opt.overall << "\n";
    auto json = report_header(vass, "decide-game");
    json["measure"] = measure.label();
    json["exponent"] = exponent_json(opt.overall);
    json["decomposition"] = {{"locking", locking_section(model)}};
    bool all_true = true;
    Json strategies = Json::array();
    for (const auto& q : qs) {
        auto v = decide(model, counter, q.k, q.mode, engine);
        all_true = all_true && v.verdict;
        std::cout << mode_name(q.mode) << "(" << q.k << "): " << (v.verdict ? "true" : "false") << "\n";
        json["queries"].push_back(game_query_json(measure.label(), q.mode, q.k, v, model));
        if (v.strategy && !strategy_out.empty()) write_file(strategy_out, strategy_json(model, *v.strategy).dump(2) + "\n");
    }
    if (!c.report.empty()) write_file(c.report, json.dump(2) + "\n");
    return all_true ? exit_ok : exit_negative;
}

int run_decompose(const std::string& model_path, const std::string& kind, bool dot, std::size_t budget) {
    auto vass = load(model_path);
    if (kind == "scc") {
        auto dag = scc_dag(vass);
        if (dot) {
            std::cout << to_dot(dag, vass);
            return exit_ok;
        }
        auto tr = tractability_report(dag);
        std::cout << "sccs " << dag.size() << "\nedges " << dag.edge_count() << "\nmax-degree " << tr.max_degree << "\n";
        for (std::size_t v = 0; v < dag.size(); ++v) {
            std::cout << v << (dag.root[v] ? " root" : "") << (dag.is_leaf(v) ? " leaf" : "") << " :";
            for (auto s : dag.members[v]) std::cout << " " << vass.state_name(s);
            std::cout << "\n";
        }
        return exit_ok;
    }
    if (kind == "demonic") {
        auto g = demonic_decomposition(vass);
        if (dot) {
            std::cout << to_dot(g, vass);
            return exit_ok;
        }
        std::cout << "classes " << g.size() << "\n";
        for (std::size_t v = 0; v < g.size(); ++v) {
            std::cout << v << " " << player_name(g.tag[v]) << " :";
            for (auto s : g.members[v]) std::cout << " " << vass.state_name(s);
            std::cout << "\n";
        }
        return exit_ok;
    }
    if (kind == "locking") {
        auto game = is_normalized(vass) ? vass : normalize_angelic(vass);
        LockingOptions lo;
        lo.vertex_budget = budget;
        auto ld = locking_decomposition(game, lo);
        if (dot) {
            std::cout << to_dot(ld, game);
            return exit_ok;
        }
        std::cout << "vertices " << ld.size() << "\nedges " << ld.edge_count() << "\ninitial " << ld.initial.size() << "\n";
        return exit_ok;
    }
    throw ModelError("unknown decomposition kind '" + kind + "'");
}

int run_simulate(const std::string& model_path, const std::string& n_list, const std::string& measure_text,
                 std::int64_t cap, std::size_t max_nodes, const std::string& out) {
    auto vass = load(model_path);
    auto measure = parse_measure(measure_text);
    auto game = is_normalized(vass) ? vass : normalize_angelic(vass);
    Measure m = measure.length ? Measure::length() : Measure::of_counter(game.counter_index(measure.counter));
    GameLimits limits;
    limits.value_cap = cap;
    limits.max_nodes = max_nodes;
    std::vector<ValueTable> tables;
    for (auto n : parse_list(n_list)) {
        auto sol = game_values(game, static_cast<std::int64_t>(n), m, limits);
        sol.table.per_state.resize(vass.state_count());  // fresh states from normalization are not reported
        tables.push_back(sol.table);
    }
    emit(out, values_csv(vass, tables));
    return exit_ok;
}

int run_estimate(const std::string& model_path, const std::string& counter, const std::string& v_text,
                 const std::string& samples) {
    auto vass = load(model_path);
    if (!vass.is_demonic() || !is_strongly_connected(vass)) throw ModelError("estimate needs a strongly connected demonic VASS");
    auto v = v_text.empty() ? unit_growth(vass.dimension()) : parse_growth_vector(v_text);
    if (v.size() != vass.dimension()) throw ModelError("growth vector dimension mismatch");
    auto c = vass.counter_index(counter);
    auto exp = exp_counters(vass, v);
    if (v[c].is_infinite() || exp.member[c]) {
        std::cout << counter << ": inf\n";
        return exit_ok;
    }
    GrowthOptions o;
    o.samples = parse_list(samples);
    auto est = estimate_exponent(vass, v, c, o);
    std::cout << counter << ": " << est.exponent << (est.stable ? " (stable)" : " (unstable)") << "\n";
    for (const auto& s : est.samples) std::cout << "  n=" << s.n << " value=" << std::int64_t(s.value) << "\n";
    return exit_ok;
}

int run_strategy(const Common& c, const std::string& measure_text, std::size_t budget, const std::string& induced_out,
                 const std::string& json_out) {
    auto vass = load(c.model);
    auto measure = parse_measure(measure_text);
    GrowthEngine engine(growth_options(c));
    std::size_t counter = 0;
    auto model = make_game_model(vass, measure, budget, counter);
    auto strat = synthesize_strategy(model, counter, engine);
    auto induced = induce_demonic(model, strat);
    std::cout << "locked choices " << strat.choice.size() << "\ninduced states " << induced.vass.state_count() << "\n";
    if (!json_out.empty()) write_file(json_out, strategy_json(model, strat).dump(2) + "\n");
    if (!induced_out.empty()) write_file(induced_out, emit_vass(induced.vass));
    return exit_ok;
}

std::string with_counter_comment(const GeneratedInstance& g) {
    return "# designated counter: " + g.counter + "\n" + emit_vass(g.vass);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Asymptotic termination and counter complexity of VASS and VASS games"};
    app.require_subcommand(1);

    Common common;
    std::string measure = "length", n_list = "4,8,16", kind = "scc", out, strategy_out, json_out;
    std::vector<std::string> queries;
    bool cross = false, dot = false;
    std::size_t budget = 100000;

    auto add_common = [&](CLI::App* s) {
        s->add_option("model", common.model, "VASS file")->required()->check(CLI::ExistingFile);
        s->add_option("--report", common.report, "write a JSON report");
        s->add_option("--samples", common.samples, "n values used by the exponent oracle");
        s->add_option("--max-nodes", common.max_nodes, "configuration budget per oracle run");
    };

    auto* analyze = app.add_subcommand("analyze", "analyze a demonic VASS");
    add_common(analyze);
    analyze->add_option("--measure", measure, "length or counter=<name>");
    analyze->add_option("--query", queries, "mode=k with mode upper|lower|theta");
    analyze->add_flag("--cross-check", cross, "fit the exact small-n maxima of the whole model");
    analyze->add_option("--n-list", n_list, "n values for --cross-check");

    auto* decide_game = app.add_subcommand("decide-game", "analyze a VASS game");
    add_common(decide_game);
    decide_game->add_option("--measure", measure, "length or counter=<name>");
    decide_game->add_option("--query", queries, "mode=k with mode upper|lower|theta");
    decide_game->add_option("--budget", budget, "locking decomposition vertex budget");
    decide_game->add_option("--strategy-out", strategy_out, "write the Angel strategy as JSON");

    std::string model_path;
    auto* decompose = app.add_subcommand("decompose", "print a decomposition");
    decompose->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    decompose->add_option("--kind", kind, "scc, demonic, or locking")->check(CLI::IsMember({"scc", "demonic", "locking"}));
    decompose->add_flag("--dot", dot, "emit Graphviz");
    decompose->add_option("--budget", budget, "locking decomposition vertex budget");

    std::int64_t cap = 100000;
    std::string sim_n = "2,4,8";
    auto* simulate = app.add_subcommand("simulate", "exact values at small n as CSV");
    simulate->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    simulate->add_option("--n-list", sim_n);
    simulate->add_option("--measure", measure);
    simulate->add_option("--cap", cap, "counter value cap");
    simulate->add_option("--max-nodes", common.max_nodes);
    simulate->add_option("-o,--output", out);

    std::string est_counter, est_v, est_samples = "2,4,8,16";
    auto* estimate = app.add_subcommand("estimate", "exponent of one counter of a strongly connected VASS");
    estimate->add_option("model", model_path)->required()->check(CLI::ExistingFile);
    estimate->add_option("--counter", est_counter)->required();
    estimate->add_option("--v", est_v, "growth vector such as (1,2,inf)");
    estimate->add_option("--samples", est_samples);

    auto* strategy = app.add_subcommand("strategy", "synthesize an Angel strategy and the induced VASS");
    add_common(strategy);
    strategy->add_option("--measure", measure);
    strategy->add_option("--budget", budget);
    strategy->add_option("-o,--output", out, "induced demonic VASS");
    strategy->add_option("--json", json_out, "strategy as JSON");

    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->require_subcommand(1);
    std::string cnf, cnf2, qdimacs, dsl, pump_v;
    int k = 2;
    bool emit_program = false;
    auto add_gen_out = [&](CLI::App* s) {
        s->add_option("-o,--output", out, "output file (default stdout)");
        s->add_flag("--emit-program", emit_program, "print the gadget program instead of the VASS");
    };
    auto* g_sat = gen->add_subcommand("sat");
    g_sat->add_option("--cnf", cnf)->required()->check(CLI::ExistingFile);
    g_sat->add_option("--k", k);
    add_gen_out(g_sat);
    auto* g_sul = gen->add_subcommand("satunsat-length");
    g_sul->add_option("--phi", cnf)->required()->check(CLI::ExistingFile);
    g_sul->add_option("--psi", cnf2)->required()->check(CLI::ExistingFile);
    g_sul->add_option("--k", k);
    add_gen_out(g_sul);
    auto* g_suc = gen->add_subcommand("satunsat-counter");
    g_suc->add_option("--phi", cnf)->required()->check(CLI::ExistingFile);
    g_suc->add_option("--psi", cnf2)->required()->check(CLI::ExistingFile);
    g_suc->add_option("--k", k);
    add_gen_out(g_suc);
    auto* g_qbf = gen->add_subcommand("qbf");
    g_qbf->add_option("--qdimacs", qdimacs)->required()->check(CLI::ExistingFile);
    g_qbf->add_option("--k", k);
    add_gen_out(g_qbf);
    auto* g_pump = gen->add_subcommand("pumper");
    g_pump->add_option("--v", pump_v, "growth vector such as (1,3)")->required();
    add_gen_out(g_pump);
    auto* g_ex1 = gen->add_subcommand("example1");
    add_gen_out(g_ex1);
    auto* g_prog = gen->add_subcommand("program");
    g_prog->add_option("--dsl", dsl)->required()->check(CLI::ExistingFile);
    add_gen_out(g_prog);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }

    try {
        if (*analyze) return run_analyze(common, measure, queries, cross, n_list);
        if (*decide_game) return run_decide_game(common, measure, queries, budget, strategy_out);
        if (*decompose) return run_decompose(model_path, kind, dot, budget);
        if (*simulate) return run_simulate(model_path, sim_n, measure, cap, common.max_nodes, out);
        if (*estimate) return run_estimate(model_path, est_counter, est_v, est_samples);
        if (*strategy) return run_strategy(common, measure, budget, out, json_out);
        if (*gen) {
            std::optional<GeneratedInstance> g;
            if (*g_sat) g = gen_sat(parse_dimacs(read_file(cnf)), k);
            else if (*g_sul) g = gen_satunsat_length(parse_dimacs(read_file(cnf)), parse_dimacs(read_file(cnf2)), k);
            else if (*g_suc) g = gen_satunsat_counter(parse_dimacs(read_file(cnf)), parse_dimacs(read_file(cnf2)), k);
            else if (*g_qbf) g = gen_qbf(parse_qdimacs(read_file(qdimacs)), k);
            else if (*g_ex1) g = gen_example1();
            else if (*g_pump) {
                auto p = gen_pumper(parse_growth_vector(pump_v), {}, {.close_with_halt_loop = true});
                emit(out, emit_program ? to_dsl(p.program)
                                       : "# in: " + p.vass.state_name(p.in) + "\n# out: " + p.vass.state_name(p.out) +
                                             "\n" + emit_vass(p.vass));
                return exit_ok;
            } else if (*g_prog) {
                auto ast = parse_program(read_file(dsl));
                auto compiled = compile_program(ast, {.close_with_halt_loop = true});
                emit(out, emit_program ? to_dsl(ast) : emit_vass(compiled.vass));
                return exit_ok;
            }
            if (emit_program && g->program.body.empty()) throw ModelError("this instance is not built from a program");
            emit(out, emit_program ? to_dsl(g->program) : with_counter_comment(*g));
            return exit_ok;
        }
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << " (reached " << e.reached() << ")\n";
        return exit_input;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_input;
    }
    return exit_ok;
}
