#pragma once

#include <set>
#include <string>
#include <vector>

#include "vassan/compiler.hpp"
#include "vassan/core.hpp"
#include "vassan/dsl.hpp"
#include "vassan/formulas.hpp"
#include "vassan/growth_vector.hpp"

namespace vassan {

struct GeneratedInstance {
    CounterVass vass;
    std::string counter;  // the designated counter of the construction
    ProgramAst program;   // empty for hand-built models
};

namespace detail {

class ProgramWriter {
public:
    std::string declare(const std::string& name) {
        if (!seen_.insert(name).second) throw ModelError("generator declared '" + name + "' twice");
        ast.declared.push_back(name);
        return name;
    }
    void emit(Statement s) { ast.body.push_back(std::move(s)); }

    ProgramAst ast;

private:
    std::set<std::string> seen_;
};

inline std::string literal_counter(const std::string& prefix, int lit) {
    return prefix + (lit > 0 ? "x" : "nx") + std::to_string(lit > 0 ? lit : -lit);
}

// Emits the squaring chain, the valuation choices, and the clause mins. `owner_of(u)` gives the
// player who chooses the value of variable u. Returns the name of the last s counter.
template <typename OwnerOf>
std::string emit_sat_prefix(ProgramWriter& w, const CnfFormula& phi, int k, const std::string& prefix,
                            const std::vector<int>& variable_order, OwnerOf owner_of) {
    check_formula(phi);
    auto d = [&](int i) { return prefix + "d" + std::to_string(i); };
    auto e = [&](int i) { return prefix + "e" + std::to_string(i); };
    auto s = [&](std::size_t i) { return prefix + "s" + std::to_string(i); };
    for (int i = 1; i <= k; ++i) w.declare(d(i));
    for (int i = 1; i < k; ++i) w.declare(e(i));
    for (int u = 1; u <= phi.variable_count; ++u) {
        w.declare(literal_counter(prefix, u));
        w.declare(literal_counter(prefix, -u));
    }
    for (std::size_t i = 0; i <= phi.clauses.size(); ++i) w.declare(s(i));

    for (int i = 2; i <= k; ++i) w.emit(Statement::mul(d(i), d(i - 1), e(i - 1)));
    for (int u : variable_order)
        w.emit(Statement::choose(owner_of(u), {{Statement::copy(literal_counter(prefix, u), d(k))},
                                               {Statement::copy(literal_counter(prefix, -u), d(k))}}));
    w.emit(Statement::copy(s(0), d(k)));
    for (std::size_t i = 1; i <= phi.clauses.size(); ++i) {
        std::vector<std::vector<Statement>> blocks;
        for (int lit : phi.clauses[i - 1]) blocks.push_back({Statement::min(s(i), literal_counter(prefix, lit), s(i - 1))});
        w.emit(Statement::choose(Player::demon, std::move(blocks)));
    }
    return s(phi.clauses.size());
}

inline std::vector<int> natural_order(int v) {
    std::vector<int> order;
    for (int u = 1; u <= v; ++u) order.push_back(u);
    return order;
}

inline GeneratedInstance finish(ProgramWriter& w, std::string counter) {
    auto compiled = compile_program(w.ast, {.close_with_halt_loop = true});
    return {std::move(compiled.vass), std::move(counter), std::move(w.ast)};
}

}  // namespace detail

inline GeneratedInstance gen_sat(const CnfFormula& phi, int k) {
    if (k < 2) throw ModelError("gen_sat needs k >= 2");
    detail::ProgramWriter w;
    auto sm = detail::emit_sat_prefix(w, phi, k, "", detail::natural_order(phi.variable_count),
                                      [](int) { return Player::demon; });
    w.emit(Statement::mul_by_n(w.declare("f"), sm));
    return detail::finish(w, sm);
}

// Length variant: the designated counter is informational (the final product target f).
inline GeneratedInstance gen_satunsat_length(const CnfFormula& phi, const CnfFormula& psi, int k) {
    if (k < 3) throw ModelError("gen_satunsat_length needs k >= 3");
    detail::ProgramWriter w;
    auto demon = [](int) { return Player::demon; };
    auto sphi = detail::emit_sat_prefix(w, phi, k - 1, "p_", detail::natural_order(phi.variable_count), demon);
    auto spsi = detail::emit_sat_prefix(w, psi, k - 1, "q_", detail::natural_order(psi.variable_count), demon);
    auto a = w.declare("a"), b = w.declare("b"), c = w.declare("c"), d = w.declare("d");
    auto e = w.declare("e"), f = w.declare("f");
    w.emit(Statement::copy(a, sphi));
    w.emit(Statement::copy(b, spsi));
    w.emit(Statement::mul(e, a, b));
    w.emit(Statement::copy(c, spsi));
    w.emit(Statement::copy(d, spsi));
    w.emit(Statement::mul(f, c, d));
    return detail::finish(w, f);
}

// Counter variant. The min combines the copy of s(phi) with b = s(psi) * d_{k-1}; the designated
// counter is the min target c.
inline GeneratedInstance gen_satunsat_counter(const CnfFormula& phi, const CnfFormula& psi, int k) {
    if (k < 2) throw ModelError("gen_satunsat_counter needs k >= 2");
    detail::ProgramWriter w;
    auto demon = [](int) { return Player::demon; };
    auto sphi = detail::emit_sat_prefix(w, phi, k + 1, "p_", detail::natural_order(phi.variable_count), demon);
    auto spsi = detail::emit_sat_prefix(w, psi, k + 1, "q_", detail::natural_order(psi.variable_count), demon);
    auto dn = [](int i) { return "d" + std::to_string(i); };
    auto en = [](int i) { return "e" + std::to_string(i); };
    for (int i = 1; i <= k - 1; ++i) w.declare(dn(i));
    for (int i = 1; i < k - 1; ++i) w.declare(en(i));
    auto a = w.declare("a"), b = w.declare("b"), c = w.declare("c");
    for (int i = 2; i <= k - 1; ++i) w.emit(Statement::mul(dn(i), dn(i - 1), en(i - 1)));
    w.emit(Statement::copy(a, sphi));
    w.emit(Statement::mul(b, spsi, dn(k - 1)));
    w.emit(Statement::min(c, a, b));
    return detail::finish(w, c);
}

// Universal variables are chosen at angelic states; everything else is demonic.
inline GeneratedInstance gen_qbf(const QbfFormula& psi, int k) {
    if (k < 2) throw ModelError("gen_qbf needs k >= 2");
    check_formula(psi);
    detail::ProgramWriter w;
    std::vector<int> order;
    std::set<int> universal;
    for (auto [x, y] : psi.blocks) {
        order.push_back(x);
        order.push_back(y);
        universal.insert(x);
    }
    auto sm = detail::emit_sat_prefix(w, psi.matrix, k, "", order,
                                      [&](int u) { return universal.count(u) ? Player::angel : Player::demon; });
    w.emit(Statement::mul_by_n(w.declare("f"), sm));
    return detail::finish(w, sm);
}

struct PumperVass {
    CounterVass vass;
    std::size_t in = 0;
    std::size_t out = 0;
    ProgramAst program;
};

// Repeated-squaring program whose i-th output counter reaches Θ(n^{v(i)}). The first d counters
// are the outputs, named by `names` (default c1..cd).
inline PumperVass gen_pumper(const GrowthVector& v, const std::vector<std::string>& names = {},
                             const CompileOptions& opts = {}) {
    const std::size_t d = v.size();
    if (d == 0) throw ModelError("pumper needs at least one counter");
    if (!names.empty() && names.size() != d) throw ModelError("pumper names do not match the growth vector");
    std::uint32_t top = 0;
    for (const auto& e : v) {
        if (e.is_infinite()) throw ModelError("pumper needs finite exponents");
        if (e.degree() < 1) throw ModelError("pumper exponents must be positive");
        top = std::max(top, e.degree());
    }
    std::size_t ell = 0;
    while ((std::uint64_t{1} << (ell + 1)) <= top) ++ell;

    detail::ProgramWriter w;
    std::set<std::string> taken;
    auto fresh = [&](const std::string& base) {
        auto name = fresh_name(base, [&](const std::string& s) { return taken.count(s) != 0; });
        taken.insert(name);
        return w.declare(name);
    };
    std::vector<std::string> c(d), s(d);
    for (std::size_t i = 0; i < d; ++i) c[i] = fresh(names.empty() ? "c" + std::to_string(i + 1) : names[i]);
    std::vector<std::string> m(ell + 1);
    for (std::size_t j = 0; j <= ell; ++j) m[j] = fresh("_m" + std::to_string(j));
    for (std::size_t i = 0; i < d; ++i) s[i] = fresh("_s" + std::to_string(i + 1));

    auto bit = [&](std::size_t i, std::size_t j) { return (v[i].degree() >> j) & 1u; };
    auto lowest = [&](std::size_t i) {
        std::size_t j = 0;
        while (!bit(i, j)) ++j;
        return j;
    };
    for (std::size_t j = 1; j <= ell; ++j) {
        w.emit(Statement::mul(m[j], m[j - 1], m[j - 1]));
        for (std::size_t i = 0; i < d; ++i) {
            if (j == 1 && bit(i, 0)) w.emit(Statement::copy(s[i], m[0]));
            if (!bit(i, j)) continue;
            if (lowest(i) == j) {
                w.emit(Statement::copy(s[i], m[j]));
            } else {
                auto a = fresh("_a" + std::to_string(i + 1) + "_" + std::to_string(j));
                w.emit(Statement::copy(a, s[i]));
                w.emit(Statement::mul(s[i], m[j], a));
            }
        }
    }
    for (std::size_t i = 0; i < d; ++i) w.emit(Statement::destructive_copy(c[i], s[i]));
    auto compiled = compile_program(w.ast, opts);
    return {std::move(compiled.vass), compiled.in, compiled.out, std::move(w.ast)};
}

// The five-state loop-nest model with counters i, j, Aux.
inline GeneratedInstance gen_example1() {
    VassBuilder b;
    for (const char* c : {"i", "j", "Aux"}) b.add_counter(c);
    for (const char* s : {"t0", "t1", "t2", "t3", "t4"}) b.add_state(s);
    b.add_transition("t0", {-1, 0, 0}, "t1");
    b.add_transition("t1", {0, -1, -1}, "t1");
    b.add_transition("t1", {0, 0, 0}, "t2");
    b.add_transition("t2", {-1, 1, 1}, "t2");
    b.add_transition("t2", {0, 0, 0}, "t3");
    b.add_transition("t3", {1, 0, -1}, "t3");
    b.add_transition("t3", {0, 0, 0}, "t4");
    b.add_transition("t4", {0, -1, 0}, "t4");
    b.add_transition("t4", {0, 0, 0}, "t0");
    return {b.build(), "i", {}};
}

// Satisfiable single clause (X1 or not X1 or X1).
inline CnfFormula tautology_clause_formula() {
    CnfFormula f;
    f.variable_count = 1;
    f.clauses.push_back({1, -1, 1});
    return f;
}

}  // namespace vassan
