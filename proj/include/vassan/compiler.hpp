#pragma once

#include <string>
#include <utility>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/dsl.hpp"

namespace vassan {

struct CompileOptions {
    // Adds a counter `_halt` and a self-loop decrementing it on the final out-state. Without it
    // the final state of a program ending in a product or transfer has no successor.
    bool close_with_halt_loop = false;
};

struct CompiledProgram {
    CounterVass vass;
    std::size_t in = 0;
    std::size_t out = 0;
};

namespace detail {

class GadgetCompiler {
public:
    explicit GadgetCompiler(const ProgramAst& ast) {
        for (const auto& c : ast.declared) builder_.add_counter(c);
    }

    VassBuilder& builder() { return builder_; }

    // Returns (in, out) of the compiled block.
    std::pair<std::size_t, std::size_t> block(const std::vector<Statement>& body) {
        std::size_t first_in = npos_state, last_out = npos_state;
        for (const auto& s : body) {
            auto [in, out] = statement(s);
            if (first_in == npos_state) first_in = in;
            else builder_.add_sparse_transition(last_out, {}, in);
            last_out = out;
        }
        return {first_in, last_out};
    }

    std::string fresh_counter(const std::string& base) {
        return fresh_name(base, [&](const std::string& s) { return builder_.has_counter(s); });
    }

private:
    static constexpr std::size_t npos_state = static_cast<std::size_t>(-1);

    std::size_t state(std::size_t id, const char* suffix, Player owner = Player::demon) {
        auto base = "_g" + std::to_string(id) + "_" + suffix;
        return builder_.add_state(fresh_name(base, [&](const std::string& s) { return builder_.has_state(s); }), owner);
    }

    std::size_t aux(std::size_t id) { return builder_.add_counter(fresh_counter("_aux" + std::to_string(id))); }

    std::size_t c(const std::string& name) const { return builder_.counter_id(name); }

    void edge(std::size_t p, std::vector<std::pair<std::size_t, std::int64_t>> d, std::size_t q) {
        builder_.add_sparse_transition(p, std::move(d), q);
    }

    std::pair<std::size_t, std::size_t> mul(std::size_t id, std::size_t z, std::size_t x, std::size_t y) {
        auto alpha = aux(id);
        auto in = state(id, "in"), mid = state(id, "mid"), out = state(id, "out");
        edge(in, {{x, -1}, {alpha, 1}, {z, 1}}, in);
        edge(mid, {{x, 1}, {alpha, -1}, {z, 1}}, mid);
        edge(in, {{y, -1}}, mid);
        edge(mid, {{y, -1}}, in);
        edge(in, {}, out);
        edge(mid, {}, out);
        return {in, out};
    }

    std::pair<std::size_t, std::size_t> statement(const Statement& s) {
        const std::size_t id = ++instances_;
        switch (s.kind) {
            case StmtKind::mul: return mul(id, c(s.args[0]), c(s.args[1]), c(s.args[2]));
            case StmtKind::mul_by_n: {
                auto nu = builder_.add_counter(fresh_counter("_n" + std::to_string(id)));
                return mul(id, c(s.args[0]), c(s.args[1]), nu);
            }
            case StmtKind::copy: {
                auto x = c(s.args[0]), y = c(s.args[1]);
                auto alpha = aux(id);
                auto in = state(id, "in"), out = state(id, "out");
                edge(in, {{y, -1}, {x, 1}, {alpha, 1}}, in);
                edge(out, {{y, 1}, {alpha, -1}}, out);
                edge(in, {}, out);
                return {in, out};
            }
            case StmtKind::min: {
                auto sc = c(s.args[0]), l = c(s.args[1]), t = c(s.args[2]);
                auto alpha = aux(id);
                auto in = state(id, "in"), out = state(id, "out");
                edge(in, {{t, -1}, {l, -1}, {sc, 1}, {alpha, 1}}, in);
                edge(out, {{l, 1}, {alpha, -1}}, out);
                edge(in, {}, out);
                return {in, out};
            }
            case StmtKind::destructive_copy: {
                auto x = c(s.args[0]), y = c(s.args[1]);
                auto in = state(id, "in"), out = state(id, "out");
                edge(in, {{y, -1}, {x, 1}}, in);
                edge(in, {}, out);
                return {in, out};
            }
            case StmtKind::choose: {
                auto in = state(id, "in", s.player), out = state(id, "out");
                for (const auto& b : s.blocks) {
                    auto [bin, bout] = block(b);
                    edge(in, {}, bin);
                    edge(bout, {}, out);
                }
                return {in, out};
            }
            case StmtKind::seq: return block(s.blocks.front());
        }
        throw ModelError("unknown statement kind");
    }

    VassBuilder builder_;
    std::size_t instances_ = 0;
};

}  // namespace detail

inline CompiledProgram compile_program(const ProgramAst& ast, const CompileOptions& opts = {}) {
    check_program(ast);
    detail::GadgetCompiler gc(ast);
    auto [in, out] = gc.block(ast.body);
    if (opts.close_with_halt_loop) {
        auto halt = gc.builder().add_counter(gc.fresh_counter("_halt"));
        gc.builder().add_sparse_transition(out, {{halt, -1}}, out);
    }
    return {gc.builder().build(), in, out};
}

}  // namespace vassan
