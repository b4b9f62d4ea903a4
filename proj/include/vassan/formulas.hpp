#pragma once

#include <array>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "vassan/core.hpp"

namespace vassan {

using Clause = std::array<int, 3>;

struct CnfFormula {
    int variable_count = 0;
    std::vector<Clause> clauses;
};

// Prefix forall x_1 exists y_1 ... forall x_v exists y_v over the matrix variables.
struct QbfFormula {
    std::vector<std::pair<int, int>> blocks;  // (universal variable, existential variable)
    CnfFormula matrix;
};

inline void check_formula(const CnfFormula& f) {
    if (f.variable_count < 1) throw ModelError("formula has no variables");
    if (f.clauses.empty()) throw ModelError("formula has no clauses");
    for (const auto& c : f.clauses)
        for (int lit : c)
            if (lit == 0 || std::abs(lit) > f.variable_count)
                throw ModelError("literal " + std::to_string(lit) + " out of range");
}

inline void check_formula(const QbfFormula& q) {
    check_formula(q.matrix);
    if (q.blocks.empty()) throw ModelError("quantifier prefix is empty");
    std::vector<int> seen(q.matrix.variable_count + 1, 0);
    for (auto [x, y] : q.blocks)
        for (int v : {x, y}) {
            if (v < 1 || v > q.matrix.variable_count) throw ModelError("quantified variable out of range");
            if (seen[v]++) throw ModelError("variable " + std::to_string(v) + " quantified twice");
        }
    for (int v = 1; v <= q.matrix.variable_count; ++v)
        if (!seen[v]) throw ModelError("variable " + std::to_string(v) + " is free");
}

namespace detail {

inline std::vector<std::vector<std::string>> dimacs_lines(const std::string& text) {
    std::vector<std::vector<std::string>> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::vector<std::string> words;
        for (std::string w; ls >> w;) words.push_back(w);
        if (words.empty() || words[0] == "c" || words[0][0] == '%') continue;
        out.push_back(std::move(words));
    }
    return out;
}

inline int parse_int(const std::string& s, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw ModelError(std::string("malformed ") + what + " '" + s + "'");
}

inline CnfFormula parse_matrix(const std::vector<std::vector<std::string>>& lines, std::size_t& pos,
                               bool allow_prefix, std::vector<std::pair<char, std::vector<int>>>* prefix) {
    if (pos >= lines.size() || lines[pos].size() != 4 || lines[pos][0] != "p" || lines[pos][1] != "cnf")
        throw ModelError("missing 'p cnf <vars> <clauses>' header");
    CnfFormula f;
    f.variable_count = parse_int(lines[pos][2], "variable count");
    const int declared_clauses = parse_int(lines[pos][3], "clause count");
    ++pos;
    std::vector<int> pending;
    for (; pos < lines.size(); ++pos) {
        const auto& w = lines[pos];
        if (w[0] == "a" || w[0] == "e") {
            if (!allow_prefix || !f.clauses.empty() || !pending.empty())
                throw ModelError("quantifier line outside the prefix");
            std::vector<int> vars;
            for (std::size_t i = 1; i < w.size(); ++i) {
                int v = parse_int(w[i], "variable");
                if (v == 0) break;
                vars.push_back(v);
            }
            prefix->push_back({w[0][0], vars});
            continue;
        }
        for (const auto& tok : w) {
            int lit = parse_int(tok, "literal");
            if (lit == 0) {
                if (pending.size() != 3)
                    throw ModelError("clause " + std::to_string(f.clauses.size() + 1) + " does not have exactly 3 literals");
                f.clauses.push_back({pending[0], pending[1], pending[2]});
                pending.clear();
            } else {
                pending.push_back(lit);
            }
        }
    }
    if (!pending.empty()) throw ModelError("unterminated clause");
    if (static_cast<int>(f.clauses.size()) != declared_clauses)
        throw ModelError("header declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(f.clauses.size()));
    check_formula(f);
    return f;
}

}  // namespace detail

inline CnfFormula parse_dimacs(const std::string& text) {
    auto lines = detail::dimacs_lines(text);
    std::size_t pos = 0;
    return detail::parse_matrix(lines, pos, false, nullptr);
}

// Accepts only the alternating shape: single-variable blocks `a x 0`, `e y 0`, `a ...`.
inline QbfFormula parse_qdimacs(const std::string& text) {
    auto lines = detail::dimacs_lines(text);
    std::size_t pos = 0;
    std::vector<std::pair<char, std::vector<int>>> prefix;
    QbfFormula q;
    q.matrix = detail::parse_matrix(lines, pos, true, &prefix);
    if (prefix.empty() || prefix.size() % 2 != 0)
        throw ModelError("prefix must consist of alternating forall/exists pairs");
    for (std::size_t i = 0; i < prefix.size(); i += 2) {
        const auto& a = prefix[i];
        const auto& e = prefix[i + 1];
        if (a.first != 'a' || e.first != 'e' || a.second.size() != 1 || e.second.size() != 1)
            throw ModelError("prefix must alternate single forall and exists variables, starting with forall");
        q.blocks.push_back({a.second[0], e.second[0]});
    }
    check_formula(q);
    return q;
}

inline std::string to_dimacs(const CnfFormula& f) {
    std::ostringstream os;
    os << "p cnf " << f.variable_count << " " << f.clauses.size() << "\n";
    for (const auto& c : f.clauses) os << c[0] << " " << c[1] << " " << c[2] << " 0\n";
    return os.str();
}

inline std::string to_qdimacs(const QbfFormula& q) {
    std::ostringstream os;
    os << "p cnf " << q.matrix.variable_count << " " << q.matrix.clauses.size() << "\n";
    for (auto [x, y] : q.blocks) os << "a " << x << " 0\ne " << y << " 0\n";
    for (const auto& c : q.matrix.clauses) os << c[0] << " " << c[1] << " " << c[2] << " 0\n";
    return os.str();
}

inline bool evaluate(const CnfFormula& f, const std::vector<bool>& assignment) {
    for (const auto& c : f.clauses) {
        bool sat = false;
        for (int lit : c) sat = sat || (assignment[std::abs(lit)] == (lit > 0));
        if (!sat) return false;
    }
    return true;
}

// Exhaustive; intended for the small formulas used as fixtures.
inline bool is_satisfiable(const CnfFormula& f) {
    if (f.variable_count > 24) throw BudgetExceeded("too many variables for exhaustive search", f.variable_count);
    std::vector<bool> a(f.variable_count + 1);
    for (std::uint32_t mask = 0; mask < (1u << f.variable_count); ++mask) {
        for (int v = 1; v <= f.variable_count; ++v) a[v] = (mask >> (v - 1)) & 1u;
        if (evaluate(f, a)) return true;
    }
    return false;
}

inline bool is_valid(const QbfFormula& q) {
    std::vector<bool> a(q.matrix.variable_count + 1);
    std::function<bool(std::size_t, bool)> go = [&](std::size_t i, bool universal) -> bool {
        if (i == q.blocks.size()) return evaluate(q.matrix, a);
        int v = universal ? q.blocks[i].first : q.blocks[i].second;
        bool result = universal;
        for (bool value : {false, true}) {
            a[v] = value;
            bool sub = universal ? go(i, false) : go(i + 1, true);
            result = universal ? (result && sub) : (result || sub);
        }
        return result;
    };
    return go(0, true);
}

// The eight clauses over X1..X3 with every sign pattern; no assignment satisfies all of them.
inline CnfFormula all_sign_patterns_formula() {
    CnfFormula f;
    f.variable_count = 3;
    for (int mask = 0; mask < 8; ++mask)
        f.clauses.push_back({(mask & 1) ? -1 : 1, (mask & 2) ? -2 : 2, (mask & 4) ? -3 : 3});
    return f;
}

}  // namespace vassan
