#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "vassan/core.hpp"
#include "vassan/dsl.hpp"

namespace vassan {

// Line-oriented text format:
//   counters c1 c2 ...
//   state <name> demonic|angelic
//   init <state> ...                (optional)
//   <src> -> <dst> [u1 u2 ... ud]
// `#` starts a comment. Unless `check` is false the result is validated.
inline CounterVass parse_vass(const std::string& text, bool check = true) {
    std::vector<std::string> counters;
    std::vector<StateInfo> states;
    std::vector<Transition> transitions;
    std::vector<std::size_t> initial;
    std::unordered_map<std::string, std::size_t> state_ids;
    bool seen_counters = false;
    std::vector<std::tuple<std::string, std::string, UpdateVector, std::size_t>> pending;
    std::vector<std::pair<std::string, std::size_t>> pending_init;

    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find('#');
        std::string line = raw.substr(0, hash);
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head)) continue;
        auto col = [&](const std::string& needle) { return line.find(needle) + 1; };
        if (head == "counters") {
            if (seen_counters) throw ParseError(line_no, 1, "duplicate counters line");
            seen_counters = true;
            for (std::string c; ls >> c;) counters.push_back(c);
        } else if (head == "state") {
            std::string name, owner, extra;
            if (!(ls >> name >> owner) || (ls >> extra)) throw ParseError(line_no, 1, "expected 'state <name> demonic|angelic'");
            Player p;
            if (owner == "demonic") p = Player::demon;
            else if (owner == "angelic") p = Player::angel;
            else throw ParseError(line_no, col(owner), "unknown owner '" + owner + "'");
            if (!state_ids.count(name)) state_ids[name] = states.size();
            states.push_back({name, p});
        } else if (head == "init") {
            for (std::string s; ls >> s;) pending_init.push_back({s, line_no});
        } else {
            std::string arrow, dst;
            if (!(ls >> arrow >> dst) || arrow != "->")
                throw ParseError(line_no, 1, "expected '<src> -> <dst> [updates]'");
            std::string rest;
            std::getline(ls, rest);
            auto open = rest.find('['), close = rest.find(']');
            if (open == std::string::npos || close == std::string::npos || close < open ||
                rest.find_first_not_of(" \t\r", close + 1) != std::string::npos ||
                rest.substr(0, open).find_first_not_of(" \t\r") != std::string::npos)
                throw ParseError(line_no, col(dst) + dst.size(), "expected a bracketed update vector");
            std::string body = rest.substr(open + 1, close - open - 1);
            for (auto& ch : body)
                if (ch == ',') ch = ' ';
            std::istringstream bs(body);
            UpdateVector u;
            for (std::string tok; bs >> tok;) {
                std::size_t used = 0;
                long long v = 0;
                try {
                    v = std::stoll(tok, &used);
                } catch (const std::exception&) {
                    used = 0;
                }
                if (used != tok.size()) throw ParseError(line_no, col(tok), "bad update component '" + tok + "'");
                u.push_back(v);
            }
            pending.emplace_back(head, dst, std::move(u), line_no);
        }
    }
    if (!seen_counters) throw ParseError(line_no ? line_no : 1, 1, "missing 'counters' line");
    for (auto& [src, dst, u, ln] : pending) {
        auto s = state_ids.find(src), t = state_ids.find(dst);
        if (s == state_ids.end()) throw ParseError(ln, 1, "unknown state '" + src + "'");
        if (t == state_ids.end()) throw ParseError(ln, 1, "unknown state '" + dst + "'");
        transitions.push_back({s->second, std::move(u), t->second});
    }
    for (auto& [name, ln] : pending_init) {
        auto s = state_ids.find(name);
        if (s == state_ids.end()) throw ParseError(ln, 1, "unknown initial state '" + name + "'");
        initial.push_back(s->second);
    }
    CounterVass vass(std::move(counters), std::move(states), std::move(transitions), std::move(initial));
    if (check) {
        auto diags = validate(vass);
        if (!diags.empty()) {
            std::string msg = "invalid VASS:";
            for (const auto& d : diags) msg += "\n  " + d.code + ": " + d.message;
            throw ModelError(msg);
        }
    }
    return vass;
}

inline std::string emit_vass(const CounterVass& vass) {
    std::ostringstream os;
    os << "counters";
    for (const auto& c : vass.counters()) os << " " << c;
    os << "\n";
    for (const auto& s : vass.states()) os << "state " << s.name << " " << player_name(s.owner) << "\n";
    if (!vass.initial_states().empty()) {
        os << "init";
        for (auto s : vass.initial_states()) os << " " << vass.state_name(s);
        os << "\n";
    }
    for (const auto& t : vass.transitions()) {
        os << vass.state_name(t.source) << " -> " << vass.state_name(t.target) << " [";
        for (std::size_t i = 0; i < t.update.size(); ++i) os << (i ? " " : "") << t.update[i];
        os << "]\n";
    }
    return os.str();
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ModelError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot write '" + path + "'");
    out << content;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, v >>= 4) out[i] = digits[v & 15];
    return out;
}

}  // namespace vassan
