#include "rlsc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "rlsc/errors.hpp"

namespace rlsc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
}

const json* find(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    return v.get<double>();
}

double probability(const json& v, const std::string& field) {
    const double x = number(v, field);
    if (!(x >= 0.0 && x <= 1.0)) fail(field, "probability must be in [0, 1]");
    return x;
}

std::int64_t integer(const json& v, const std::string& field) {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    if (v.is_number_float()) {
        const double x = v.get<double>();
        if (std::isfinite(x) && std::floor(x) == x && std::abs(x) < 9e15) return static_cast<std::int64_t>(x);
    }
    fail(field, "expected an integer");
}

std::string text(const json& v, const std::string& field) {
    if (!v.is_string()) fail(field, "expected a string");
    return v.get<std::string>();
}

template <class F>
auto list(const json& v, const std::string& field, F each) {
    using T = decltype(each(v, field));
    std::vector<T> out;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) out.push_back(each(v[i], field + "[" + std::to_string(i) + "]"));
    } else {
        out.push_back(each(v, field));
    }
    return out;
}

void no_unknown_keys(const json& j, const std::string& where, std::initializer_list<const char*> known) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail(where.empty() ? it.key() : where + "." + it.key(), "unknown field");
    }
}

ChannelConfig parse_channel(const json& j) {
    if (!j.is_object()) fail("channel", "expected a table");
    no_unknown_keys(j, "channel", {"N", "packet", "p", "r", "transition", "state"});
    ChannelConfig c;
    const json* n = find(j, "N");
    if (!n) fail("channel.N", "missing");
    c.N = static_cast<int>(integer(*n, "channel.N"));
    if (c.N < 1) fail("channel.N", "must be >= 1");
    if (const json* v = find(j, "packet")) {
        if (!v->is_boolean()) fail("channel.packet", "expected true or false");
        c.packet = v->get<bool>();
    }
    const json* states = find(j, "state");
    if (!states || !states->is_array() || states->empty()) fail("channel.state", "need at least one state entry");
    for (std::size_t i = 0; i < states->size(); ++i) {
        const std::string where = "channel.state[" + std::to_string(i) + "]";
        const json& s = (*states)[i];
        if (!s.is_object()) fail(where, "expected a table");
        no_unknown_keys(s, where, {"kind", "success", "delivery", "loss", "pmf"});
        StateConfig st;
        const json* kind = find(s, "kind");
        if (!kind) fail(where + ".kind", "missing");
        st.kind = text(*kind, where + ".kind");
        if (st.kind == "binomial") {
            const json* v = find(s, "success");
            if (!v) fail(where + ".success", "missing");
            st.value = probability(*v, where + ".success");
        } else if (st.kind == "packet") {
            const json* d = find(s, "delivery");
            const json* l = find(s, "loss");
            if (!d == !l) fail(where, "give exactly one of delivery or loss");
            st.value = d ? probability(*d, where + ".delivery") : 1.0 - probability(*l, where + ".loss");
        } else if (st.kind == "table") {
            const json* v = find(s, "pmf");
            if (!v) fail(where + ".pmf", "missing");
            st.pmf = list(*v, where + ".pmf", probability);
            if (static_cast<int>(st.pmf.size()) != c.N + 1) fail(where + ".pmf", "needs N + 1 entries");
        } else {
            fail(where + ".kind", "unknown kind '" + st.kind + "' (binomial, packet, table)");
        }
        c.states.push_back(std::move(st));
    }
    const int L = static_cast<int>(c.states.size());
    const json* t = find(j, "transition");
    const json* p = find(j, "p");
    const json* r = find(j, "r");
    if (t && (p || r)) fail("channel", "give either transition or (p, r), not both");
    if (t) {
        if (!t->is_array() || static_cast<int>(t->size()) != L) fail("channel.transition", "needs one row per state");
        Eigen::MatrixXd T(L, L);
        for (int a = 0; a < L; ++a) {
            const std::string where = "channel.transition[" + std::to_string(a) + "]";
            const auto row = list((*t)[a], where, probability);
            if (static_cast<int>(row.size()) != L) fail(where, "needs one entry per state");
            for (int b = 0; b < L; ++b) T(a, b) = row[b];
        }
        c.transition = T;
    } else if (p || r) {
        if (!p || !r) fail("channel", "two-state channels need both p and r");
        if (L != 2) fail("channel.state", "(p, r) describes exactly two states (good first)");
        c.p = probability(*p, "channel.p");
        c.r = probability(*r, "channel.r");
    } else if (L != 1) {
        fail("channel", "more than one state needs transition or (p, r)");
    }
    return c;
}

CodeParams parse_code(const json& j, const std::optional<ChannelConfig>& channel) {
    if (!j.is_object()) fail("code", "expected a table");
    no_unknown_keys(j, "code", {"K", "N", "alpha", "delta", "mode"});
    CodeParams p;
    const json* K = find(j, "K");
    if (!K) fail("code.K", "missing");
    p.K = static_cast<int>(integer(*K, "code.K"));
    if (const json* N = find(j, "N")) {
        p.N = static_cast<int>(integer(*N, "code.N"));
    } else if (channel) {
        p.N = channel->N;
    } else {
        fail("code.N", "missing");
    }
    if (channel && channel->N != p.N) fail("code.N", "differs from channel.N");
    const json* a = find(j, "alpha");
    if (!a) fail("code.alpha", "missing");
    if (a->is_string()) {
        const std::string s = a->get<std::string>();
        if (s != "inf" && s != "infinite") fail("code.alpha", "expected an integer or \"inf\"");
        p.alpha = std::nullopt;
    } else {
        p.alpha = static_cast<int>(integer(*a, "code.alpha"));
    }
    const json* d = find(j, "delta");
    if (!d) fail("code.delta", "missing");
    p.delta = static_cast<int>(integer(*d, "code.delta"));
    if (const json* m = find(j, "mode")) {
        try {
            p.mode = parse_mode(text(*m, "code.mode"));
        } catch (const ContractError&) {
            fail("code.mode", "expected nonsystematic or systematic");
        }
    }
    try {
        p.validate();
    } catch (const ContractError& e) {
        fail("code", e.what());
    }
    return p;
}

json toml_node_to_json(const toml::node& n) {
    if (const auto* t = n.as_table()) {
        json out = json::object();
        for (const auto& [k, v] : *t) out[std::string(k.str())] = toml_node_to_json(v);
        return out;
    }
    if (const auto* a = n.as_array()) {
        json out = json::array();
        for (const auto& v : *a) out.push_back(toml_node_to_json(v));
        return out;
    }
    if (const auto* v = n.as_integer()) return v->get();
    if (const auto* v = n.as_floating_point()) return v->get();
    if (const auto* v = n.as_boolean()) return v->get();
    if (const auto* v = n.as_string()) return v->get();
    throw ConfigError("dates and times are not part of the config schema");
}

} // namespace

ChannelSpec ChannelConfig::build() const {
    std::vector<EmissionModel> em;
    for (const auto& s : states) {
        if (s.kind == "binomial") em.push_back(EmissionModel::binomial(N, s.value));
        else if (s.kind == "packet") em.push_back(EmissionModel::packet(N, s.value));
        else em.push_back(EmissionModel::table(s.pmf));
    }
    Eigen::MatrixXd T;
    if (transition) {
        T = *transition;
    } else if (p) {
        T.resize(2, 2);
        T << 1.0 - *p, *p, *r, 1.0 - *r;
    } else {
        T = Eigen::MatrixXd::Ones(1, 1);
    }
    try {
        return ChannelSpec(T, em, packet);
    } catch (const ContractError& e) {
        throw ConfigError(std::string("channel: ") + e.what());
    }
}

Scenario ExperimentConfig::base() const {
    if (!channel) fail("channel", "missing section");
    if (!code) fail("code", "missing section");
    return {channel->build(), *code};
}

Scenario ExperimentConfig::scenario(const std::string& axis, double value) const {
    if (!channel) fail("channel", "missing section");
    if (!code) fail("code", "missing section");
    ChannelConfig ch = *channel;
    CodeParams cp = *code;
    if (axis == "loss_G") {
        if (!(value >= 0.0 && value <= 1.0)) fail("sweep.values", "loss_G must be in [0, 1]");
        StateConfig& good = ch.states.front();
        if (good.kind == "table") fail("sweep.axis", "loss_G needs a packet or binomial good state");
        good.value = 1.0 - value;
    } else if (axis == "delta") {
        if (value < 0 || std::floor(value) != value) fail("sweep.values", "delta values must be integers >= 0");
        cp.delta = static_cast<int>(value);
    } else if (axis == "p" || axis == "r") {
        if (!ch.p) fail("sweep.axis", "p and r sweeps need a (p, r) channel");
        if (!(value >= 0.0 && value <= 1.0)) fail("sweep.values", axis + " must be in [0, 1]");
        (axis == "p" ? ch.p : ch.r) = value;
    } else {
        fail("sweep.axis", "unknown axis '" + axis + "' (loss_G, delta, p, r)");
    }
    return {ch.build(), cp};
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) fail("config", "top level must be a table");
    no_unknown_keys(j, "", {"channel", "code", "engines", "sim", "codec", "sweep", "srlsc", "oracle", "output"});
    ExperimentConfig c;
    if (const json* v = find(j, "channel")) c.channel = parse_channel(*v);
    if (const json* v = find(j, "code")) c.code = parse_code(*v, c.channel);

    int q = 16;
    if (const json* v = find(j, "codec")) {
        no_unknown_keys(*v, "codec", {"q"});
        if (const json* qq = find(*v, "q")) q = static_cast<int>(integer(*qq, "codec.q"));
        if (q < 2 || q > 32) fail("codec.q", "must be in [2, 32]");
    }
    if (const json* v = find(j, "engines")) {
        for (const std::string& s : list(*v, "engines", text)) {
            try {
                Engine e = Engine::parse(s);
                e.q = q;
                c.engines.push_back(e);
            } catch (const ContractError& e) {
                fail("engines", e.what());
            }
        }
    }
    if (const json* v = find(j, "sim")) {
        no_unknown_keys(*v, "sim", {"T", "rounds", "seed", "threads"});
        if (const json* t = find(*v, "T")) c.T_values = list(*t, "sim.T", integer);
        for (auto T : c.T_values)
            if (T < 1) fail("sim.T", "must be >= 1");
        if (const json* r = find(*v, "rounds")) c.sim.rounds = static_cast<int>(integer(*r, "sim.rounds"));
        if (c.sim.rounds < 1) fail("sim.rounds", "must be >= 1");
        if (const json* s = find(*v, "seed")) {
            const std::int64_t seed = integer(*s, "sim.seed");
            if (seed < 0) fail("sim.seed", "must be >= 0");
            c.sim.seed = static_cast<std::uint64_t>(seed);
        }
        if (const json* th = find(*v, "threads")) c.sim.threads = static_cast<int>(integer(*th, "sim.threads"));
        if (c.sim.threads < 1) fail("sim.threads", "must be >= 1");
    }
    if (c.T_values.empty()) c.T_values.push_back(c.sim.T);
    c.sim.T = c.T_values.back();

    if (const json* v = find(j, "sweep")) {
        no_unknown_keys(*v, "sweep", {"axis", "values"});
        SweepConfig s;
        const json* a = find(*v, "axis");
        if (!a) fail("sweep.axis", "missing");
        s.axis = text(*a, "sweep.axis");
        if (const json* vals = find(*v, "values")) s.values = list(*vals, "sweep.values", number);
        c.sweep = s;
        if (c.channel && c.code)
            for (double x : s.values) c.scenario(s.axis, x);  // validate every point up front
    }
    if (const json* v = find(j, "srlsc")) {
        no_unknown_keys(*v, "srlsc", {"p", "delta", "l_max"});
        SrlscJob s;
        const json* p = find(*v, "p");
        if (!p) fail("srlsc.p", "missing");
        s.p = list(*p, "srlsc.p", number);
        for (double x : s.p)
            if (!(x > 0.5 && x <= 1.0))
                fail("srlsc.p", "p = " + std::to_string(x) +
                                    " must be in (1/2, 1]: the debt walk is not positive recurrent otherwise");
        const json* d = find(*v, "delta");
        if (!d) fail("srlsc.delta", "missing");
        for (auto x : list(*d, "srlsc.delta", integer)) {
            if (x < 0) fail("srlsc.delta", "must be >= 0");
            s.delta.push_back(static_cast<int>(x));
        }
        if (const json* l = find(*v, "l_max")) s.l_max = static_cast<int>(integer(*l, "srlsc.l_max"));
        if (s.l_max < 0) fail("srlsc.l_max", "must be >= 0 (0 picks it automatically)");
        c.srlsc = s;
    }
    if (const json* v = find(j, "oracle")) {
        no_unknown_keys(*v, "oracle", {"delta", "k_max"});
        OracleJob o;
        if (const json* d = find(*v, "delta"))
            for (auto x : list(*d, "oracle.delta", integer)) {
                if (x < 0) fail("oracle.delta", "must be >= 0");
                o.delta.push_back(static_cast<int>(x));
            }
        if (const json* k = find(*v, "k_max")) o.k_max = static_cast<int>(integer(*k, "oracle.k_max"));
        c.oracle = o;
    }
    if (const json* v = find(j, "output")) c.output = text(*v, "output");
    return c;
}

json toml_to_json(const std::string& text, const std::string& source) {
    try {
        const toml::table t = toml::parse(text, source);
        return toml_node_to_json(t);
    } catch (const toml::parse_error& e) {
        std::ostringstream os;
        os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
        throw ConfigError(os.str());
    }
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    const std::string body = ss.str();
    const bool is_json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    json j;
    if (is_json) {
        try {
            j = json::parse(body);
        } catch (const json::parse_error& e) {
            throw ConfigError(path + ": " + e.what());
        }
    } else {
        j = toml_to_json(body, path);
    }
    return parse_config(j);
}

} // namespace rlsc
