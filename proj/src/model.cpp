#include "iorep/model.hpp"

#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace iorep {

std::vector<int> OdeModel::state_vars() const {
    std::vector<int> v;
    for (const auto &n : state_names) v.push_back(reg->require(n));
    return v;
}
std::vector<int> OdeModel::param_vars() const {
    std::vector<int> v;
    for (const auto &n : param_names) v.push_back(reg->require(n));
    return v;
}
std::vector<int> OdeModel::input_vars() const {
    std::vector<int> v;
    for (const auto &n : input_names) v.push_back(reg->require(n));
    return v;
}

namespace {

std::string strip(const std::string &s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool valid_identifier(const std::string &s, bool allow_primes = false) {
    if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    size_t i = 1;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
    if (allow_primes)
        while (i < s.size() && s[i] == '\'') ++i;
    return i == s.size();
}

std::vector<std::string> split_names(const std::string &s, int line, const char *what) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
        std::string n = strip(cur);
        if (n.empty()) throw ModelError(line, 1, std::string("empty name in ") + what + " list");
        if (!valid_identifier(n))
            throw ModelError(line, 1, "invalid identifier '" + n + "' in " + what + " list");
        out.push_back(n);
    }
    return out;
}

int base_input_derivs(const std::string &name) {
    int k = 0;
    for (auto it = name.rbegin(); it != name.rend() && *it == '\''; ++it) ++k;
    return k;
}

} // namespace

OdeModel parse_model(const std::string &text, bool allow_input_derivatives) {
    OdeModel m;
    m.allow_input_derivatives = allow_input_derivatives;

    struct Eq {
        std::string lhs;
        bool is_state;
        std::string rhs;
        int line;
        int col_offset;
    };
    std::vector<Eq> eqs;
    bool seen_states = false, seen_outputs = false;

    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = strip(line);
        if (line.empty()) continue;

        auto header = [&](const char *key) -> std::optional<std::string> {
            std::string k = std::string(key) + ":";
            if (line.rfind(k, 0) == 0) return strip(line.substr(k.size()));
            return std::nullopt;
        };
        if (auto v = header("states")) {
            if (seen_states) throw ModelError(line_no, 1, "duplicate states declaration");
            m.state_names = split_names(*v, line_no, "state");
            seen_states = true;
            continue;
        }
        if (auto v = header("params")) {
            m.param_names = split_names(*v, line_no, "param");
            continue;
        }
        if (auto v = header("inputs")) {
            m.input_names = split_names(*v, line_no, "input");
            continue;
        }
        if (auto v = header("outputs")) {
            m.output_names = split_names(*v, line_no, "output");
            seen_outputs = true;
            continue;
        }

        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError(line_no, 1, "expected a declaration or an equation");
        std::string lhs = strip(line.substr(0, eq));
        std::string rhs = strip(line.substr(eq + 1));
        if (rhs.empty()) throw ModelError(line_no, static_cast<int>(eq) + 2, "empty right-hand side");
        bool is_state = !lhs.empty() && lhs.back() == '\'';
        if (is_state) lhs = strip(lhs.substr(0, lhs.size() - 1));
        if (!valid_identifier(lhs)) throw ModelError(line_no, 1, "invalid equation left-hand side '" + lhs + "'");
        size_t rhs_col = raw.find(rhs);
        eqs.push_back({lhs, is_state, rhs, line_no, rhs_col == std::string::npos ? 0 : static_cast<int>(rhs_col)});
    }

    if (!seen_states || m.state_names.empty()) throw ModelError(1, 1, "state list empty");
    if (!seen_outputs || m.output_names.empty()) throw ModelError(1, 1, "output list empty");

    // disjointness
    std::set<std::string> seen;
    auto check_unique = [&](const std::vector<std::string> &names, const char *what) {
        for (const auto &n : names)
            if (!seen.insert(n).second)
                throw ModelError(1, 1, std::string("name '") + n + "' declared twice (" + what + ")");
    };
    check_unique(m.param_names, "params");
    check_unique(m.state_names, "states");
    check_unique(m.input_names, "inputs");
    check_unique(m.output_names, "outputs");

    // registry: params, states, inputs (order-0); input derivatives appear
    // only in reparametrized models and are materialized on demand below
    std::vector<VarInfo> vi;
    for (const auto &n : m.param_names) vi.push_back({n, VarBlock::Param, 0});
    for (const auto &n : m.state_names) vi.push_back({n, VarBlock::State, 0});
    for (const auto &n : m.input_names) vi.push_back({n, VarBlock::InputDeriv, 0});
    if (allow_input_derivatives) {
        // scan equations for primed input symbols and declare them
        int max_order = 0;
        for (const auto &e : eqs) {
            std::istringstream es(e.rhs);
            // cheap scan: count apostrophe runs after input names
            for (const auto &u : m.input_names) {
                size_t p = 0;
                while ((p = e.rhs.find(u, p)) != std::string::npos) {
                    size_t q = p + u.size();
                    int k = 0;
                    while (q < e.rhs.size() && e.rhs[q] == '\'') {
                        ++k;
                        ++q;
                    }
                    max_order = std::max(max_order, k);
                    p = q;
                }
            }
        }
        for (const auto &u : m.input_names) {
            std::string nm = u;
            for (int k = 1; k <= max_order; ++k) {
                nm += "'";
                vi.push_back({nm, VarBlock::InputDeriv, k});
            }
        }
    }
    m.reg = VarRegistry::create(vi);

    // equations
    m.rhs.assign(m.state_names.size(), RatFun::zero(m.reg));
    m.outmap.assign(m.output_names.size(), RatFun::zero(m.reg));
    std::vector<char> have_state(m.state_names.size(), 0), have_out(m.output_names.size(), 0);
    for (const auto &e : eqs) {
        RatFun f;
        try {
            f = parse_expression(e.rhs, m.reg, e.line, e.col_offset);
        } catch (const ModelError &err) {
            // derivative symbols produce 'undeclared symbol' errors mentioning primes
            throw;
        }
        if (e.is_state) {
            auto it = std::find(m.state_names.begin(), m.state_names.end(), e.lhs);
            if (it == m.state_names.end())
                throw ModelError(e.line, 1, "equation for undeclared state '" + e.lhs + "'");
            size_t idx = static_cast<size_t>(it - m.state_names.begin());
            if (have_state[idx])
                throw ModelError(e.line, 1, "duplicate state equation for '" + e.lhs + "'");
            have_state[idx] = 1;
            m.rhs[idx] = f;
        } else {
            auto it = std::find(m.output_names.begin(), m.output_names.end(), e.lhs);
            if (it == m.output_names.end())
                throw ModelError(e.line, 1, "equation left-hand side '" + e.lhs +
                                                "' is not a declared output (state equations need ')");
            size_t idx = static_cast<size_t>(it - m.output_names.begin());
            if (have_out[idx]) throw ModelError(e.line, 1, "duplicate output equation for '" + e.lhs + "'");
            have_out[idx] = 1;
            m.outmap[idx] = f;
        }
    }
    for (size_t i = 0; i < have_state.size(); ++i)
        if (!have_state[i]) throw ModelError(1, 1, "missing equation for state '" + m.state_names[i] + "'");
    for (size_t i = 0; i < have_out.size(); ++i)
        if (!have_out[i]) throw ModelError(1, 1, "missing equation for output '" + m.output_names[i] + "'");
    return m;
}

namespace {

void append_names(std::ostringstream &os, const char *key, const std::vector<std::string> &names) {
    if (names.empty()) return;
    os << key << ": ";
    for (size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
    os << "\n";
}

} // namespace

std::string serialize_model_text(const OdeModel &m) {
    std::ostringstream os;
    append_names(os, "states", m.state_names);
    append_names(os, "params", m.param_names);
    append_names(os, "inputs", m.input_names);
    append_names(os, "outputs", m.output_names);
    for (size_t i = 0; i < m.state_names.size(); ++i)
        os << m.state_names[i] << "' = " << m.rhs[i].str() << "\n";
    for (size_t i = 0; i < m.output_names.size(); ++i)
        os << m.output_names[i] << " = " << m.outmap[i].str() << "\n";
    return os.str();
}

std::string serialize_model_json(const OdeModel &m) {
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    j["states"] = m.state_names;
    j["params"] = m.param_names;
    j["inputs"] = m.input_names;
    j["outputs"] = m.output_names;
    nlohmann::ordered_json eq = nlohmann::ordered_json::object();
    for (size_t i = 0; i < m.state_names.size(); ++i) eq[m.state_names[i] + "'"] = m.rhs[i].str();
    for (size_t i = 0; i < m.output_names.size(); ++i) eq[m.output_names[i]] = m.outmap[i].str();
    j["equations"] = eq;
    return j.dump(2) + "\n";
}

bool models_equal(const OdeModel &a, const OdeModel &b) {
    if (a.state_names != b.state_names || a.param_names != b.param_names ||
        a.input_names != b.input_names || a.output_names != b.output_names)
        return false;
    for (size_t i = 0; i < a.rhs.size(); ++i)
        if (a.rhs[i].lifted(b.reg) != b.rhs[i]) return false;
    for (size_t i = 0; i < a.outmap.size(); ++i)
        if (a.outmap[i].lifted(b.reg) != b.outmap[i]) return false;
    return true;
}

} // namespace iorep
