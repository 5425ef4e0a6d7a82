#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "semidiscrete/errors.hpp"
#include "semidiscrete/format.hpp"

namespace semidiscrete::cli {

namespace {

struct Value;
using ValueList = std::vector<Value>;

// number | word | [list] | word(args)
struct Value {
    enum class Kind { kNumber, kWord, kList, kCall } kind = Kind::kNumber;
    double number = 0.0;
    std::string text;  // numeric source text, word, or call name
    ValueList items;
};

class ValueParser {
public:
    ValueParser(std::string_view src, std::string field) : src_(src), field_(std::move(field)) {}

    Value parse() {
        Value v = parse_value();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(src_.substr(pos_)) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError(field_ + ": " + what);
    }

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    ValueList parse_sequence(char close) {
        ValueList items;
        if (eat(close)) return items;
        for (;;) {
            items.push_back(parse_value());
            if (eat(close)) return items;
            if (!eat(',')) fail(std::string("expected ',' or '") + close + "'");
        }
    }

    Value parse_value() {
        skip_ws();
        if (pos_ >= src_.size()) fail("missing value");
        const char c = src_[pos_];
        Value v;
        if (c == '[') {
            ++pos_;
            v.kind = Value::Kind::kList;
            v.items = parse_sequence(']');
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const auto start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
                ++pos_;
            }
            v.text = std::string(src_.substr(start, pos_ - start));
            if (v.text == "inf" || v.text == "nan") fail("non-finite number '" + v.text + "'");
            if (eat('(')) {
                v.kind = Value::Kind::kCall;
                v.items = parse_sequence(')');
            } else {
                v.kind = Value::Kind::kWord;
            }
            return v;
        }
        const auto start = pos_;
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) ||
                                      src_[pos_] == '.' || src_[pos_] == '-' || src_[pos_] == '+')) {
            ++pos_;
        }
        v.text = std::string(src_.substr(start, pos_ - start));
        const char* first = v.text.data();
        const char* last = first + v.text.size();
        if (*first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v.number);
        if (v.text.empty() || ec != std::errc() || ptr != last) fail("invalid number '" + v.text + "'");
        if (!std::isfinite(v.number)) fail("non-finite number '" + v.text + "'");
        v.kind = Value::Kind::kNumber;
        return v;
    }

    std::string_view src_;
    std::string field_;
    std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

using Entries = std::map<std::string, std::pair<Value, int>>;

Entries read_entries(std::string_view text) {
    Entries out;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": missing key");
        if (out.count(key)) {
            throw ConfigError(key + ": duplicate key (line " + std::to_string(line_no) + ")");
        }
        out.emplace(key, std::make_pair(ValueParser(trim(line.substr(eq + 1)), key).parse(), line_no));
    }
    return out;
}

std::string describe(const Value& v) {
    switch (v.kind) {
        case Value::Kind::kNumber: return v.text;
        case Value::Kind::kWord: return v.text;
        case Value::Kind::kList: return "a list";
        case Value::Kind::kCall: return v.text + "(...)";
    }
    return "?";
}

double as_number(const Value& v, const std::string& field) {
    if (v.kind != Value::Kind::kNumber) throw ConfigError(field + ": must be a number (got " + describe(v) + ")");
    return v.number;
}

double positive(const Value& v, const std::string& field) {
    const double x = as_number(v, field);
    if (!(x > 0.0)) throw ConfigError(field + ": must be > 0 (got " + v.text + ")");
    return x;
}

std::int64_t as_integer(const Value& v, const std::string& field) {
    const double x = as_number(v, field);
    if (x != std::floor(x) || std::abs(x) > 9.0e15) {
        throw ConfigError(field + ": must be an integer (got " + v.text + ")");
    }
    return static_cast<std::int64_t>(x);
}

std::size_t count_at_least(const Value& v, const std::string& field, std::int64_t min) {
    const auto n = as_integer(v, field);
    if (n < min) throw ConfigError(field + ": must be >= " + std::to_string(min) + " (got " + v.text + ")");
    return static_cast<std::size_t>(n);
}

const std::string& as_word(const Value& v, const std::string& field) {
    if (v.kind != Value::Kind::kWord) throw ConfigError(field + ": must be a name (got " + describe(v) + ")");
    return v.text;
}

void expect_args(const Value& call, std::size_t n, const std::string& field, const char* signature) {
    if (call.items.size() != n) {
        throw ConfigError(field + ": " + call.text + " takes " + std::to_string(n) + " argument(s): " + signature);
    }
}

ScaleSpec parse_scale(const Value& v) {
    const std::string field = "scale";
    if (v.kind == Value::Kind::kList) {
        LiteralScale lit;
        for (const auto& item : v.items) {
            if (item.kind == Value::Kind::kNumber) {
                lit.components.push_back({item.number, item.number});
            } else if (item.kind == Value::Kind::kList && item.items.size() == 2) {
                lit.components.push_back({as_number(item.items[0], field), as_number(item.items[1], field)});
            } else {
                throw ConfigError(field + ": entries must be points or [start, end] pairs");
            }
        }
        try {
            (void)TimeScale(lit.components);
        } catch (const Error& e) {
            throw ConfigError(field + ": " + e.what());
        }
        return lit;
    }
    if (v.kind != Value::Kind::kCall) {
        throw ConfigError(field + ": must be a literal list or uniform(step, n), stopstart(on, off, n), harmonic(n)");
    }
    if (v.text == "uniform") {
        expect_args(v, 2, field, "uniform(step, n)");
        return UniformScale{positive(v.items[0], "scale.step"), count_at_least(v.items[1], "scale.n", 1)};
    }
    if (v.text == "stopstart") {
        expect_args(v, 3, field, "stopstart(on, off, n)");
        return StopStartScale{positive(v.items[0], "scale.on"), positive(v.items[1], "scale.off"),
                              count_at_least(v.items[2], "scale.n", 1)};
    }
    if (v.text == "harmonic") {
        expect_args(v, 1, field, "harmonic(n)");
        return HarmonicScale{count_at_least(v.items[0], "scale.n", 1)};
    }
    throw ConfigError(field + ": unknown generator '" + v.text + "'");
}

OutputRequest parse_outputs(const Value& v) {
    const std::string field = "outputs";
    if (v.kind != Value::Kind::kList) throw ConfigError(field + ": must be a list");
    OutputRequest out;
    for (const auto& item : v.items) {
        if (item.kind == Value::Kind::kWord) {
            if (item.text == "field") out.field = true;
            else if (item.text == "conservation") out.conservation = true;
            else if (item.text == "pdf_check") out.pdf_check = true;
            else throw ConfigError(field + ": unknown output '" + item.text + "'");
        } else if (item.kind == Value::Kind::kCall && item.text == "time_sections") {
            for (const auto& a : item.items) out.time_sections.push_back(as_integer(a, "outputs.time_sections"));
        } else if (item.kind == Value::Kind::kCall && item.text == "space_sections") {
            for (const auto& a : item.items) {
                const double t = as_number(a, "outputs.space_sections");
                if (t < 0.0) throw ConfigError("outputs.space_sections: must be >= 0 (got " + a.text + ")");
                out.space_sections.push_back(t);
            }
        } else {
            throw ConfigError(field + ": unknown output '" + describe(item) + "'");
        }
    }
    return out;
}

void reject_unknown(const Entries& entries, std::initializer_list<const char*> known) {
    for (const auto& [key, value] : entries) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return key == k; })) {
            throw ConfigError(key + ": unknown key (line " + std::to_string(value.second) + ")");
        }
    }
}

std::string join_numbers(const std::vector<double>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) s += ", ";
        s += shortest(xs[i]);
    }
    return s;
}

}  // namespace

TimeScale build_scale(const ScaleSpec& spec) {
    return std::visit(
        [](const auto& s) -> TimeScale {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LiteralScale>) return TimeScale(s.components);
            else if constexpr (std::is_same_v<T, UniformScale>) return TimeScale::uniform(s.step, s.n);
            else if constexpr (std::is_same_v<T, StopStartScale>) return TimeScale::stopstart(s.on, s.off, s.n);
            else return TimeScale::harmonic(s.n);
        },
        spec);
}

std::string to_config_value(const ScaleSpec& spec) {
    return std::visit(
        [](const auto& s) -> std::string {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, LiteralScale>) {
                std::string out = "[";
                for (std::size_t i = 0; i < s.components.size(); ++i) {
                    if (i) out += ", ";
                    const auto& c = s.components[i];
                    out += c.is_point() ? shortest(c.start) : "[" + shortest(c.start) + ", " + shortest(c.end) + "]";
                }
                return out + "]";
            } else if constexpr (std::is_same_v<T, UniformScale>) {
                return "uniform(" + shortest(s.step) + ", " + std::to_string(s.n) + ")";
            } else if constexpr (std::is_same_v<T, StopStartScale>) {
                return "stopstart(" + shortest(s.on) + ", " + shortest(s.off) + ", " + std::to_string(s.n) + ")";
            } else {
                return "harmonic(" + std::to_string(s.n) + ")";
            }
        },
        spec);
}

ScenarioConfig parse_scenario(std::string_view text) {
    const auto entries = read_entries(text);
    reject_unknown(entries, {"scale", "extend", "k", "A", "mu_x", "initial", "initial_lo", "t_max", "h_out",
                             "tail_tol", "quad_tol", "conservation_branches", "outputs"});
    auto get = [&](const char* key) -> const Value* {
        const auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second.first;
    };
    ScenarioConfig c;
    const Value* scale = get("scale");
    if (!scale) throw ConfigError("scale: required");
    c.scale = parse_scale(*scale);
    if (const Value* v = get("extend")) {
        const auto& w = as_word(*v, "extend");
        if (w == "periodic") c.periodic = true;
        else if (w == "none") c.periodic = false;
        else throw ConfigError("extend: must be 'periodic' or 'none' (got " + w + ")");
    }
    if (const Value* v = get("k")) c.k = positive(*v, "k");
    if (const Value* v = get("A")) c.A = positive(*v, "A");
    if (const Value* v = get("mu_x")) c.mu_x = positive(*v, "mu_x");
    if (const Value* v = get("initial")) {
        if (v->kind == Value::Kind::kWord && v->text == "point") {
            c.initial.clear();
        } else if (v->kind == Value::Kind::kList) {
            if (v->items.empty()) throw ConfigError("initial: list must not be empty");
            for (const auto& item : v->items) c.initial.push_back(as_number(item, "initial"));
        } else {
            throw ConfigError("initial: must be 'point' or a list of values (got " + describe(*v) + ")");
        }
    }
    if (const Value* v = get("initial_lo")) {
        if (c.initial.empty()) throw ConfigError("initial_lo: only allowed with a list-valued initial");
        c.initial_lo = as_integer(*v, "initial_lo");
    }
    const Value* t_max = get("t_max");
    if (!t_max) throw ConfigError("t_max: required");
    c.t_max = as_number(*t_max, "t_max");
    if (c.t_max < 0.0) throw ConfigError("t_max: must be >= 0 (got " + t_max->text + ")");
    if (const Value* v = get("h_out")) c.h_out = positive(*v, "h_out");
    if (const Value* v = get("tail_tol")) c.tail_tol = positive(*v, "tail_tol");
    if (const Value* v = get("quad_tol")) c.quad_tol = positive(*v, "quad_tol");
    if (const Value* v = get("conservation_branches")) {
        c.conservation_branches = static_cast<SpaceIndex>(count_at_least(*v, "conservation_branches", 0));
    }
    if (const Value* v = get("outputs")) c.outputs = parse_outputs(*v);
    return c;
}

std::string dump_scenario(const ScenarioConfig& c) {
    std::ostringstream os;
    os << "scale = " << to_config_value(c.scale) << "\n";
    if (c.periodic) os << "extend = periodic\n";
    os << "k = " << shortest(c.k) << "\n";
    os << "A = " << shortest(c.A) << "\n";
    os << "mu_x = " << shortest(c.mu_x) << "\n";
    if (c.initial.empty()) {
        os << "initial = point\n";
    } else {
        os << "initial = [" << join_numbers(c.initial) << "]\n";
        os << "initial_lo = " << c.initial_lo << "\n";
    }
    os << "t_max = " << shortest(c.t_max) << "\n";
    if (c.h_out) os << "h_out = " << shortest(*c.h_out) << "\n";
    os << "tail_tol = " << shortest(c.tail_tol) << "\n";
    os << "quad_tol = " << shortest(c.quad_tol) << "\n";
    os << "conservation_branches = " << c.conservation_branches << "\n";
    std::vector<std::string> outs;
    if (c.outputs.field) outs.emplace_back("field");
    if (!c.outputs.time_sections.empty()) {
        std::string s = "time_sections(";
        for (std::size_t i = 0; i < c.outputs.time_sections.size(); ++i) {
            if (i) s += ", ";
            s += std::to_string(c.outputs.time_sections[i]);
        }
        outs.push_back(s + ")");
    }
    if (!c.outputs.space_sections.empty()) {
        outs.push_back("space_sections(" + join_numbers(c.outputs.space_sections) + ")");
    }
    if (c.outputs.conservation) outs.emplace_back("conservation");
    if (c.outputs.pdf_check) outs.emplace_back("pdf_check");
    os << "outputs = [";
    for (std::size_t i = 0; i < outs.size(); ++i) os << (i ? ", " : "") << outs[i];
    os << "]\n";
    return os.str();
}

TimeScale scenario_scale(const ScenarioConfig& c) {
    const TimeScale base = build_scale(c.scale);
    if (c.periodic) return base.periodic_extension(c.t_max);
    if (c.t_max > base.t_max() * (1.0 + kSnapTolerance) + kSnapTolerance) {
        throw ConfigError("t_max: must be <= " + shortest(base.t_max()) + ", the end of the scale (got " +
                          shortest(c.t_max) + "); set extend = periodic to repeat the scale");
    }
    try {
        return base.restricted_to(c.t_max);
    } catch (const Error& e) {
        throw ConfigError(std::string("t_max: ") + e.what());
    }
}

TransportProblem scenario_problem(const ScenarioConfig& c) {
    TransportProblem p;
    p.k = c.k;
    p.A = c.A;
    p.mu_x = c.mu_x;
    if (!c.initial.empty()) p.initial = GeneralInitial{c.initial_lo, c.initial};
    p.scale = scenario_scale(c);
    p.tail_tol = c.tail_tol;
    return p;
}

ConvergenceConfig parse_convergence(std::string_view text) {
    const auto entries = read_entries(text);
    reject_unknown(entries, {"rate", "steps", "target_time"});
    ConvergenceConfig c;
    if (const auto it = entries.find("rate"); it != entries.end()) c.rate = positive(it->second.first, "rate");
    if (const auto it = entries.find("target_time"); it != entries.end()) {
        c.target_time = positive(it->second.first, "target_time");
    }
    const auto it = entries.find("steps");
    if (it == entries.end()) throw ConfigError("steps: required");
    const Value& v = it->second.first;
    if (v.kind != Value::Kind::kList || v.items.empty()) throw ConfigError("steps: must be a non-empty list");
    for (const auto& item : v.items) c.steps.push_back(count_at_least(item, "steps", 1));
    return c;
}

std::string dump_convergence(const ConvergenceConfig& c) {
    std::ostringstream os;
    os << "rate = " << shortest(c.rate) << "\n";
    os << "target_time = " << shortest(c.target_time) << "\n";
    os << "steps = [";
    for (std::size_t i = 0; i < c.steps.size(); ++i) os << (i ? ", " : "") << c.steps[i];
    os << "]\n";
    return os.str();
}

std::optional<ScenarioConfig> preset(std::string_view name) {
    ScenarioConfig c;
    c.outputs.field = true;
    c.outputs.conservation = true;
    c.outputs.pdf_check = true;
    if (name == "poisson") {
        c.scale = LiteralScale{{{0.0, 20.0}}};
        c.t_max = 20.0;
        c.h_out = 0.05;
        c.outputs.time_sections = {0, 1, 2, 5};
        c.outputs.space_sections = {1.0, 5.0};
    } else if (name == "bernoulli") {
        c.scale = UniformScale{0.25, 160};
        c.t_max = 40.0;
        c.outputs.time_sections = {0, 1, 2, 5};
        c.outputs.space_sections = {1.0, 5.0};
    } else if (name == "harmonic") {
        c.scale = HarmonicScale{400};
        c.t_max = build_scale(c.scale).t_max();
        c.outputs.time_sections = {0, 1};
        c.outputs.space_sections = {c.t_max};
    } else if (name == "stopstart") {
        c.scale = StopStartScale{0.5, 0.5, 40};
        c.t_max = build_scale(c.scale).t_max();
        c.h_out = 0.05;
        c.outputs.time_sections = {0, 1, 2, 3};
        c.outputs.space_sections = {1.0, 5.5};
    } else {
        return std::nullopt;
    }
    return c;
}

std::vector<std::string> preset_names() { return {"poisson", "bernoulli", "harmonic", "stopstart"}; }

}  // namespace semidiscrete::cli
