#include "jensen_sharp/grammar.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <map>

#include "jensen_sharp/errors.hpp"

namespace jsharp::grammar {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

bool is_decimal(std::string_view t) {
    std::size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++digits;
    if (i < t.size() && t[i] == '.') {
        ++i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++digits;
    }
    if (digits == 0) return false;
    if (i < t.size() && (t[i] == 'e' || t[i] == 'E')) {
        ++i;
        if (i < t.size() && (t[i] == '+' || t[i] == '-')) ++i;
        std::size_t exp_digits = 0;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i, ++exp_digits;
        if (exp_digits == 0) return false;
    }
    return i == t.size();
}

// Looks up parameters by key, rejecting unknown keys and duplicates.
class Params {
public:
    Params(const Spec& spec, std::initializer_list<const char*> allowed) : kind_(spec.name) {
        for (const auto& [k, v] : spec.params) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok) throw ParseError("unknown parameter '" + k + "' for '" + kind_ + "'");
            if (!values_.emplace(k, v).second) throw ParseError("duplicate parameter '" + k + "' for '" + kind_ + "'");
        }
    }
    double get(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end()) throw ParseError("missing parameter '" + key + "' for '" + kind_ + "'");
        return parse_real(it->second);
    }
    double get(const std::string& key, double fallback) const {
        return values_.count(key) ? get(key) : fallback;
    }

private:
    std::string kind_;
    std::map<std::string, std::string> values_;
};

}  // namespace

Spec split_spec(std::string_view text) {
    Spec spec;
    auto colon = text.find(':');
    spec.name = trim(text.substr(0, colon));
    if (spec.name.empty()) throw ParseError("empty specification '" + std::string(text) + "'");
    if (colon == std::string_view::npos) return spec;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        auto comma = rest.find(',');
        std::string_view item = rest.substr(0, comma);
        auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value, got '" + std::string(item) + "'");
        std::string key = trim(item.substr(0, eq));
        std::string value = trim(item.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("expected key=value, got '" + std::string(item) + "'");
        spec.params.emplace_back(std::move(key), std::move(value));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return spec;
}

double parse_real(std::string_view token, bool allow_infinite) {
    std::string t = trim(token);
    if (allow_infinite) {
        if (t == "inf" || t == "+inf") return kInf;
        if (t == "-inf") return -kInf;
    }
    if (!is_decimal(t)) throw ParseError("not a decimal number: '" + t + "'");
    double v = 0.0;
    auto begin = t.data() + (t[0] == '+' ? 1 : 0);
    auto [end, ec] = std::from_chars(begin, t.data() + t.size(), v);
    if (ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v))
        throw ParseError("number out of range: '" + t + "'");
    return v;
}

CatalogKind parse_function(std::string_view text) {
    Spec spec = split_spec(text);
    if (spec.name == "exp") return catalog::ExpScaled{Params(spec, {"t"}).get("t")};
    if (spec.name == "power") return catalog::Power{Params(spec, {"p"}).get("p")};
    if (spec.name == "neglog") {
        Params(spec, {});
        return catalog::NegLog{};
    }
    if (spec.name == "quad") {
        Params p(spec, {"a", "b", "c"});
        return catalog::Quadratic{p.get("a", 0.0), p.get("b", 0.0), p.get("c", 0.0)};
    }
    throw ParseError("unknown function '" + spec.name + "' (expected exp, power, neglog or quad)");
}

std::string format_function(const CatalogKind& kind) {
    if (auto* e = std::get_if<catalog::ExpScaled>(&kind)) return "exp:t=" + format_real(e->t);
    if (auto* p = std::get_if<catalog::Power>(&kind)) return "power:p=" + format_real(p->p);
    if (std::holds_alternative<catalog::NegLog>(kind)) return "neglog";
    const auto& q = std::get<catalog::Quadratic>(kind);
    return "quad:a=" + format_real(q.c2) + ",b=" + format_real(q.c1) + ",c=" + format_real(q.c0);
}

Distribution parse_distribution(std::string_view text) {
    std::string t = trim(text);
    if (t.rfind("file:", 0) == 0) {
        std::string path = t.substr(5);
        if (path.empty()) throw ParseError("file: needs a path");
        return Distribution::empirical(read_samples(path));
    }
    Spec spec = split_spec(t);
    if (spec.name == "normal") {
        Params p(spec, {"mu", "sigma"});
        return Distribution::normal(p.get("mu", 0.0), p.get("sigma", 1.0));
    }
    if (spec.name == "exp") return Distribution::exponential(Params(spec, {"rate"}).get("rate", 1.0));
    if (spec.name == "uniform") {
        Params p(spec, {"lo", "hi"});
        return Distribution::uniform(p.get("lo"), p.get("hi"));
    }
    throw ParseError("unknown distribution '" + spec.name + "' (expected normal, exp, uniform or file)");
}

std::vector<double> parse_real_list(std::string_view text) {
    std::vector<double> out;
    std::string_view rest = text;
    while (true) {
        auto comma = rest.find(',');
        out.push_back(parse_real(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

}  // namespace jsharp::grammar
