#include "crossing/cli/model_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "crossing/errors.hpp"

namespace crossing::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_plain(std::string_view s, std::string_view whole) {
    s = trim(s);
    double out = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("not a number: '" + std::string(whole) + "'");
    return out;
}

struct LawKeys {
    std::string family;
    std::map<std::string, std::pair<double, int>> params;  // value, line
};

DistributionPtr build_law(const std::string& prefix, const LawKeys& law) {
    auto need = [&](const std::string& k) {
        auto it = law.params.find(k);
        if (it == law.params.end()) throw UsageError("missing key " + prefix + "." + k);
        return it->second.first;
    };
    auto only = [&](std::initializer_list<const char*> allowed) {
        for (const auto& [k, val] : law.params) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k == a;
            if (!ok)
                throw UsageError("key " + prefix + "." + k + " (line " + std::to_string(val.second) +
                                 ") does not apply to family " + law.family);
        }
    };
    try {
        if (law.family == "exponential") {
            only({"rate"});
            return make_exponential(need("rate"));
        }
        if (law.family == "erlang") {
            only({"rate", "shape"});
            const double k = need("shape");
            if (k < 1 || k != std::floor(k) || k > 1e6) throw UsageError(prefix + ".shape must be a positive integer");
            return make_erlang(need("rate"), static_cast<int>(k));
        }
        if (law.family == "pareto") {
            only({"a", "b"});
            return make_pareto(need("a"), need("b"));
        }
    } catch (const DomainError& e) {
        throw UsageError(prefix + ": " + e.what());
    }
    if (law.family.empty()) throw UsageError("missing key " + prefix + ".family");
    throw UsageError("key " + prefix + ".family: unknown family '" + law.family + "'");
}

}  // namespace

double parse_number(std::string_view text) {
    const auto t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string_view::npos) return parse_plain(t, text);
    const double num = parse_plain(t.substr(0, slash), text);
    const double den = parse_plain(t.substr(slash + 1), text);
    if (den == 0) throw UsageError("zero denominator in '" + std::string(text) + "'");
    return num / den;
}

RenewalModel parse_model(std::string_view text) {
    std::map<std::string, LawKeys> laws;
    std::istringstream in{std::string(text)};
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = raw;
        if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key{trim(line.substr(0, eq))};
        const auto value = trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        const std::string prefix = key.substr(0, dot);
        const std::string field = dot == std::string::npos ? "" : key.substr(dot + 1);
        if ((prefix != "T" && prefix != "T1" && prefix != "Y") ||
            (field != "family" && field != "rate" && field != "shape" && field != "a" && field != "b"))
            throw UsageError("unknown key '" + key + "' (line " + std::to_string(lineno) + ")");
        auto& law = laws[prefix];
        if (field == "family") {
            if (!law.family.empty()) throw UsageError("duplicate key '" + key + "'");
            law.family = std::string(value);
            continue;
        }
        if (law.params.count(field)) throw UsageError("duplicate key '" + key + "'");
        double val;
        try {
            val = parse_number(value);
        } catch (const UsageError& e) {
            throw UsageError("key '" + key + "': " + e.what());
        }
        law.params[field] = {val, lineno};
    }
    if (!laws.count("T")) throw UsageError("missing key T.family");
    if (!laws.count("Y")) throw UsageError("missing key Y.family");
    auto t = build_law("T", laws["T"]);
    auto y = build_law("Y", laws["Y"]);
    RenewalModel m = RenewalModel::ordinary(t, y);
    if (laws.count("T1")) m.first_interval = build_law("T1", laws["T1"]);
    return m;
}

RenewalModel load_model(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read model file " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_model(ss.str());
}

std::string model_hash(const RenewalModel& model) { return hash_text(model.describe()); }

std::string hash_text(std::string_view text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace crossing::cli
