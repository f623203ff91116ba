#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <map>
#include <sstream>

#include "prism/errors.hpp"

namespace prism::cli {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    std::string t = trim(text);
    if (!t.empty() && t[0] == '+') t.erase(0, 1);
    T v{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw ConfigError("syntax", key + ": expected an integer, got '" + text + "'");
    return v;
}

bool has_variable(const std::string& s) {
    return s.find('z') != std::string::npos || s.find('Z') != std::string::npos;
}

}  // namespace

Polynomial parse_polynomial(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    if (s.empty()) throw ConfigError("syntax", "empty polynomial");
    if (!has_variable(s)) {
        if (s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
        Polynomial f;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) f.push_back(parse_number<i64>("polynomial", item));
        if (f.empty()) throw ConfigError("syntax", "empty coefficient list");
        return f;
    }
    Polynomial f;
    std::size_t pos = 0;
    while (pos < s.size()) {
        i64 sign = 1;
        if (s[pos] == '+' || s[pos] == '-') {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        } else if (pos != 0) {
            throw ConfigError("syntax", "polynomial '" + text + "': expected '+' or '-'");
        }
        std::size_t end = pos;
        while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
        std::string term = s.substr(pos, end - pos);
        pos = end;
        if (term.empty()) throw ConfigError("syntax", "polynomial '" + text + "': empty term");
        i64 coeff = 1;
        int exp = 0;
        auto zp = term.find_first_of("zZ");
        if (zp == std::string::npos) {
            coeff = parse_number<i64>("polynomial", term);
        } else {
            std::string c = term.substr(0, zp);
            if (!c.empty() && c.back() == '*') c.pop_back();
            if (!c.empty()) coeff = parse_number<i64>("polynomial", c);
            std::string rest = term.substr(zp + 1);
            if (rest.empty()) exp = 1;
            else if (rest[0] == '^') exp = parse_number<int>("polynomial", rest.substr(1));
            else throw ConfigError("syntax", "polynomial '" + text + "': bad term '" + term + "'");
            if (exp < 0 || exp > 4096) throw ConfigError("syntax", "polynomial '" + text + "': exponent out of range");
        }
        if (f.size() <= static_cast<std::size_t>(exp)) f.resize(static_cast<std::size_t>(exp) + 1, 0);
        f[static_cast<std::size_t>(exp)] += sign * coeff;
    }
    while (f.size() > 1 && f.back() == 0) f.pop_back();
    return f;
}

RelationSet parse_relation_set(const std::string& text) {
    std::string t = trim(text);
    if (t.empty() || t == "none") return {};
    RelationSet set;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        set.push_back(parse_polynomial(item));
    }
    return set;
}

std::string format_polynomial(const Polynomial& f) {
    std::string s;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(f[k]);
    }
    return s;
}

std::string format_relation_set(const RelationSet& set) {
    if (set.empty()) return "none";
    std::string s;
    for (std::size_t k = 0; k < set.size(); ++k) {
        if (k) s += ';';
        s += format_polynomial(set[k]);
    }
    return s;
}

std::string pretty_polynomial(const Polynomial& f) {
    std::string s;
    for (std::size_t k = f.size(); k-- > 0;) {
        i64 c = f[k];
        if (c == 0) continue;
        i64 a = c < 0 ? -c : c;
        if (s.empty()) s += c < 0 ? "-" : "";
        else s += c < 0 ? " - " : " + ";
        if (a != 1 || k == 0) s += std::to_string(a);
        if (k >= 1) s += "z";
        if (k >= 2) s += "^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
}

JobConfig parse_config(const std::string& text) {
    JobConfig c;
    bool saw_relations = false;
    std::string section;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("syntax", "line " + std::to_string(lineno) + ": unterminated section");
            section = trim(t.substr(1, t.size() - 2));
            if (section == "relations" && !saw_relations) {
                c.relations.clear();
                saw_relations = true;
            }
            continue;
        }
        auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("syntax", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(t.substr(0, eq)), val = trim(t.substr(eq + 1));
        if (section == "relations" || key == "relation") {
            if (!saw_relations) c.relations.clear();
            saw_relations = true;
            c.relations.push_back(parse_relation_set(val));
        } else if (key == "p") c.p = parse_number<u64>(key, val);
        else if (key == "M") c.M = parse_number<int>(key, val);
        else if (key == "eisenstein") {
            c.eisenstein = parse_polynomial(val);
            if (has_variable(val) && c.eisenstein.size() > 3)
                throw ConfigError("eisenstein_syntax", "eisenstein: the string form is limited to degree 2; use coefficients");
        } else if (key == "i") c.i_min = c.i_max = parse_number<int>(key, val);
        else if (key == "i_min") c.i_min = parse_number<int>(key, val);
        else if (key == "i_max") c.i_max = parse_number<int>(key, val);
        else if (key == "prec_z") c.prec_z = parse_number<int>(key, val);
        else if (key == "delta_depth") c.delta_depth = parse_number<int>(key, val);
        else if (key == "degree") c.degree = parse_number<int>(key, val);
        else if (key == "jmax") c.jmax = parse_number<int>(key, val);
        else if (key == "jobs") c.jobs = parse_number<int>(key, val);
        else if (key == "seed") c.seed = parse_number<std::uint64_t>(key, val);
        else if (key == "format") c.format = val;
        else if (key == "out") c.out = val;
        else throw ConfigError("unknown_key", "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    return c;
}

std::string serialize_config(const JobConfig& c) {
    std::ostringstream o;
    o << "[bounds]\n"
      << "degree = " << c.degree << "\n"
      << "delta_depth = " << c.delta_depth << "\n"
      << "jmax = " << c.jmax << "\n"
      << "prec_z = " << c.prec_z << "\n"
      << "[job]\n"
      << "M = " << c.M << "\n"
      << "eisenstein = " << format_polynomial(c.eisenstein) << "\n"
      << "p = " << c.p << "\n"
      << "[range]\n"
      << "i_max = " << c.i_max << "\n"
      << "i_min = " << c.i_min << "\n"
      << "[relations]\n";
    char key[16];
    for (std::size_t k = 0; k < c.relations.size(); ++k) {
        std::snprintf(key, sizeof key, "set%04zu", k);
        o << key << " = " << format_relation_set(c.relations[k]) << "\n";
    }
    o << "[run]\n"
      << "format = " << c.format << "\n"
      << "jobs = " << c.jobs << "\n"
      << "out = " << c.out << "\n"
      << "seed = " << c.seed << "\n";
    return o.str();
}

std::string config_hash(const JobConfig& c) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : serialize_config(c)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate(const JobConfig& c) {
    if (!is_prime(c.p)) throw ConfigError("prime", "p = " + std::to_string(c.p) + " is not prime");
    if (c.M < 1) throw ConfigError("precision", "M must be at least 1");
    try {
        Modulus(c.p, c.M);
    } catch (const MalformedInput& e) {
        throw ConfigError("precision", e.what());
    }
    Eisenstein E{c.p, c.eisenstein};
    if (auto rule = E.violated_rule(); !rule.empty()) throw ConfigError(rule, "eisenstein " + pretty_polynomial(c.eisenstein) + ": " + E.violation());
    if (c.i_min > c.i_max) throw ConfigError("i_range", "i_min exceeds i_max");
    if (c.prec_z < 1 || c.delta_depth < 0 || c.degree < 0 || c.jmax < 0) throw ConfigError("bounds", "bounds must be non-negative and prec_z positive");
    if (c.jobs < 1) throw ConfigError("jobs", "jobs must be at least 1");
    if (c.format != "json" && c.format != "csv") throw ConfigError("format", "format must be json or csv");
    if (c.relations.empty()) throw ConfigError("relations", "at least one relation set is required");
}

std::vector<QrspPresentation> presentations(const JobConfig& c) {
    validate(c);
    auto prism = make_breuil_kisin(c.p, c.M, c.prec_z, c.eisenstein);
    std::vector<QrspPresentation> out;
    for (const auto& set : c.relations) {
        try {
            out.push_back(make_presentation(prism, set));
        } catch (const PresentationError& e) {
            throw ConfigError("regular_sequence", e.what());
        } catch (const CapabilityError& e) {
            throw ConfigError("capability", e.what());
        } catch (const MalformedInput& e) {
            throw ConfigError("relation", e.what());
        }
    }
    return out;
}

}  // namespace prism::cli
