#include "sc/config.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

namespace sc {

namespace {

const std::set<std::string> kKnownKeys = {"gamma",     "signs",       "x0",
                                          "t_end",     "dt_max",      "step_factor",
                                          "eps_coll",  "seed",        "record_stride"};

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

double parse_double(const std::string& v, const std::string& key, std::vector<std::string>& errs) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing garbage");
        return d;
    } catch (const std::exception&) {
        errs.push_back("config: key '" + key + "': cannot parse '" + v + "' as a number");
        return 0.0;
    }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key,
                        std::vector<std::string>& errs) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        errs.push_back("config: key '" + key + "': cannot parse '" + v + "' as an unsigned integer");
        return 0;
    }
    return out;
}

SignVector parse_signs(const std::string& v, std::vector<std::string>& errs) {
    std::vector<int> signs;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok == "+" || tok == "+1" || tok == "1") {
            signs.push_back(1);
        } else if (tok == "-" || tok == "-1") {
            signs.push_back(-1);
        } else if (!tok.empty()) {
            errs.push_back("config: key 'signs': token '" + tok + "' is not +1 or -1");
        }
    }
    if (signs.empty()) {
        errs.push_back("config: key 'signs': no charges given");
        return SignVector{};
    }
    return SignVector(signs);
}

// x0 = (x,y) (x,y) ...   whitespace between points, exactly two coordinates each
Configuration parse_points(const std::string& v, std::vector<std::string>& errs) {
    std::vector<Vec2> pts;
    std::size_t i = 0;
    while (i < v.size()) {
        while (i < v.size() && std::isspace(static_cast<unsigned char>(v[i]))) ++i;
        if (i >= v.size()) break;
        if (v[i] != '(') {
            errs.push_back("config: key 'x0': expected '(' in point list");
            return Configuration{};
        }
        std::size_t close = v.find(')', i);
        if (close == std::string::npos) {
            errs.push_back("config: key 'x0': unbalanced '(' in point list");
            return Configuration{};
        }
        std::string body = v.substr(i + 1, close - i - 1);
        std::size_t comma = body.find(',');
        if (comma == std::string::npos) {
            errs.push_back("config: key 'x0': point '" + body + "' needs two coordinates");
            return Configuration{};
        }
        Vec2 p;
        p.x = parse_double(trim(body.substr(0, comma)), "x0", errs);
        p.y = parse_double(trim(body.substr(comma + 1)), "x0", errs);
        pts.push_back(p);
        i = close + 1;
    }
    if (pts.empty()) errs.push_back("config: key 'x0': no points given");
    return Configuration::all_alive(std::move(pts));
}

std::string fmt_double(double d) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", d);
    return buf;
}

}  // namespace

SimParams parse_config_text(std::string_view text, const Overrides& overrides) {
    std::map<std::string, std::string> raw;
    std::vector<std::string> errs;

    std::size_t lineno = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string line(text.substr(start, end - start));
        start = end + 1;
        ++lineno;

        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::string trimmed = trim(line);
        if (trimmed.empty()) continue;
        std::size_t eq = trimmed.find('=');
        if (eq == std::string::npos) {
            errs.push_back("config line " + std::to_string(lineno) + ": expected 'key = value'");
            continue;
        }
        std::string key = trim(trimmed.substr(0, eq));
        std::string value = trim(trimmed.substr(eq + 1));
        if (!kKnownKeys.count(key)) {
            errs.push_back("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
            continue;
        }
        raw[key] = value;
    }

    for (const auto& [key, value] : overrides) {
        if (!kKnownKeys.count(key)) {
            errs.push_back("override: unknown key '" + key + "'");
            continue;
        }
        raw[key] = value;
    }

    SimParams p;
    for (const char* req : {"gamma", "signs", "x0", "t_end"}) {
        if (!raw.count(req)) errs.push_back(std::string("config: missing required key '") + req + "'");
    }
    if (!errs.empty()) throw std::invalid_argument(ValidationReport{errs}.joined());

    try {
        p.gamma = parse_double(raw.at("gamma"), "gamma", errs);
        p.signs = parse_signs(raw.at("signs"), errs);
        p.x0 = parse_points(raw.at("x0"), errs);
        p.t_end = parse_double(raw.at("t_end"), "t_end", errs);
        if (raw.count("dt_max")) p.dt_max = parse_double(raw.at("dt_max"), "dt_max", errs);
        if (raw.count("step_factor"))
            p.step_factor = parse_double(raw.at("step_factor"), "step_factor", errs);
        if (raw.count("eps_coll")) p.eps_coll = parse_double(raw.at("eps_coll"), "eps_coll", errs);
        if (raw.count("seed")) p.seed = parse_u64(raw.at("seed"), "seed", errs);
        if (raw.count("record_stride")) {
            std::uint64_t rs = parse_u64(raw.at("record_stride"), "record_stride", errs);
            if (rs == 0 || rs > 0xFFFFFFFFULL) {
                errs.push_back("config: key 'record_stride': must be in [1, 2^32)");
            } else {
                p.record_stride = static_cast<std::uint32_t>(rs);
            }
        }
    } catch (const std::invalid_argument& e) {
        errs.push_back(e.what());
    }

    if (!errs.empty()) throw std::invalid_argument(ValidationReport{errs}.joined());
    return p;
}

SimParams parse_config_file(const std::filesystem::path& path, const Overrides& overrides) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config_text(os.str(), overrides);
}

std::string serialize_config(const SimParams& p) {
    std::ostringstream os;
    os << "gamma = " << fmt_double(p.gamma) << "\n";
    os << "signs = ";
    for (std::size_t i = 0; i < p.signs.size(); ++i) {
        if (i) os << ",";
        os << (p.signs[i] > 0 ? "+1" : "-1");
    }
    os << "\n";
    os << "x0 =";
    for (const Vec2& pt : p.x0.positions) {
        os << " (" << fmt_double(pt.x) << "," << fmt_double(pt.y) << ")";
    }
    os << "\n";
    os << "t_end = " << fmt_double(p.t_end) << "\n";
    os << "dt_max = " << fmt_double(p.dt_max) << "\n";
    os << "step_factor = " << fmt_double(p.step_factor) << "\n";
    os << "eps_coll = " << fmt_double(p.eps_coll) << "\n";
    os << "seed = " << p.seed << "\n";
    os << "record_stride = " << p.record_stride << "\n";
    return os.str();
}

std::pair<std::string, std::string> split_override(std::string_view kv) {
    std::size_t eq = kv.find('=');
    if (eq == std::string_view::npos) {
        throw std::invalid_argument("override must look like key=value, got '" + std::string(kv) +
                                    "'");
    }
    return {trim(kv.substr(0, eq)), trim(kv.substr(eq + 1))};
}

}  // namespace sc
