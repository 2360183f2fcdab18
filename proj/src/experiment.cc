// Copyright 2026 The stochlre Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include "stochlre/experiment.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "json.hpp"
#include "stochlre/analytics.h"

#ifndef STOCHLRE_VERSION
#define STOCHLRE_VERSION "unknown"
#endif

namespace stochlre {

namespace {

using json = nlohmann::ordered_json;

std::string located(const std::string &source, std::size_t line, const std::string &what) {
    std::string out = source;
    if (line > 0) {
        out += ":" + std::to_string(line);
    }
    return out + ": " + what;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::map<std::string, std::set<std::string>> &known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"seed", "trajectories", "workers", "t_max", "budget"}},
        {"lattice", {"kind", "sizes"}},
        {"protocol",
         {"p_u", "p_m", "theta", "gamma_x", "gates", "decoder", "halting_phi", "backend", "brick_order", "target"}},
        {"record", {"mode", "layers", "stride", "equilibration", "window", "observables"}},
        {"output", {"path", "format"}},
    };
    return keys;
}

// Parsing helpers; each throws std::invalid_argument with a short reason.
double parse_double(const std::string &text) {
    double v = 0.0;
    auto t = trim(text);
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw std::invalid_argument("expected a number, got '" + t + "'");
    }
    return v;
}

std::uint64_t parse_uint(const std::string &text) {
    auto t = trim(text);
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (!t.empty() && ec == std::errc{} && ptr == t.data() + t.size()) {
        return v;
    }
    // Allow integral values written as 1e6.
    double d = 0.0;
    try {
        d = parse_double(t);
    } catch (const std::invalid_argument &) {
        throw std::invalid_argument("expected a non-negative integer, got '" + t + "'");
    }
    if (d < 0 || d != std::floor(d) || d > 1.8e19) {
        throw std::invalid_argument("expected a non-negative integer, got '" + t + "'");
    }
    return static_cast<std::uint64_t>(d);
}

bool parse_bool(const std::string &text) {
    auto t = lower(trim(text));
    if (t == "true" || t == "yes" || t == "on" || t == "1") {
        return true;
    }
    if (t == "false" || t == "no" || t == "off" || t == "0") {
        return false;
    }
    throw std::invalid_argument("expected true or false, got '" + t + "'");
}

/// "a, b, c" or "start:stop:step" (inclusive of stop up to rounding).
std::vector<double> parse_double_list(const std::string &text) {
    std::vector<double> out;
    for (const auto &item : split_list(text)) {
        auto c1 = item.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(item));
            continue;
        }
        auto c2 = item.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw std::invalid_argument("range must be start:stop:step, got '" + item + "'");
        }
        double a = parse_double(item.substr(0, c1));
        double b = parse_double(item.substr(c1 + 1, c2 - c1 - 1));
        double step = parse_double(item.substr(c2 + 1));
        if (step <= 0 || b < a) {
            throw std::invalid_argument("range needs step > 0 and stop >= start: '" + item + "'");
        }
        auto n = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9));
        if (n > 100000) {
            throw std::invalid_argument("range too long: '" + item + "'");
        }
        for (std::size_t k = 0; k <= n; ++k) {
            // Round to 12 digits so 0.1:0.9:0.1 gives 0.3, not 0.30000000000000004.
            double v = a + static_cast<double>(k) * step;
            out.push_back(std::round(v * 1e12) / 1e12);
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("empty list");
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string &text) {
    std::vector<std::size_t> out;
    for (const auto &item : split_list(text)) {
        out.push_back(static_cast<std::size_t>(parse_uint(item)));
    }
    return out;
}

ObservableSet parse_observables(const std::string &text) {
    ObservableSet o;
    for (const auto &item : split_list(lower(text))) {
        if (item == "entropy" || item == "s") {
            o.entropy = true;
        } else if (item == "locals" || item == "zz") {
            o.locals = true;
        } else if (item == "globals" || item == "parity") {
            o.globals = true;
        } else if (item == "i2") {
            o.i2 = true;
        } else if (item == "i3") {
            o.i3 = true;
        } else if (item == "yy") {
            o.yy = true;
        } else if (item == "none" || item.empty()) {
        } else {
            throw std::invalid_argument("unknown observable '" + item + "' (entropy, locals, globals, i2, i3, yy)");
        }
    }
    return o;
}

std::string observables_string(const ObservableSet &o) {
    std::vector<std::string> names;
    if (o.entropy) names.push_back("entropy");
    if (o.locals) names.push_back("locals");
    if (o.globals) names.push_back("globals");
    if (o.i2) names.push_back("i2");
    if (o.i3) names.push_back("i3");
    if (o.yy) names.push_back("yy");
    if (names.empty()) {
        return "none";
    }
    std::string out;
    for (std::size_t k = 0; k < names.size(); ++k) {
        out += (k ? "," : "") + names[k];
    }
    return out;
}

RecordMode parse_mode(const std::string &text) {
    auto t = lower(trim(text));
    if (t == "tau") return RecordMode::Tau;
    if (t == "steady") return RecordMode::Steady;
    if (t == "series") return RecordMode::Series;
    throw std::invalid_argument("record mode must be tau, steady or series, got '" + t + "'");
}

template <typename T>
std::string join_numbers(const std::vector<T> &xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (k) {
            out += ",";
        }
        if constexpr (std::is_floating_point_v<T>) {
            out += format_number(xs[k]);
        } else {
            out += std::to_string(xs[k]);
        }
    }
    return out;
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t equilibration_layers(const ExperimentConfig &cfg, std::size_t L) {
    return static_cast<std::uint64_t>(std::ceil(cfg.equilibration * static_cast<double>(L)));
}

std::string num(double v) {
    return format_number(v);
}

}  // namespace

std::vector<double> parse_number_list(const std::string &text) {
    return parse_double_list(text);
}

ConfigError::ConfigError(const std::string &source, std::size_t line, const std::string &what)
    : std::runtime_error(located(source, line, what)), line_(line) {
}

BudgetExceeded::BudgetExceeded(double estimate, double limit)
    : std::runtime_error("estimated " + format_number(estimate) + " layer-site operations exceeds the budget of " +
                         format_number(limit) + " (raise experiment.budget to run anyway)"),
      estimate_(estimate),
      limit_(limit) {
}

std::string format_number(double v) {
    if (std::isnan(v)) {
        return "";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string to_string(RecordMode m) {
    switch (m) {
        case RecordMode::Tau:
            return "tau";
        case RecordMode::Steady:
            return "steady";
        case RecordMode::Series:
            return "series";
    }
    return "?";
}

ConfigFile ConfigFile::parse(std::string_view text, const std::string &source) {
    ConfigFile file;
    file.source_ = source;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto hash = raw.find_first_of("#;");
        std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(source, line_no, "unterminated section header");
            }
            section = lower(trim(line.substr(1, line.size() - 2)));
            if (!known_keys().contains(section)) {
                throw ConfigError(source, line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(source, line_no, "expected 'key = value'");
        }
        std::string key = lower(trim(line.substr(0, eq)));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(source, line_no, "missing key");
        }
        if (key.find('.') == std::string::npos) {
            if (section.empty()) {
                throw ConfigError(source, line_no, "key '" + key + "' outside a section");
            }
            key = section + "." + key;
        }
        auto dot = key.find('.');
        auto sec = known_keys().find(key.substr(0, dot));
        if (sec == known_keys().end() || !sec->second.contains(key.substr(dot + 1))) {
            throw ConfigError(source, line_no, "unknown key '" + key + "'");
        }
        if (value.empty()) {
            throw ConfigError(source, line_no, "empty value for '" + key + "'");
        }
        file.entries_[key] = Entry{value, line_no};
    }
    return file;
}

ConfigFile ConfigFile::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path, 0, "cannot open config file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void ConfigFile::set(const std::string &key, const std::string &value) {
    auto dot = key.find('.');
    auto sec = dot == std::string::npos ? known_keys().end() : known_keys().find(key.substr(0, dot));
    if (sec == known_keys().end() || !sec->second.contains(key.substr(dot + 1))) {
        throw ConfigError("override", 0, "unknown key '" + key + "'");
    }
    entries_[key] = Entry{value, 0};
}

const ConfigFile::Entry *ConfigFile::find(const std::string &key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
}

void ExperimentConfig::apply(const ConfigFile &file) {
    source = file.source();
    for (const auto &[key, entry] : file.entries()) {
        const std::string &v = entry.value;
        try {
            if (key == "experiment.seed") {
                seed = parse_uint(v);
            } else if (key == "experiment.trajectories") {
                trajectories = static_cast<std::size_t>(parse_uint(v));
            } else if (key == "experiment.workers") {
                workers = static_cast<std::size_t>(parse_uint(v));
            } else if (key == "experiment.t_max") {
                t_max = parse_uint(v);
            } else if (key == "experiment.budget") {
                budget = parse_double(v);
            } else if (key == "lattice.kind") {
                lattice = parse_lattice_kind(lower(v));
            } else if (key == "lattice.sizes") {
                sizes = parse_size_list(v);
            } else if (key == "protocol.p_u") {
                p_u = parse_double_list(v);
            } else if (key == "protocol.p_m") {
                p_m = parse_double_list(v);
            } else if (key == "protocol.theta") {
                theta = parse_double_list(v);
            } else if (key == "protocol.gamma_x") {
                gamma_x = parse_double_list(v);
            } else if (key == "protocol.gates") {
                gates = parse_gate_set(lower(v));
            } else if (key == "protocol.decoder") {
                decoder = parse_bool(v);
            } else if (key == "protocol.halting_phi") {
                if (lower(v) == "none" || lower(v) == "off") {
                    halting_phi.reset();
                } else {
                    halting_phi = parse_double(v);
                }
            } else if (key == "protocol.backend") {
                backend = parse_backend(lower(v));
            } else if (key == "protocol.brick_order") {
                brick_order = parse_brick_order(lower(v));
            } else if (key == "protocol.target") {
                if (lower(v) == "default") {
                    target.reset();
                } else {
                    target = parse_target_kind(lower(v));
                }
            } else if (key == "record.mode") {
                mode = parse_mode(v);
            } else if (key == "record.layers") {
                layers = parse_uint(v);
            } else if (key == "record.stride") {
                stride = parse_uint(v);
            } else if (key == "record.equilibration") {
                equilibration = parse_double(v);
            } else if (key == "record.window") {
                window = parse_uint(v);
            } else if (key == "record.observables") {
                observables = parse_observables(v);
            } else if (key == "output.path") {
                out = v;
            } else if (key == "output.format") {
                format = lower(v);
                if (format != "csv" && format != "json") {
                    throw std::invalid_argument("format must be csv or json");
                }
            }
        } catch (const ConfigError &) {
            throw;
        } catch (const std::exception &e) {
            throw ConfigError(file.source(), entry.line, key + ": " + e.what());
        }
        origin[key] = entry.line;
    }
}

ExperimentConfig ExperimentConfig::from_file(const ConfigFile &file, bool require_seed) {
    ExperimentConfig cfg;
    if (require_seed && !file.find("experiment.seed")) {
        throw ConfigError(file.source(), 0, "experiment.seed is mandatory");
    }
    cfg.apply(file);
    cfg.validate();
    return cfg;
}

void ExperimentConfig::validate() const {
    auto fail = [&](const std::string &key, const std::string &what) {
        auto it = origin.find(key);
        throw ConfigError(source, it == origin.end() ? 0 : it->second, key + ": " + what);
    };
    if (trajectories < 2) {
        fail("experiment.trajectories", "need at least 2 trajectories");
    }
    if (workers < 1) {
        fail("experiment.workers", "need at least 1 worker");
    }
    if (t_max < 1) {
        fail("experiment.t_max", "must be positive");
    }
    if (!(budget > 0)) {
        fail("experiment.budget", "must be positive");
    }
    if (sizes.empty()) {
        fail("lattice.sizes", "empty size list");
    }
    if (!(equilibration >= 0)) {
        fail("record.equilibration", "must be non-negative");
    }
    if (mode == RecordMode::Steady && window < 1) {
        fail("record.window", "must be positive");
    }
    if (mode == RecordMode::Series && (layers < 1 || stride < 1)) {
        fail(layers < 1 ? "record.layers" : "record.stride", "must be positive");
    }
    if (observables.i2 && lattice != LatticeKind::Chain) {
        fail("record.observables", "i2 is defined on the chain only");
    }
    for (std::size_t L : sizes) {
        try {
            (void)Lattice::make(lattice, L);
        } catch (const std::exception &e) {
            fail("lattice.sizes", e.what());
        }
    }
    for (const auto &pt : expand_grid(*this)) {
        try {
            auto lat = Lattice::make(lattice, pt.L);
            protocol_params(*this, pt).validate(lat);
        } catch (const std::exception &e) {
            std::ostringstream where;
            where << e.what() << " (L=" << pt.L << ", p_u=" << num(pt.p_u) << ", p_m=" << num(pt.p_m)
                  << ", theta=" << num(pt.theta) << ", gamma_x=" << num(pt.gamma_x) << ")";
            // Blame the first key named in the message that the file set.
            std::string what = e.what();
            std::string key = "protocol";
            for (const char *k : {"p_u", "p_m", "theta", "gamma", "backend", "decoder", "halting", "phi", "gate",
                                  "dense", "qubits"}) {
                if (what.find(k) == std::string::npos) {
                    continue;
                }
                std::string name = k;
                if (name == "gamma") name = "gamma_x";
                if (name == "halting" || name == "phi") name = "halting_phi";
                if (name == "gate") name = "gates";
                if (name == "dense" || name == "qubits") name = "backend";
                if (origin.contains("protocol." + name)) {
                    key = "protocol." + name;
                    break;
                }
            }
            fail(key, where.str());
        }
    }
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    os << "experiment.seed = " << seed << "\n";
    os << "experiment.trajectories = " << trajectories << "\n";
    os << "experiment.t_max = " << t_max << "\n";
    os << "lattice.kind = " << to_string(lattice) << "\n";
    os << "lattice.sizes = " << join_numbers(sizes) << "\n";
    os << "protocol.p_u = " << join_numbers(p_u) << "\n";
    os << "protocol.p_m = " << join_numbers(p_m) << "\n";
    os << "protocol.theta = " << join_numbers(theta) << "\n";
    os << "protocol.gamma_x = " << join_numbers(gamma_x) << "\n";
    os << "protocol.gates = " << to_string(gates) << "\n";
    os << "protocol.decoder = " << (decoder ? "true" : "false") << "\n";
    os << "protocol.halting_phi = " << (halting_phi ? num(*halting_phi) : std::string("none")) << "\n";
    os << "protocol.backend = " << to_string(backend) << "\n";
    os << "protocol.brick_order = " << to_string(brick_order) << "\n";
    os << "protocol.target = " << (target ? to_string(*target) : std::string("default")) << "\n";
    os << "record.mode = " << to_string(mode) << "\n";
    switch (mode) {
        case RecordMode::Tau:
            break;
        case RecordMode::Series:
            os << "record.layers = " << layers << "\n";
            os << "record.stride = " << stride << "\n";
            break;
        case RecordMode::Steady:
            os << "record.equilibration = " << num(equilibration) << "\n";
            os << "record.window = " << window << "\n";
            break;
    }
    os << "record.observables = " << observables_string(observables) << "\n";
    return os.str();
}

std::uint64_t ExperimentConfig::hash() const {
    return fnv1a(canonical());
}

std::string ExperimentConfig::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

std::vector<GridPoint> expand_grid(const ExperimentConfig &cfg) {
    std::vector<GridPoint> out;
    for (std::size_t L : cfg.sizes) {
        for (double pu : cfg.p_u) {
            for (double pm : cfg.p_m) {
                for (double th : cfg.theta) {
                    for (double g : cfg.gamma_x) {
                        out.push_back(GridPoint{L, pu, pm, th, g});
                    }
                }
            }
        }
    }
    return out;
}

ProtocolParams protocol_params(const ExperimentConfig &cfg, const GridPoint &pt) {
    ProtocolParams p;
    p.p_u = pt.p_u;
    p.p_m = pt.p_m;
    p.theta = pt.theta;
    p.gamma_x = pt.gamma_x;
    p.gate_set = cfg.gates;
    p.decoder = cfg.decoder;
    p.halting_phi = cfg.halting_phi;
    p.t_max = cfg.t_max;
    p.seed = cfg.seed;
    p.backend = cfg.backend;
    p.brick_order = cfg.brick_order;
    return p;
}

RecordOptions record_options(const ExperimentConfig &cfg, const GridPoint &pt) {
    RecordOptions o;
    o.target = cfg.target;
    switch (cfg.mode) {
        case RecordMode::Tau:
            o.detect = true;
            o.stop_at_target = true;
            break;
        case RecordMode::Series:
            o.detect = true;
            o.stop_at_target = false;
            o.fixed_layers = cfg.layers;
            o.series_stride = cfg.stride;
            o.series = cfg.observables;
            break;
        case RecordMode::Steady: {
            auto eq = equilibration_layers(cfg, pt.L);
            o.detect = false;
            o.stop_at_target = false;
            o.fixed_layers = eq + cfg.window;
            o.steady_start = eq + 1;
            o.steady = cfg.observables;
            break;
        }
    }
    return o;
}

double estimate_layers(const ExperimentConfig &cfg, const GridPoint &pt) {
    const double cap = static_cast<double>(cfg.t_max);
    switch (cfg.mode) {
        case RecordMode::Series:
            return static_cast<double>(cfg.layers);
        case RecordMode::Steady:
            return static_cast<double>(equilibration_layers(cfg, pt.L) + cfg.window);
        case RecordMode::Tau:
            break;
    }
    bool clifford = pt.theta == 1.0 && pt.gamma_x == 0.0 && cfg.gates == GateSet::ZZ;
    if (!clifford || pt.p_u <= 0 || pt.p_m <= 0) {
        return cap;
    }
    double est = cap;
    try {
        switch (cfg.lattice) {
            case LatticeKind::Chain:
                est = combined_mean_time(pt.L, pt.p_u, pt.p_m);
                break;
            case LatticeKind::Lieb:
                if (pt.p_u == 1.0) {
                    est = mean_time_lieb(pt.L, pt.p_m);
                }
                break;
            case LatticeKind::Square:
                if (pt.p_u == 1.0) {
                    // Lower than the coin model (no deduction), fine for a guard.
                    est = 2.0 * second_largest_mean(pt.L * pt.L / 2, pt.p_m) + 1.0;
                }
                break;
        }
    } catch (const std::exception &) {
        est = cap;
    }
    if (!std::isfinite(est)) {
        est = cap;
    }
    return std::min(std::max(est, 1.0), cap);
}

double estimate_cost(const ExperimentConfig &cfg, const std::vector<GridPoint> &points) {
    double total = 0.0;
    for (const auto &pt : points) {
        auto lat = Lattice::make(cfg.lattice, pt.L);
        double n = static_cast<double>(lat.num_sites());
        double per_layer = cfg.backend == Backend::Dense ? n * std::ldexp(1.0, static_cast<int>(std::min(n, 1000.0))) : n;
        total += static_cast<double>(cfg.trajectories) * estimate_layers(cfg, pt) * per_layer;
    }
    return total;
}

double estimate_cost(const ExperimentConfig &cfg) {
    return estimate_cost(cfg, expand_grid(cfg));
}

void check_budget(const ExperimentConfig &cfg, const std::vector<GridPoint> &points) {
    double est = estimate_cost(cfg, points);
    if (est > cfg.budget) {
        throw BudgetExceeded(est, cfg.budget);
    }
}

void check_budget(const ExperimentConfig &cfg) {
    check_budget(cfg, expand_grid(cfg));
}

std::vector<PointResult> run_points(const ExperimentConfig &cfg, const std::vector<GridPoint> &points,
                                    const ProgressFn &progress) {
    std::vector<PointResult> out;
    out.reserve(points.size());
    for (std::size_t k = 0; k < points.size(); ++k) {
        const auto &pt = points[k];
        auto lat = Lattice::make(cfg.lattice, pt.L);
        EnsembleConfig ec;
        ec.params = protocol_params(cfg, pt);
        ec.options = record_options(cfg, pt);
        ec.trajectories = cfg.trajectories;
        ec.workers = cfg.workers;
        out.push_back(PointResult{pt, run_ensemble(lat, ec)});
        if (progress) {
            progress(k + 1, points.size(), pt);
        }
    }
    return out;
}

std::vector<PointResult> run_experiment(const ExperimentConfig &cfg, const ProgressFn &progress) {
    return run_points(cfg, expand_grid(cfg), progress);
}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) {
        throw std::logic_error("table row width mismatch");
    }
    rows.push_back(std::move(row));
}

void Table::write_csv(std::ostream &os) const {
    auto cell = [](const std::string &s) {
        if (s.find_first_of(",\"\n") == std::string::npos) {
            return s;
        }
        std::string q = "\"";
        for (char c : s) {
            q += c == '"' ? std::string("\"\"") : std::string(1, c);
        }
        return q + "\"";
    };
    for (std::size_t k = 0; k < columns.size(); ++k) {
        os << (k ? "," : "") << cell(columns[k]);
    }
    os << "\n";
    for (const auto &row : rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            os << (k ? "," : "") << cell(row[k]);
        }
        os << "\n";
    }
}

void Table::write_json(std::ostream &os) const {
    json arr = json::array();
    for (const auto &row : rows) {
        json obj = json::object();
        for (std::size_t k = 0; k < columns.size(); ++k) {
            const auto &s = row[k];
            if (s.empty()) {
                obj[columns[k]] = nullptr;
                continue;
            }
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
            // Hashes are hex text even when all digits.
            bool numeric = ec == std::errc{} && ptr == s.data() + s.size() && columns[k] != "config_hash";
            if (numeric) {
                obj[columns[k]] = v;
            } else {
                obj[columns[k]] = s;
            }
        }
        arr.push_back(std::move(obj));
    }
    os << arr.dump(2) << "\n";
}

namespace {

std::vector<std::string> point_prefix_columns() {
    return {"config_hash", "seed", "lattice", "L", "p_u", "p_m", "theta", "gamma_x"};
}

std::vector<std::string> point_prefix(const ExperimentConfig &cfg, const GridPoint &pt) {
    return {cfg.hash_hex(), std::to_string(cfg.seed), to_string(cfg.lattice), std::to_string(pt.L),
            num(pt.p_u),    num(pt.p_m),              num(pt.theta),          num(pt.gamma_x)};
}

void push_stat(std::vector<std::string> &row, const MeanStat &s) {
    row.push_back(s.count ? num(s.mean) : "");
    row.push_back(s.count ? num(s.std_err) : "");
}

}  // namespace

Table results_table(const ExperimentConfig &cfg, const std::vector<PointResult> &results) {
    Table t;
    t.columns = point_prefix_columns();
    for (const char *c : {"gates", "decoder", "halting_phi", "backend", "mode", "trajectories", "censored",
                          "halting_failures", "mean_tau", "stderr", "mean_tau_zz", "stderr_tau_zz", "mean_tau_z2",
                          "stderr_tau_z2", "tau_lower_bound", "S", "S_stderr", "locals", "locals_stderr", "globals",
                          "globals_stderr", "I2", "I2_stderr", "I3", "I3_stderr", "yy", "yy_stderr"}) {
        t.columns.emplace_back(c);
    }
    for (const auto &r : results) {
        auto row = point_prefix(cfg, r.point);
        const auto &s = r.stats;
        row.push_back(to_string(cfg.gates));
        row.push_back(cfg.decoder ? "true" : "false");
        row.push_back(cfg.halting_phi ? num(*cfg.halting_phi) : "");
        row.push_back(to_string(cfg.backend));
        row.push_back(to_string(cfg.mode));
        row.push_back(std::to_string(s.samples));
        row.push_back(std::to_string(s.censored));
        row.push_back(std::to_string(s.halting_failures));
        push_stat(row, s.tau);
        push_stat(row, s.tau_zz);
        push_stat(row, s.tau_z2);
        row.push_back(cfg.mode == RecordMode::Tau ? num(s.tau_lower_bound) : "");
        push_stat(row, s.steady_entropy);
        push_stat(row, s.steady_locals);
        push_stat(row, s.steady_globals);
        push_stat(row, s.steady_i2);
        push_stat(row, s.steady_i3);
        push_stat(row, s.steady_yy);
        t.add_row(std::move(row));
    }
    return t;
}

Table series_table(const ExperimentConfig &cfg, const std::vector<PointResult> &results) {
    Table t;
    t.columns = point_prefix_columns();
    for (const char *c : {"layer", "S", "S_stderr", "locals", "locals_stderr", "globals", "globals_stderr", "I2",
                          "I2_stderr", "I3", "I3_stderr", "yy", "yy_stderr"}) {
        t.columns.emplace_back(c);
    }
    for (const auto &r : results) {
        for (const auto &s : r.stats.series) {
            auto row = point_prefix(cfg, r.point);
            row.push_back(std::to_string(s.layer));
            push_stat(row, s.entropy);
            push_stat(row, s.locals);
            push_stat(row, s.globals);
            push_stat(row, s.i2);
            push_stat(row, s.i3);
            push_stat(row, s.yy);
            t.add_row(std::move(row));
        }
    }
    return t;
}

std::string manifest_json(const std::string &command, const ExperimentConfig &cfg,
                          const std::vector<PointResult> &results, double wall_seconds,
                          const std::vector<std::string> &outputs) {
    json m;
    m["tool"] = "stochlre";
    m["version"] = STOCHLRE_VERSION;
    m["command"] = command;
    m["config_hash"] = cfg.hash_hex();
    m["seed"] = cfg.seed;
    json config = json::object();
    std::istringstream lines(cfg.canonical());
    std::string line;
    while (std::getline(lines, line)) {
        auto eq = line.find(" = ");
        auto key = line.substr(0, eq);
        auto dot = key.find('.');
        config[key.substr(0, dot)][key.substr(dot + 1)] = line.substr(eq + 3);
    }
    config["experiment"]["workers"] = std::to_string(cfg.workers);
    config["experiment"]["budget"] = format_number(cfg.budget);
    config["output"]["path"] = cfg.out;
    config["output"]["format"] = cfg.format;
    m["config"] = config;
    m["canonical_config"] = cfg.canonical();
    m["wall_time_s"] = wall_seconds;
    m["workers"] = cfg.workers;
    m["budget"] = {{"limit", cfg.budget}, {"estimate", estimate_cost(cfg)}};
    json points = json::array();
    std::size_t censored = 0;
    std::size_t failures = 0;
    for (const auto &r : results) {
        censored += r.stats.censored;
        failures += r.stats.halting_failures;
        points.push_back({{"L", r.point.L},
                          {"p_u", r.point.p_u},
                          {"p_m", r.point.p_m},
                          {"theta", r.point.theta},
                          {"gamma_x", r.point.gamma_x},
                          {"trajectories", r.stats.samples},
                          {"censored", r.stats.censored},
                          {"halting_failures", r.stats.halting_failures},
                          {"all_censored", r.stats.all_censored}});
    }
    m["censoring"] = {{"censored", censored}, {"halting_failures", failures}};
    m["points"] = points;
    m["outputs"] = outputs;
    return m.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// predict

namespace {

using ParamMap = std::map<std::string, std::vector<double>>;

std::vector<double> need(const ParamMap &p, const std::string &name) {
    auto it = p.find(name);
    if (it == p.end() || it->second.empty()) {
        throw std::invalid_argument("missing parameter '" + name + "'");
    }
    return it->second;
}

std::vector<double> need_or(const ParamMap &p, const std::string &name, std::vector<double> fallback) {
    auto it = p.find(name);
    return it == p.end() || it->second.empty() ? fallback : it->second;
}

std::size_t as_size(double v, const std::string &name) {
    if (v < 0 || v != std::floor(v)) {
        throw std::invalid_argument(name + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

void check_known(const ParamMap &p, std::initializer_list<const char *> allowed, const std::string &kind) {
    for (const auto &[k, v] : p) {
        bool ok = false;
        for (const char *a : allowed) {
            ok = ok || k == a;
        }
        if (!ok) {
            throw std::invalid_argument("predict " + kind + ": unknown parameter '" + k + "'");
        }
    }
}

}  // namespace

std::vector<std::string> predict_kinds() {
    return {"naive", "pm1", "pu1", "fidelity", "markov-cdf", "pX", "tauZ2", "lieb", "coin-toss", "table1"};
}

Table predict_table(const std::string &kind, const ParamMap &params) {
    Table t;
    if (kind == "naive") {
        check_known(params, {"L", "p"}, kind);
        t.columns = {"L", "p", "tau_naive"};
        for (double L : need(params, "L")) {
            for (double p : need(params, "p")) {
                t.add_row({num(L), num(p), num(tau_naive(as_size(L, "L"), p))});
            }
        }
    } else if (kind == "pm1") {
        check_known(params, {"L", "p_u"}, kind);
        t.columns = {"L", "p_u", "mean_tau", "log_form"};
        for (double L : need(params, "L")) {
            for (double pu : need(params, "p_u")) {
                auto n = as_size(L, "L");
                t.add_row({num(L), num(pu), num(mean_time_pm1(n, pu)), num(log_mean_time(n, pu * pu)) });
            }
        }
    } else if (kind == "pu1") {
        check_known(params, {"L", "p_m"}, kind);
        t.columns = {"L", "p_m", "mean_tau"};
        for (double L : need(params, "L")) {
            for (double pm : need(params, "p_m")) {
                t.add_row({num(L), num(pm), num(mean_time_pu1(as_size(L, "L"), pm))});
            }
        }
    } else if (kind == "fidelity") {
        check_known(params, {"L", "p", "p_u", "p_m", "phi"}, kind);
        t.columns = {"L", "p", "phi", "tau_fidelity"};
        std::vector<double> ps;
        if (params.contains("p")) {
            ps = need(params, "p");
        } else {
            for (double pu : need(params, "p_u")) {
                for (double pm : need(params, "p_m")) {
                    ps.push_back(pu * pu * pm);
                }
            }
        }
        for (double L : need(params, "L")) {
            for (double p : ps) {
                for (double phi : need_or(params, "phi", {0.99})) {
                    t.add_row({num(L), num(p), num(phi), num(tau_fidelity(phi, p, as_size(L, "L")))});
                }
            }
        }
    } else if (kind == "markov-cdf") {
        check_known(params, {"t", "p_u", "p_m"}, kind);
        t.columns = {"t", "p_u", "p_m", "cdf_zz"};
        for (double tt : need(params, "t")) {
            for (double pu : need(params, "p_u")) {
                for (double pm : need(params, "p_m")) {
                    t.add_row({num(tt), num(pu), num(pm), num(cdf_zz(as_size(tt, "t"), pu, pm))});
                }
            }
        }
    } else if (kind == "pX") {
        check_known(params, {"p_u", "p_m"}, kind);
        t.columns = {"p_u", "p_m", "p_x"};
        for (double pu : need(params, "p_u")) {
            for (double pm : need(params, "p_m")) {
                t.add_row({num(pu), num(pm), num(p_x(pu, pm))});
            }
        }
    } else if (kind == "tauZ2") {
        check_known(params, {"L", "p_u", "p_m"}, kind);
        t.columns = {"L", "p_u", "p_m", "tau_z2", "mean_tau_zz", "combined"};
        for (double L : need(params, "L")) {
            for (double pu : need(params, "p_u")) {
                for (double pm : need(params, "p_m")) {
                    auto n = as_size(L, "L");
                    t.add_row({num(L), num(pu), num(pm), num(tau_z2(n, pu, pm)), num(mean_tau_zz(n, pu, pm)),
                               num(combined_mean_time(n, pu, pm))});
                }
            }
        }
    } else if (kind == "lieb") {
        check_known(params, {"L", "p_m"}, kind);
        t.columns = {"L", "p_m", "mean_tau"};
        for (double L : need(params, "L")) {
            for (double pm : need(params, "p_m")) {
                t.add_row({num(L), num(pm), num(mean_time_lieb(as_size(L, "L"), pm))});
            }
        }
    } else if (kind == "coin-toss") {
        check_known(params, {"L", "p_m", "seed", "runs", "mode"}, kind);
        t.columns = {"L", "p_m", "mean_tau", "stderr", "runs"};
        auto seed = static_cast<std::uint64_t>(need_or(params, "seed", {0.0}).front());
        auto runs = as_size(need_or(params, "runs", {10000.0}).front(), "runs");
        auto mode = need_or(params, "mode", {0.0}).front() != 0.0 ? CoinDeduction::SinglePass : CoinDeduction::Closure;
        for (double L : need(params, "L")) {
            for (double pm : need(params, "p_m")) {
                auto r = coin_toss_square(as_size(L, "L"), pm, seed, runs, mode);
                t.add_row({num(L), num(pm), num(r.mean_tau), num(r.stderr_tau), std::to_string(r.runs)});
            }
        }
    } else if (kind == "table1") {
        check_known(params, {"p_u", "p_m"}, kind);
        t.columns = {"p_u", "p_m", "row", "probability", "left_unitary", "right_unitary", "measured", "x2_image",
                     "y2z3_image", "deterministic"};
        for (double pu : need(params, "p_u")) {
            for (double pm : need(params, "p_m")) {
                for (const auto &r : local_circuit_table(pu, pm)) {
                    t.add_row({num(pu), num(pm), std::to_string(r.index), num(r.probability),
                               r.left_unitary ? "1" : "0", r.right_unitary ? "1" : "0", r.measured ? "1" : "0",
                               r.x2_image, r.y2z3_image, r.deterministic ? "1" : "0"});
                }
            }
        }
    } else {
        std::string known;
        for (const auto &k : predict_kinds()) {
            known += (known.empty() ? "" : ", ") + k;
        }
        throw std::invalid_argument("unknown predict kind '" + kind + "' (available: " + known + ")");
    }
    return t;
}

// ---------------------------------------------------------------------------
// figures

namespace {

ExperimentConfig base_figure(std::uint64_t seed = 1) {
    ExperimentConfig c;
    c.seed = seed;
    c.source = "<figure preset>";
    return c;
}

std::vector<double> range(double a, double b, double step) {
    std::vector<double> out;
    for (double v = a; v <= b + 1e-9; v += step) {
        out.push_back(std::round(v * 1e12) / 1e12);
    }
    return out;
}

void figure_prefix(Table &t, std::initializer_list<const char *> cols) {
    t.columns = {"config_hash", "seed"};
    for (const char *c : cols) {
        t.columns.emplace_back(c);
    }
}

std::vector<std::string> figure_row(const ExperimentConfig &cfg, std::vector<std::string> rest) {
    std::vector<std::string> row{cfg.hash_hex(), std::to_string(cfg.seed)};
    row.insert(row.end(), rest.begin(), rest.end());
    return row;
}

std::string mean_or_blank(const MeanStat &s) {
    return s.count ? num(s.mean) : "";
}
std::string err_or_blank(const MeanStat &s) {
    return s.count ? num(s.std_err) : "";
}

double safe(const std::function<double()> &f) {
    try {
        return f();
    } catch (const std::exception &) {
        return std::numeric_limits<double>::quiet_NaN();
    }
}

std::vector<PointResult> run_checked(const ExperimentConfig &cfg, const std::vector<GridPoint> &points,
                                     const ProgressFn &progress) {
    cfg.validate();
    check_budget(cfg, points);
    return run_points(cfg, points, progress);
}

/// Series table: one row per (point, layer) with the requested statistics.
Table series_figure(const ExperimentConfig &cfg, const std::vector<PointResult> &res, bool with_params) {
    Table t;
    if (with_params) {
        figure_prefix(t, {"t", "theta", "p_u", "p_m", "gamma_x", "zz", "zz_err", "parity", "parity_err",
                          "i2_over_log2", "i2_over_log2_err"});
    } else {
        figure_prefix(t, {"t", "S", "S_err", "zz", "zz_err"});
    }
    for (const auto &r : res) {
        for (const auto &s : r.stats.series) {
            if (with_params) {
                MeanStat i2 = s.i2;
                i2.mean /= std::numbers::ln2;
                i2.std_err /= std::numbers::ln2;
                t.add_row(figure_row(cfg, {std::to_string(s.layer), num(r.point.theta), num(r.point.p_u),
                                           num(r.point.p_m), num(r.point.gamma_x), mean_or_blank(s.locals),
                                           err_or_blank(s.locals), mean_or_blank(s.globals), err_or_blank(s.globals),
                                           mean_or_blank(i2), err_or_blank(i2)}));
            } else {
                t.add_row(figure_row(cfg, {std::to_string(s.layer), mean_or_blank(s.entropy), err_or_blank(s.entropy),
                                           mean_or_blank(s.locals), err_or_blank(s.locals)}));
            }
        }
    }
    return t;
}

}  // namespace

std::vector<std::string> figure_ids() {
    return {"fig3",  "fig4a",  "fig4b",  "fig5",   "fig7",   "fig8",      "fig9",
            "fig10", "fig12",  "fig13a", "fig14a", "fig16a", "fig16b", "transition"};
}

ExperimentConfig figure_config(const std::string &id) {
    ExperimentConfig c = base_figure();
    if (id == "fig3") {
        c.sizes = {512};
        c.p_u = {0.5};
        c.p_m = {0.5};
        c.trajectories = 1000;
        c.mode = RecordMode::Series;
        c.layers = 60;
        c.stride = 1;
        c.observables = parse_observables("entropy,locals");
    } else if (id == "fig4a") {
        c.sizes = {8, 16, 32, 64, 128, 256};
        c.p_u = {0.4, 0.6, 0.8};
        c.p_m = {1.0};
        c.trajectories = 1000;
    } else if (id == "fig4b") {
        c.sizes = {8, 16, 32, 64, 128, 256};
        c.p_u = {1.0};
        c.p_m = {0.4, 0.6, 0.8};
        c.trajectories = 1000;
    } else if (id == "fig5") {
        c.sizes = {8, 12, 16, 20};
        c.p_u = {0.6, 0.8};
        c.p_m = {0.6, 0.8};
        c.trajectories = 2000;
        c.budget = 1e10;
    } else if (id == "fig7") {
        c.sizes = {8, 12, 16, 20, 24};
        c.p_u = {0.3, 0.5, 0.7, 0.9};
        c.p_m = {0.8};
        c.trajectories = 1000;
        c.budget = 1e11;
    } else if (id == "fig8") {
        c.sizes = {96};
        c.gates = GateSet::ZZplusXX;
        c.p_u = {0.9};
        c.p_m = range(0.1, 0.9, 0.1);
        c.trajectories = 200;
        c.mode = RecordMode::Steady;
        c.observables = parse_observables("i3,yy,globals");
    } else if (id == "fig9") {
        c.sizes = {16};
        c.backend = Backend::Dense;
        c.theta = {1.0, 1.5, 2.0};
        c.p_u = {0.6, 1.0};
        c.p_m = {1.0, 0.8};
        c.trajectories = 50;
        c.mode = RecordMode::Series;
        c.layers = 40;
        c.observables = parse_observables("locals,globals,i2");
        c.budget = 1e12;
    } else if (id == "fig10") {
        c.sizes = {8, 16, 32, 64, 128};
        c.p_u = {0.6, 0.8};
        c.p_m = {0.6, 0.8};
        c.halting_phi = 0.99;
        c.trajectories = 1000;
        c.budget = 1e10;
    } else if (id == "fig12") {
        c.sizes = {14};
        c.backend = Backend::Dense;
        c.p_u = {1.0};
        c.p_m = {0.8};
        c.gamma_x = {0.0, 0.5};
        c.trajectories = 50;
        c.mode = RecordMode::Series;
        c.layers = 40;
        c.observables = parse_observables("locals,globals,i2");
        c.budget = 1e12;
    } else if (id == "fig13a") {
        c.lattice = LatticeKind::Lieb;
        c.sizes = {4, 6, 8};
        c.p_u = {1.0};
        c.p_m = {0.4, 0.6, 0.8};
        c.trajectories = 500;
    } else if (id == "fig14a") {
        c.lattice = LatticeKind::Square;
        c.sizes = {4, 6, 8};
        c.p_u = {1.0};
        c.p_m = {0.6, 0.8, 0.95};
        c.trajectories = 500;
    } else if (id == "fig16a" || id == "fig16b") {
        c.lattice = LatticeKind::Lieb;
        c.gates = GateSet::ZZplusXX;
        c.sizes = {4, 8, 12};
        c.p_u = {0.9};
        c.p_m = range(0.1, 0.9, 0.1);
        c.trajectories = 100;
        c.mode = RecordMode::Steady;
        c.observables = parse_observables("entropy,i3");
        c.budget = 1e10;
    } else if (id == "transition") {
        c.gates = GateSet::ZZplusXX;
        c.sizes = {16, 32, 64, 128};
        c.p_u = {0.8};
        c.p_m = range(0.1, 0.9, 0.1);
        c.trajectories = 200;
        c.mode = RecordMode::Steady;
        c.observables = parse_observables("entropy,i3");
        c.budget = 1e10;
    } else {
        std::string known;
        for (const auto &k : figure_ids()) {
            known += (known.empty() ? "" : ", ") + k;
        }
        throw std::invalid_argument("unknown figure '" + id + "' (available: " + known + ")");
    }
    return c;
}

Table run_figure(const std::string &id, const ExperimentConfig &cfg, const ProgressFn &progress) {
    (void)figure_config(id);  // rejects unknown ids
    Table t;
    if (id == "fig3") {
        return series_figure(cfg, run_checked(cfg, expand_grid(cfg), progress), false);
    }
    if (id == "fig9" || id == "fig12") {
        return series_figure(cfg, run_checked(cfg, expand_grid(cfg), progress), true);
    }
    if (id == "fig4a" || id == "fig4b" || id == "fig5" || id == "fig13a" || id == "fig14a") {
        auto res = run_checked(cfg, expand_grid(cfg), progress);
        if (id == "fig4a") {
            figure_prefix(t, {"L", "p_u", "mean_tau", "stderr", "analytic"});
        } else if (id == "fig4b" || id == "fig13a" || id == "fig14a") {
            figure_prefix(t, {"L", "p_m", "mean_tau", "stderr", "analytic"});
        } else {
            figure_prefix(t, {"L", "p_u", "p_m", "mean_tau", "stderr", "analytic"});
        }
        for (const auto &r : res) {
            const auto &pt = r.point;
            double analytic = safe([&] {
                if (id == "fig4a") return mean_time_pm1(pt.L, pt.p_u);
                if (id == "fig4b") return mean_time_pu1(pt.L, pt.p_m);
                if (id == "fig13a") return mean_time_lieb(pt.L, pt.p_m);
                if (id == "fig14a") return coin_toss_square(pt.L, pt.p_m, cfg.seed, 20000).mean_tau;
                return combined_mean_time(pt.L, pt.p_u, pt.p_m);
            });
            std::vector<std::string> rest{std::to_string(pt.L)};
            if (id == "fig4a") {
                rest.push_back(num(pt.p_u));
            } else if (id == "fig5") {
                rest.push_back(num(pt.p_u));
                rest.push_back(num(pt.p_m));
            } else {
                rest.push_back(num(pt.p_m));
            }
            rest.push_back(mean_or_blank(r.stats.tau));
            rest.push_back(err_or_blank(r.stats.tau));
            rest.push_back(num(analytic));
            t.add_row(figure_row(cfg, rest));
        }
        return t;
    }
    if (id == "fig7") {
        figure_prefix(t, {"L", "p_u", "p_m", "decoder", "mean_tau", "stderr", "analytic"});
        for (bool dec : {false, true}) {
            ExperimentConfig c = cfg;
            c.decoder = dec;
            for (const auto &r : run_checked(c, expand_grid(c), progress)) {
                const auto &pt = r.point;
                double analytic = dec ? std::numeric_limits<double>::quiet_NaN()
                                      : safe([&] { return combined_mean_time(pt.L, pt.p_u, pt.p_m); });
                t.add_row(figure_row(cfg, {std::to_string(pt.L), num(pt.p_u), num(pt.p_m), dec ? "true" : "false",
                                           mean_or_blank(r.stats.tau), err_or_blank(r.stats.tau), num(analytic)}));
            }
        }
        return t;
    }
    if (id == "fig10") {
        std::vector<GridPoint> diag;
        for (const auto &pt : expand_grid(cfg)) {
            if (pt.p_u == pt.p_m) {
                diag.push_back(pt);
            }
        }
        figure_prefix(t, {"L", "p", "halt_layer", "mean_tau", "stderr", "failure_fraction", "failure_stderr"});
        for (const auto &r : run_checked(cfg, diag, progress)) {
            const auto &pt = r.point;
            auto lat = Lattice::make(cfg.lattice, pt.L);
            auto n = static_cast<double>(r.stats.samples);
            double f = static_cast<double>(r.stats.halting_failures) / n;
            t.add_row(figure_row(cfg, {std::to_string(pt.L), num(pt.p_u),
                                       std::to_string(protocol_params(cfg, pt).halt_layer(lat)),
                                       mean_or_blank(r.stats.tau), err_or_blank(r.stats.tau), num(f),
                                       num(std::sqrt(f * (1 - f) / n))}));
        }
        return t;
    }
    // Steady-state sweeps over p_m.
    auto res = run_checked(cfg, expand_grid(cfg), progress);
    if (id == "fig8") {
        figure_prefix(t, {"p_m", "L", "I3", "I3_err", "yy", "yy_err", "parity", "parity_err"});
    } else if (id == "fig16a") {
        figure_prefix(t, {"p_m", "L", "S", "stderr"});
    } else if (id == "fig16b") {
        figure_prefix(t, {"p_m", "L", "I3", "stderr"});
    } else {
        figure_prefix(t, {"p_m", "L", "S", "S_err", "I3", "I3_err"});
    }
    for (const auto &r : res) {
        const auto &s = r.stats;
        std::vector<std::string> rest{num(r.point.p_m), std::to_string(r.point.L)};
        auto add = [&](const MeanStat &m) {
            rest.push_back(mean_or_blank(m));
            rest.push_back(err_or_blank(m));
        };
        if (id == "fig8") {
            add(s.steady_i3);
            add(s.steady_yy);
            add(s.steady_globals);
        } else if (id == "fig16a") {
            add(s.steady_entropy);
        } else if (id == "fig16b") {
            add(s.steady_i3);
        } else {
            add(s.steady_entropy);
            add(s.steady_i3);
        }
        t.add_row(figure_row(cfg, rest));
    }
    return t;
}

}  // namespace stochlre
