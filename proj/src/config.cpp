#include "subdiff/config.hpp"

#include "subdiff/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <variant>

namespace subdiff {

namespace {

using Array = std::vector<double>;
using Value = std::variant<double, bool, std::string, Array>;

struct Entry {
    Value value;
    int line = 0;
};

// section -> key -> entry; the top-level table is "".
using Document = std::map<std::string, std::map<std::string, Entry>>;

const std::set<std::string>& known_sections() {
    static const std::set<std::string> known = {"",       "kernel", "problem", "eval",   "t_grid",    "lambda_grid",
                                                "tau_grid", "x_grid", "verify",  "tolerances"};
    return known;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void parse_error(const std::string& source, int line, const std::string& msg) {
    fail(ErrorCode::Parse, source + ":" + std::to_string(line) + ": " + msg);
}

std::optional<double> to_number(const std::string& s) {
    if (s.empty()) return std::nullopt;
    std::string t;
    for (char c : s)
        if (c != '_') t.push_back(c);
    const char* first = t.data() + (t.front() == '+' ? 1 : 0);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

// Drops a trailing # comment that is not inside a string.
std::string strip_comment(const std::string& line) {
    bool in_string = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
        if (line[i] == '#' && !in_string) return line.substr(0, i);
    }
    return line;
}

Value parse_value(const std::string& raw, const std::string& source, int line, const std::string& field) {
    if (raw.empty()) parse_error(source, line, "field '" + field + "': missing value");
    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"')
            parse_error(source, line, "field '" + field + "': unterminated string");
        return raw.substr(1, raw.size() - 2);
    }
    if (raw == "true") return true;
    if (raw == "false") return false;
    if (raw.front() == '[') {
        if (raw.back() != ']') parse_error(source, line, "field '" + field + "': arrays must close on the same line");
        Array out;
        std::stringstream items(raw.substr(1, raw.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            const std::string t = trim(item);
            if (t.empty()) continue;
            const auto v = to_number(t);
            if (!v) parse_error(source, line, "field '" + field + "': array entry '" + t + "' is not a number");
            out.push_back(*v);
        }
        return out;
    }
    if (const auto v = to_number(raw)) return *v;
    parse_error(source, line, "field '" + field + "': cannot read value '" + raw + "'");
}

Document parse_document(std::string_view text, const std::string& source) {
    Document doc;
    doc[""];
    std::string section;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(strip_comment(raw));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') parse_error(source, line, "malformed section header '" + s + "'");
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty()) parse_error(source, line, "empty section name");
            if (!known_sections().count(section)) parse_error(source, line, "unknown section [" + section + "]");
            if (doc.count(section)) parse_error(source, line, "section [" + section + "] appears twice");
            doc[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) parse_error(source, line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string field = section.empty() ? key : section + "." + key;
        if (key.empty()) parse_error(source, line, "missing key before '='");
        auto& table = doc[section];
        if (table.count(key)) parse_error(source, line, "field '" + field + "' is set twice");
        table[key] = Entry{parse_value(trim(s.substr(eq + 1)), source, line, field), line};
    }
    return doc;
}

// Typed access to one section; remembers which keys were consumed.
class Section {
public:
    Section(const Document& doc, std::string name, std::string source)
        : name_(std::move(name)), source_(std::move(source)) {
        const auto it = doc.find(name_);
        if (it != doc.end()) table_ = &it->second;
    }

    bool present() const { return table_ != nullptr; }
    bool has(const std::string& key) const { return table_ && table_->count(key); }

    std::optional<double> number(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (const auto* v = std::get_if<double>(&e->value)) return *v;
        wrong_type(*e, key, "a number");
    }
    double number(const std::string& key, double fallback) { return number(key).value_or(fallback); }
    double require_number(const std::string& key) {
        if (const auto v = number(key)) return *v;
        missing(key);
    }

    std::optional<int> integer(const std::string& key) {
        const auto v = number(key);
        if (!v) return std::nullopt;
        if (*v != std::floor(*v) || std::abs(*v) > 1e9) wrong_type(*find(key), key, "an integer");
        return static_cast<int>(*v);
    }

    std::optional<bool> boolean(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (const auto* v = std::get_if<bool>(&e->value)) return *v;
        wrong_type(*e, key, "true or false");
    }

    std::optional<std::string> string(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (const auto* v = std::get_if<std::string>(&e->value)) return *v;
        wrong_type(*e, key, "a string");
    }
    std::string require_string(const std::string& key) {
        if (auto v = string(key)) return *v;
        missing(key);
    }

    std::optional<Array> array(const std::string& key) {
        const Entry* e = find(key);
        if (!e) return std::nullopt;
        if (const auto* v = std::get_if<Array>(&e->value)) return *v;
        wrong_type(*e, key, "a numeric array");
    }

    int line(const std::string& key) const { return table_->at(key).line; }

    [[noreturn]] void invalid(const std::string& key, const std::string& what) const {
        if (has(key)) parse_error(source_, line(key), "field '" + field(key) + "': " + what);
        fail(ErrorCode::Parse, source_ + ": field '" + field(key) + "': " + what);
    }

    [[noreturn]] void missing(const std::string& key) const {
        fail(ErrorCode::Parse, source_ + ": [" + name_ + "] missing required field '" + field(key) + "'");
    }

    // Unknown keys are reported rather than silently ignored.
    void finish() const {
        if (!table_) return;
        for (const auto& [key, e] : *table_)
            if (!used_.count(key)) parse_error(source_, e.line, "unknown field '" + field(key) + "'");
    }

private:
    std::string field(const std::string& key) const { return name_.empty() ? key : name_ + "." + key; }

    const Entry* find(const std::string& key) {
        if (!table_) return nullptr;
        const auto it = table_->find(key);
        if (it == table_->end()) return nullptr;
        used_.insert(key);
        return &it->second;
    }

    [[noreturn]] void wrong_type(const Entry& e, const std::string& key, const char* expected) const {
        parse_error(source_, e.line, "field '" + field(key) + "': expected " + expected);
    }

    const std::map<std::string, Entry>* table_ = nullptr;
    std::string name_;
    std::string source_;
    std::set<std::string> used_;
};

// Wraps module validation errors with the section they came from.
template <class F>
auto with_context(const std::string& source, const std::string& section, F&& f) {
    try {
        return f();
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Parse || e.code() == ErrorCode::Io) throw;
        throw Error(e.code(), source + ": [" + section + "] " + e.what());
    }
}

KernelSpec read_kernel(Section& sec, const std::string& source) {
    const std::string type = sec.require_string("type");
    return with_context(source, "kernel", [&]() -> KernelSpec {
        if (type == "stable") return KernelSpec::stable(sec.require_number("theta"));
        if (type == "distributed_asymptotic")
            return KernelSpec::distributed_asymptotic(sec.require_number("C"), sec.require_number("kappa"));
        if (type == "inverse_gamma") return KernelSpec::inverse_gamma(sec.require_number("a"), sec.require_number("b"));
        if (type == "gamma") return KernelSpec::gamma(sec.require_number("a"), sec.require_number("b"));
        if (type == "tempered_stable")
            return KernelSpec::tempered_stable(sec.require_number("beta"), sec.require_number("theta"));
        if (type == "distributed_mu") {
            auto sigma = sec.array("sigma");
            auto mu = sec.array("mu");
            if (!sigma) sec.missing("sigma");
            if (!mu) sec.missing("mu");
            return KernelSpec::distributed_mu(std::move(*sigma), std::move(*mu));
        }
        sec.invalid("type", "unknown kernel type '" + type + "'");
    });
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    if (path.is_relative() && !base.empty()) path = base / path;
    return path;
}

std::filesystem::path existing_file(Section& sec, const std::string& key, const std::filesystem::path& base) {
    const std::filesystem::path path = resolve(base, sec.require_string(key));
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) sec.invalid(key, "file '" + path.string() + "' does not exist");
    return path;
}

LogGridSpec read_log_grid(Section& sec, const std::string& prefix) {
    LogGridSpec g;
    g.min = sec.require_number(prefix + "_min");
    g.max = sec.require_number(prefix + "_max");
    const auto ppd = sec.integer("points_per_decade");
    if (!ppd) sec.missing("points_per_decade");
    g.points_per_decade = *ppd;
    if (!(g.min > 0.0)) sec.invalid(prefix + "_min", "must be positive");
    if (!(g.min < g.max)) sec.invalid(prefix + "_max", "must exceed " + prefix + "_min");
    if (g.points_per_decade < 4) sec.invalid("points_per_decade", "must be at least 4");
    return g;
}

std::vector<double> read_linear_grid(Section& sec, const std::string& prefix, double lower_bound) {
    if (auto v = sec.array("values")) {
        if (v->empty()) sec.invalid("values", "must not be empty");
        for (std::size_t i = 0; i < v->size(); ++i) {
            if ((*v)[i] < lower_bound) sec.invalid("values", "entries below " + std::to_string(lower_bound));
            if (i > 0 && !((*v)[i] > (*v)[i - 1])) sec.invalid("values", "must be strictly increasing");
        }
        return *v;
    }
    const double lo = sec.require_number(prefix + "_min");
    const double hi = sec.require_number(prefix + "_max");
    const auto n = sec.integer("points");
    if (!n) sec.missing("points");
    if (lo < lower_bound) sec.invalid(prefix + "_min", "must be >= " + std::to_string(lower_bound));
    if (!(hi > lo)) sec.invalid(prefix + "_max", "must exceed " + prefix + "_min");
    if (*n < 2) sec.invalid("points", "must be at least 2");
    std::vector<double> out(static_cast<std::size_t>(*n));
    for (int i = 0; i < *n; ++i) out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (*n - 1);
    return out;
}

void positive(Section& sec, const std::string& key, double v) {
    if (!(v > 0.0) || !std::isfinite(v)) sec.invalid(key, "must be positive");
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".ein") == std::string::npos) s += ".0";
    return s;
}

std::string fmt(const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
    return s + "]";
}

}  // namespace

void read_two_columns(const std::filesystem::path& path, std::vector<double>& a, std::vector<double>& b) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
    a.clear();
    b.clear();
    std::string line;
    int n = 0;
    bool header = true;
    while (std::getline(in, line)) {
        ++n;
        const std::string s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        const auto comma = s.find(',');
        const auto x = comma == std::string::npos ? std::nullopt : to_number(trim(s.substr(0, comma)));
        const auto y = comma == std::string::npos ? std::nullopt : to_number(trim(s.substr(comma + 1)));
        if (!x || !y) {
            if (header) {
                header = false;
                continue;
            }
            fail(ErrorCode::Parse, path.string() + ":" + std::to_string(n) + ": expected two numeric columns");
        }
        header = false;
        a.push_back(*x);
        b.push_back(*y);
    }
    if (a.size() < 2) fail(ErrorCode::Parse, path.string() + ": need at least two data rows");
}

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                              const std::string& source) {
    const Document doc = parse_document(text, source);

    ExperimentConfig cfg;
    cfg.source = source;

    Section top(doc, "", source);
    if (const auto seed = top.number("seed")) {
        if (*seed < 0 || *seed != std::floor(*seed) || *seed > 9.007199254740992e15)
            top.invalid("seed", "must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(*seed);
    }
    top.finish();

    Section kernel(doc, "kernel", source);
    if (kernel.present()) cfg.kernel = read_kernel(kernel, source);
    kernel.finish();

    Section problem(doc, "problem", source);
    if (problem.present()) {
        if (problem.has("synthetic_v")) {
            SyntheticV syn;
            syn.path = existing_file(problem, "synthetic_v", base_dir);
            syn.tail_exponent = problem.require_number("tail_exponent");
            positive(problem, "tail_exponent", syn.tail_exponent);
            with_context(source, "problem", [&] {
                read_two_columns(syn.path, syn.tau, syn.values);
                VProfile::from_table(syn.tau, syn.values, syn.tail_exponent);  // validation only
                return 0;
            });
            cfg.synthetic_v = std::move(syn);
        } else {
            ProblemSpec p;
            p.alpha = problem.number("alpha", p.alpha);
            p.gamma = problem.number("gamma", p.gamma);
            p.a = problem.number("a", p.a);
            p.b = problem.number("b", p.b);
            p.s = problem.number("s", p.s);
            p.N = problem.integer("N").value_or(p.N);
            const std::string datum = problem.string("datum").value_or("gaussian");
            if (datum == "gaussian") {
                const double w = problem.number("width", 1.0);
                positive(problem, "width", w);
                p.phi = InitialDatum::gaussian(w);
            } else if (datum == "indicator") {
                const double r = problem.number("radius", 1.0);
                positive(problem, "radius", r);
                p.phi = InitialDatum::indicator(r);
            } else if (datum == "table") {
                cfg.datum_table = existing_file(problem, "datum_table", base_dir);
                std::vector<double> x;
                std::vector<double> v;
                read_two_columns(cfg.datum_table, x, v);
                p.phi = with_context(source, "problem", [&] { return InitialDatum::tabulated(x, v); });
            } else {
                problem.invalid("datum", "unknown datum '" + datum + "' (gaussian, indicator or table)");
            }
            with_context(source, "problem", [&] {
                p.validate();
                return 0;
            });
            cfg.problem = std::move(p);
        }
    }
    problem.finish();

    Section eval(doc, "eval", source);
    cfg.x_eval = eval.number("x", 0.0);
    eval.finish();

    Section tg(doc, "t_grid", source);
    if (tg.present()) cfg.t_grid = read_log_grid(tg, "t");
    tg.finish();

    Section lg(doc, "lambda_grid", source);
    if (lg.present()) cfg.lambda_grid = read_log_grid(lg, "lambda");
    lg.finish();

    Section taug(doc, "tau_grid", source);
    if (taug.present()) cfg.tau_values = read_linear_grid(taug, "tau", 0.0);
    taug.finish();

    Section xg(doc, "x_grid", source);
    if (xg.present()) cfg.x_values = read_linear_grid(xg, "x", -std::numeric_limits<double>::infinity());
    xg.finish();

    Section ver(doc, "verify", source);
    cfg.verify.fit_t_lo = ver.number("fit_t_lo");
    cfg.verify.fit_t_hi = ver.number("fit_t_hi");
    cfg.verify.t_check = ver.number("t_check");
    cfg.verify.lambda = ver.number("lambda", cfg.verify.lambda);
    cfg.verify.alt_route = ver.boolean("alt_route").value_or(cfg.verify.alt_route);
    positive(ver, "lambda", cfg.verify.lambda);
    if (cfg.verify.fit_t_lo && cfg.verify.fit_t_hi && !(*cfg.verify.fit_t_lo < *cfg.verify.fit_t_hi))
        ver.invalid("fit_t_hi", "must exceed fit_t_lo");
    ver.finish();

    Section tol(doc, "tolerances", source);
    Tolerances& t = cfg.tol;
    for (auto [key, slot] : {std::pair{"slope", &t.slope}, {"constant", &t.constant}, {"route", &t.route},
                             {"laplace", &t.laplace}, {"tauberian", &t.tauberian}, {"mass", &t.mass},
                             {"cross_check", &t.cross_check}}) {
        *slot = tol.number(key, *slot);
        positive(tol, key, *slot);
    }
    tol.finish();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Io, "cannot read config '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path(), path.string());
}

VProfile ExperimentConfig::profile() const {
    if (synthetic_v)
        return VProfile::from_table(synthetic_v->tau, synthetic_v->values, synthetic_v->tail_exponent,
                                    synthetic_v->path.filename().string());
    if (!problem) fail(ErrorCode::Parse, source + ": [problem] section is required");
    return VProfile::from_spec(*problem, x_eval);
}

std::string ExperimentConfig::echo() const {
    std::ostringstream os;
    os << "seed = " << seed << "\n";
    if (kernel) {
        os << "\n[kernel]\ntype = \"" << kernel->name() << "\"\n";
        std::visit(
            [&](const auto& k) {
                using K = std::decay_t<decltype(k)>;
                if constexpr (std::is_same_v<K, kernel::Stable>) os << "theta = " << fmt(k.theta) << "\n";
                if constexpr (std::is_same_v<K, kernel::DistributedOrderAsymptotic>)
                    os << "C = " << fmt(k.C) << "\nkappa = " << fmt(k.kappa) << "\n";
                if constexpr (std::is_same_v<K, kernel::InverseGamma> || std::is_same_v<K, kernel::Gamma>)
                    os << "a = " << fmt(k.a) << "\nb = " << fmt(k.b) << "\n";
                if constexpr (std::is_same_v<K, kernel::TemperedStable>)
                    os << "beta = " << fmt(k.beta) << "\ntheta = " << fmt(k.theta) << "\n";
                if constexpr (std::is_same_v<K, kernel::DistributedOrderMu>)
                    os << "sigma = " << fmt(k.sigma) << "\nmu = " << fmt(k.mu) << "\n";
            },
            kernel->variant());
    }
    if (synthetic_v) {
        os << "\n[problem]\nsynthetic_v = \"" << synthetic_v->path.string() << "\"\ntail_exponent = "
           << fmt(synthetic_v->tail_exponent) << "\n";
    } else if (problem) {
        const ProblemSpec& p = *problem;
        os << "\n[problem]\nalpha = " << fmt(p.alpha) << "\ngamma = " << fmt(p.gamma) << "\na = " << fmt(p.a)
           << "\nb = " << fmt(p.b) << "\ns = " << fmt(p.s) << "\nN = " << p.N << "\n";
        std::visit(
            [&](const auto& d) {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, datum::Gaussian>)
                    os << "datum = \"gaussian\"\nwidth = " << fmt(d.width) << "\n";
                if constexpr (std::is_same_v<D, datum::Indicator>)
                    os << "datum = \"indicator\"\nradius = " << fmt(d.radius) << "\n";
                if constexpr (std::is_same_v<D, datum::Tabulated>)
                    os << "datum = \"table\"\ndatum_table = \"" << datum_table.string() << "\"\n";
            },
            p.phi.variant());
    }
    os << "\n[eval]\nx = " << fmt(x_eval) << "\n";
    if (t_grid)
        os << "\n[t_grid]\nt_min = " << fmt(t_grid->min) << "\nt_max = " << fmt(t_grid->max)
           << "\npoints_per_decade = " << t_grid->points_per_decade << "\n";
    if (lambda_grid)
        os << "\n[lambda_grid]\nlambda_min = " << fmt(lambda_grid->min) << "\nlambda_max = " << fmt(lambda_grid->max)
           << "\npoints_per_decade = " << lambda_grid->points_per_decade << "\n";
    if (!tau_values.empty()) os << "\n[tau_grid]\nvalues = " << fmt(tau_values) << "\n";
    if (!x_values.empty()) os << "\n[x_grid]\nvalues = " << fmt(x_values) << "\n";
    os << "\n[verify]\n";
    if (verify.fit_t_lo) os << "fit_t_lo = " << fmt(*verify.fit_t_lo) << "\n";
    if (verify.fit_t_hi) os << "fit_t_hi = " << fmt(*verify.fit_t_hi) << "\n";
    if (verify.t_check) os << "t_check = " << fmt(*verify.t_check) << "\n";
    os << "lambda = " << fmt(verify.lambda) << "\nalt_route = " << (verify.alt_route ? "true" : "false") << "\n";
    os << "\n[tolerances]\nslope = " << fmt(tol.slope) << "\nconstant = " << fmt(tol.constant)
       << "\nroute = " << fmt(tol.route) << "\nlaplace = " << fmt(tol.laplace) << "\ntauberian = " << fmt(tol.tauberian)
       << "\nmass = " << fmt(tol.mass) << "\ncross_check = " << fmt(tol.cross_check) << "\n";
    return os.str();
}

}  // namespace subdiff
