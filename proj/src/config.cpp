#include "awr/config.hpp"

#include "awr/error.hpp"
#include "awr/mms.hpp"
#include "awr/snapshot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace awr {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
    T value{};
    const auto* first = text.data();
    const auto* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || text.empty()) {
        throw ConfigError("key '" + key + "': cannot read '" + text + "' as a number");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError("key '" + key + "': value must be finite");
    }
    return value;
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(trim(item), key));
    if (out.empty()) throw ConfigError("key '" + key + "': empty list");
    return out;
}

bool parse_bool(const std::string& text, const std::string& key) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw ConfigError("key '" + key + "': expected true or false, got '" + text + "'");
}

// One entry per key: how to read it into a config and how to print it back.
struct Key {
    std::function<void(RunConfig&, const std::string&, const std::string&)> read;
    std::function<std::string(const RunConfig&)> write;
};

std::string show(double v) {
    std::ostringstream out;
    out.precision(std::numeric_limits<double>::max_digits10);
    out << v;
    return out.str();
}

template <class T>
std::string show_list(const std::vector<T>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ", ";
        if constexpr (std::is_floating_point_v<T>) {
            s += show(values[i]);
        } else {
            s += std::to_string(values[i]);
        }
    }
    return s;
}

Key number(double RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v, const std::string& k) { c.*field = parse_number<double>(v, k); },
            [field](const RunConfig& c) { return show(c.*field); }};
}

Key integer(int RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v, const std::string& k) { c.*field = parse_number<int>(v, k); },
            [field](const RunConfig& c) { return std::to_string(c.*field); }};
}

Key text(std::string RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v, const std::string&) { c.*field = v; },
            [field](const RunConfig& c) { return c.*field; }};
}

// Ordered as emitted.
const std::vector<std::pair<std::string, Key>>& keys() {
    static const std::vector<std::pair<std::string, Key>> table = {
        {"domain.dim", integer(&RunConfig::dim)},
        {"domain.n",
         {[](RunConfig& c, const std::string& v, const std::string& k) { c.n = parse_list<int>(v, k); },
          [](const RunConfig& c) { return show_list(c.n); }}},
        {"domain.length",
         {[](RunConfig& c, const std::string& v, const std::string& k) { c.length = parse_list<double>(v, k); },
          [](const RunConfig& c) { return show_list(c.length); }}},
        {"offset.variant", text(&RunConfig::variant)},
        {"offset.gamma", number(&RunConfig::gamma)},
        {"offset.a", number(&RunConfig::a)},
        {"offset.alpha", number(&RunConfig::alpha)},
        {"offset.beta", number(&RunConfig::beta)},
        {"offset.eps", number(&RunConfig::eps)},
        {"offset.rho_max", number(&RunConfig::rho_max)},
        {"offset.nonlocal",
         {[](RunConfig& c, const std::string& v, const std::string& k) { c.nonlocal = parse_bool(v, k); },
          [](const RunConfig& c) { return std::string(c.nonlocal ? "true" : "false"); }}},
        {"initial.data", text(&RunConfig::initial)},
        {"initial.rho_mean", number(&RunConfig::rho_mean)},
        {"initial.rho_amplitude", number(&RunConfig::rho_amplitude)},
        {"initial.u_amplitude", number(&RunConfig::u_amplitude)},
        {"initial.rho_snapshot", text(&RunConfig::rho_snapshot)},
        {"initial.u_snapshot", text(&RunConfig::u_snapshot)},
        {"time.T_total", number(&RunConfig::T_total)},
        {"time.slab_T", number(&RunConfig::slab_T)},
        {"time.M_levels", integer(&RunConfig::M_levels)},
        {"tolerances.tol_fix", number(&RunConfig::tol_fix)},
        {"tolerances.tol_mp", number(&RunConfig::tol_mp)},
        {"tolerances.max_iter", integer(&RunConfig::max_iter)},
        {"transport.interpolation", text(&RunConfig::interpolation)},
        {"output.directory", text(&RunConfig::directory)},
        {"output.snapshot_stride", integer(&RunConfig::snapshot_stride)},
        {"output.heatmap_axis", integer(&RunConfig::heatmap_axis)},
        {"output.heatmap_slice", integer(&RunConfig::heatmap_slice)},
    };
    return table;
}

template <class T>
void broadcast(std::vector<T>& values, int dim, const char* key) {
    if (values.size() == 1) values.assign(dim, values[0]);
    if (static_cast<int>(values.size()) != dim) {
        throw ConfigError(std::string("key '") + key + "': expected 1 or " + std::to_string(dim) + " entries");
    }
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
}

bool is_catalog(const std::string& id) {
    const auto ids = catalog_ids();
    return id == "sine" || std::find(ids.begin(), ids.end(), id) != ids.end();
}

Field load_snapshot_field(const std::string& path, const Torus& torus, int components, const char* what) {
    const Snapshot s = [&] {
        try {
            return read_snapshot(path);
        } catch (const Error& e) {
            throw ConfigError(std::string(what) + " snapshot '" + path + "': " + e.what());
        }
    }();
    require(s.field.torus() == torus, std::string(what) + " snapshot '" + path + "' lattice does not match domain");
    require(s.field.components() == components,
            std::string(what) + " snapshot '" + path + "' has " + std::to_string(s.field.components()) +
                " components, expected " + std::to_string(components));
    return s.field;
}

} // namespace

RunConfig parse_config(std::istream& in) {
    RunConfig c;
    std::map<std::string, int> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;
        const auto eq = body.find('=');
        const std::string where = "line " + std::to_string(lineno) + ": ";
        if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        const auto& table = keys();
        const auto it = std::find_if(table.begin(), table.end(), [&](const auto& e) { return e.first == key; });
        if (it == table.end()) throw ConfigError(where + "unknown key '" + key + "'");
        if (seen.count(key)) {
            throw ConfigError(where + "key '" + key + "' already set on line " + std::to_string(seen[key]));
        }
        seen[key] = lineno;
        try {
            it->second.read(c, value, key);
        } catch (const ConfigError& e) {
            throw ConfigError(where + e.what());
        }
    }
    if (c.dim >= 1 && c.dim <= 3) {
        broadcast(c.n, c.dim, "domain.n");
        broadcast(c.length, c.dim, "domain.length");
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    try {
        return parse_config(in);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void emit_config(std::ostream& out, const RunConfig& config) {
    std::string section;
    for (const auto& [key, entry] : keys()) {
        const std::string s = key.substr(0, key.find('.'));
        if (s != section) {
            if (!section.empty()) out << '\n';
            out << "# " << s << '\n';
            section = s;
        }
        out << key << " = " << entry.write(config) << '\n';
    }
}

InterpMethod parse_interpolation(const std::string& name) {
    if (name == "quintic") return InterpMethod::QuinticSpline;
    if (name == "cubic") return InterpMethod::CubicSpline;
    if (name == "trig") return InterpMethod::Trigonometric;
    throw ConfigError("transport.interpolation: unknown method '" + name + "' (quintic, cubic, trig)");
}

Torus make_torus(const RunConfig& c) {
    std::array<int, 3> n{8, 8, 8};
    std::array<double, 3> l{1.0, 1.0, 1.0};
    for (int a = 0; a < c.dim; ++a) {
        n[a] = c.n.size() == 1 ? c.n[0] : c.n.at(a);
        l[a] = c.length.size() == 1 ? c.length[0] : c.length.at(a);
    }
    try {
        return Torus(c.dim, n, l);
    } catch (const Error& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
}

OffsetModel make_model(const RunConfig& c) {
    LocalOffset local;
    if (c.variant == "power_law") {
        local = PowerLaw{c.gamma};
    } else if (c.variant == "singular_rational") {
        local = SingularRational{c.a, c.alpha, c.beta};
    } else if (c.variant == "singular_reciprocal") {
        local = SingularReciprocal{c.eps, c.beta, c.rho_max};
    } else {
        throw ConfigError("offset.variant: unknown variant '" + c.variant +
                          "' (power_law, singular_rational, singular_reciprocal)");
    }
    try {
        return OffsetModel(local, c.nonlocal);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("offset: ") + e.what());
    }
}

PicardOptions make_options(const RunConfig& c) {
    PicardOptions o;
    o.levels = c.M_levels;
    o.tol_fix = c.tol_fix;
    o.tol_mp = c.tol_mp;
    o.max_iter = c.max_iter;
    o.transport.method = parse_interpolation(c.interpolation);
    return o;
}

std::pair<Field, Field> initial_data(const RunConfig& c) {
    const Torus torus = make_torus(c);
    const OffsetModel model = make_model(c);
    std::optional<Field> rho, u;
    if (c.initial == "snapshot") {
        rho = load_snapshot_field(c.rho_snapshot, torus, 1, "rho");
        u = load_snapshot_field(c.u_snapshot, torus, c.dim, "u");
    } else if (c.initial == "sine") {
        rho = Field::sample(torus, [&](const Point& x) {
            return c.rho_mean + c.rho_amplitude * std::sin(2 * M_PI * x[0] / torus.length(0));
        });
        u = Field::sample_vector(torus, [&](const Point& x, int a) {
            return c.u_amplitude * std::cos(2 * M_PI * x[a] / torus.length(a));
        });
    } else if (is_catalog(c.initial)) {
        try {
            const auto mc = build_case(c.initial, model, torus);
            rho = mc.rho(0.0);
            u = mc.u(0.0);
        } catch (const DomainViolation& e) {
            throw ConfigError(std::string("initial.data: ") + e.what());
        }
    } else {
        throw ConfigError("initial.data: unknown selector '" + c.initial + "'");
    }
    for (std::size_t i = 0; i < rho->nodes(); ++i) {
        if (model.admissible((*rho)[i])) continue;
        std::ostringstream msg;
        msg << "initial density " << (*rho)[i] << " at node " << i << " violates the "
            << (model.is_singular() ? "congestion barrier" : "vacuum bound") << " of " << model.name()
            << ": admissible interval is (0, " << model.rho_sup() << ")";
        throw ConfigError(msg.str());
    }
    return {std::move(*rho), std::move(*u)};
}

void validate(const RunConfig& c) {
    require(c.dim >= 1 && c.dim <= 3, "domain.dim must be 1, 2 or 3");
    auto per_axis = [&](std::size_t size) { return size == 1 || static_cast<int>(size) == c.dim; };
    require(per_axis(c.n.size()), "domain.n must have 1 or dim entries");
    require(per_axis(c.length.size()), "domain.length must have 1 or dim entries");
    make_torus(c);
    make_model(c);
    require(c.T_total > 0.0, "time.T_total must be > 0");
    require(c.slab_T > 0.0 && c.slab_T <= c.T_total, "time.slab_T must lie in (0, T_total]");
    const double slabs = c.T_total / c.slab_T;
    require(std::abs(slabs - std::round(slabs)) <= 1e-9 * slabs, "time.T_total must be a multiple of time.slab_T");
    require(c.M_levels >= 2, "time.M_levels must be >= 2");
    require(c.tol_fix > 0.0, "tolerances.tol_fix must be > 0");
    require(c.tol_mp >= 0.0, "tolerances.tol_mp must be >= 0");
    require(c.max_iter >= 1, "tolerances.max_iter must be >= 1");
    parse_interpolation(c.interpolation);
    require(!c.directory.empty(), "output.directory must not be empty");
    require(c.snapshot_stride >= 0, "output.snapshot_stride must be >= 0");
    if (c.dim == 3) {
        require(c.heatmap_axis >= 0 && c.heatmap_axis < 3, "output.heatmap_axis must be 0, 1 or 2");
        require(c.heatmap_slice >= 0 && c.heatmap_slice < make_torus(c).size(c.heatmap_axis),
                "output.heatmap_slice must index a lattice plane");
    }
    if (c.initial == "snapshot") {
        for (const auto* p : {&c.rho_snapshot, &c.u_snapshot}) {
            require(!p->empty(), "initial.data = snapshot needs initial.rho_snapshot and initial.u_snapshot");
            require(std::filesystem::exists(*p), "snapshot file '" + *p + "' does not exist");
        }
    }
    initial_data(c);
}

} // namespace awr
