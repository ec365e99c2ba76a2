#include "ionnode/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>

namespace ionnode::scenario {

using nlohmann::json;

namespace {

constexpr double kAtomicMass = 1.66053906660e-27;

// Typed access to one JSON object with the dotted path kept for errors.
class Reader {
public:
    Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail("", "expected an object");
    }

    template <class T>
    T get(const std::string& key, T fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        return convert<T>(key);
    }

    template <class T>
    T require(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) fail(key, "missing field");
        return convert<T>(key);
    }

    template <class T>
    std::optional<T> optional(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key) || j_.at(key).is_null()) return std::nullopt;
        return convert<T>(key);
    }

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) && !j_.at(key).is_null();
    }

    Reader child(const std::string& key) {
        seen_.insert(key);
        return Reader(j_.at(key), join(key));
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    /// Rejects keys never asked for, which are almost always typos.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(it.key(), "unknown field");
    }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw ConfigError((key.empty() ? path_ : join(key)) + ": " + why);
    }

private:
    template <class T>
    T convert(const std::string& key) {
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception&) {
            fail(key, "wrong type");
        }
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <class F>
void validated(const std::string& prefix, F&& check) {
    try {
        check();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(prefix + "." + e.what());
    }
}

budget::Improvements parse_future(Reader r) {
    budget::Improvements f;
    f.objective_eff = r.optional<double>("objective_eff");
    f.fiber_coupling = r.optional<double>("fiber_coupling");
    f.conversion_eff = r.optional<double>("conversion_eff");
    f.fiber_transmission = r.optional<double>("fiber_transmission");
    f.other_optics = r.optional<double>("other_optics");
    f.detector_eff = r.optional<double>("detector_eff");
    f.attempt_rate = r.optional<double>("attempt_rate");
    f.multiplexing = r.optional<double>("multiplexing");
    r.finish();
    return f;
}

budget::NodeConfig parse_node(Reader r) {
    budget::NodeConfig c;
    c.branching_weight = r.get("branching_weight", c.branching_weight);
    c.excitation_prob = r.get("excitation_prob", c.excitation_prob);
    c.objective_eff = r.require<double>("objective_eff");
    c.fiber_coupling = r.require<double>("fiber_coupling");
    c.conversion_eff = r.optional<double>("conversion_eff");
    c.fiber_transmission = r.require<double>("fiber_transmission");
    c.other_optics = r.require<double>("other_optics");
    c.detector_eff = r.require<double>("detector_eff");
    c.attempt_rate = r.require<double>("attempt_rate");
    c.fiber_length = r.require<double>("fiber_length");
    c.fiber_light_speed = r.get("fiber_light_speed", c.fiber_light_speed);
    c.rate_ceiling = r.get("rate_ceiling", c.rate_ceiling);
    c.multiplexing = r.get("multiplexing", c.multiplexing);
    c.cooling_period_attempts = r.get("cooling_period_attempts", c.cooling_period_attempts);
    c.cooling_time = r.get("cooling_time", c.cooling_time);
    c.rate_includes_overhead = r.get("rate_includes_overhead", c.rate_includes_overhead);
    c.doppler_time = r.get("doppler_time", c.doppler_time);
    c.eit_time = r.get("eit_time", c.eit_time);
    c.storage_time = r.get("storage_time", c.storage_time);
    if (r.has("future")) c.future = parse_future(r.child("future"));
    r.finish();
    validated(r.join("").substr(0, r.join("").size() - 1), [&] { c.validate(); });
    return c;
}

json node_json(const budget::NodeConfig& c) {
    json j{{"branching_weight", c.branching_weight},
           {"excitation_prob", c.excitation_prob},
           {"objective_eff", c.objective_eff},
           {"fiber_coupling", c.fiber_coupling},
           {"fiber_transmission", c.fiber_transmission},
           {"other_optics", c.other_optics},
           {"detector_eff", c.detector_eff},
           {"attempt_rate", c.attempt_rate},
           {"fiber_length", c.fiber_length},
           {"fiber_light_speed", c.fiber_light_speed},
           {"rate_ceiling", c.rate_ceiling},
           {"multiplexing", c.multiplexing},
           {"cooling_period_attempts", c.cooling_period_attempts},
           {"cooling_time", c.cooling_time},
           {"rate_includes_overhead", c.rate_includes_overhead},
           {"doppler_time", c.doppler_time},
           {"eit_time", c.eit_time},
           {"storage_time", c.storage_time}};
    if (c.conversion_eff) j["conversion_eff"] = *c.conversion_eff;
    if (c.future) {
        json f = json::object();
        const auto& i = *c.future;
        auto put = [&](const char* k, const std::optional<double>& v) {
            if (v) f[k] = *v;
        };
        put("objective_eff", i.objective_eff);
        put("fiber_coupling", i.fiber_coupling);
        put("conversion_eff", i.conversion_eff);
        put("fiber_transmission", i.fiber_transmission);
        put("other_optics", i.other_optics);
        put("detector_eff", i.detector_eff);
        put("attempt_rate", i.attempt_rate);
        put("multiplexing", i.multiplexing);
        j["future"] = f;
    }
    return j;
}

noise::NoiseParams parse_noise(Reader r) {
    noise::NoiseParams p;
    p.t1_prime = r.get("t1_prime", p.t1_prime);
    p.t2 = r.get("t2", p.t2);
    if (r.has("mod")) {
        p.mod.clear();
        const json& arr = r.raw("mod");
        if (!arr.is_array()) r.fail("mod", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader m(arr[i], r.join("mod[" + std::to_string(i) + "]"));
            p.mod.push_back({m.require<double>("frequency"), m.get("amplitude", 0.0), m.get("phase", 0.0)});
            m.finish();
        }
    }
    p.snr = r.optional<double>("snr");
    p.raman_pi_fidelity = r.get("raman_pi_fidelity", p.raman_pi_fidelity);
    p.raman_pulses = r.get("raman_pulses", p.raman_pulses);
    p.merge_fidelity = r.get("merge_fidelity", p.merge_fidelity);
    r.finish();
    validated("noise", [&] { p.validate(); });
    return p;
}

json noise_json(const noise::NoiseParams& p) {
    json mod = json::array();
    for (const auto& m : p.mod) mod.push_back({{"frequency", m.frequency}, {"amplitude", m.amplitude}, {"phase", m.phase}});
    json j{{"t1_prime", p.t1_prime},
           {"t2", p.t2},
           {"mod", mod},
           {"raman_pi_fidelity", p.raman_pi_fidelity},
           {"raman_pulses", p.raman_pulses},
           {"merge_fidelity", p.merge_fidelity}};
    if (p.snr) j["snr"] = *p.snr;
    return j;
}

heralding::Scheme parse_scheme(Reader& r, const std::string& s) {
    if (s == "direct") return heralding::Scheme::direct;
    if (s == "bsm") return heralding::Scheme::bsm;
    if (s == "single_photon") return heralding::Scheme::single_photon;
    r.fail("scheme", "expected one of direct, bsm, single_photon");
}

const char* scheme_name(heralding::Scheme s) {
    switch (s) {
        case heralding::Scheme::direct: return "direct";
        case heralding::Scheme::bsm: return "bsm";
        default: return "single_photon";
    }
}

crosstalk::CrosstalkParams parse_beam(Reader r) {
    crosstalk::CrosstalkParams b;
    b.omega = r.require<double>("omega");
    b.delta = r.require<double>("delta");
    b.gamma = r.require<double>("gamma");
    b.tau = r.require<double>("tau");
    b.pol_coeff = r.require<double>("pol_coeff");
    b.echo_alpha = r.get("echo_alpha", b.echo_alpha);
    b.attempt_rate = r.require<double>("attempt_rate");
    b.ops_per_attempt = r.get("ops_per_attempt", b.ops_per_attempt);
    r.finish();
    try {
        (void)b.validate();
    } catch (const std::invalid_argument& e) {
        r.fail("", e.what());
    }
    if (!(b.delta > 0.0)) r.fail("delta", "must be > 0");
    return b;
}

json beam_json(const crosstalk::CrosstalkParams& b) {
    return {{"omega", b.omega},         {"delta", b.delta},         {"gamma", b.gamma},
            {"tau", b.tau},             {"pol_coeff", b.pol_coeff}, {"echo_alpha", b.echo_alpha},
            {"attempt_rate", b.attempt_rate}, {"ops_per_attempt", b.ops_per_attempt}};
}

}  // namespace

std::vector<crosstalk::Operation> Scenario::crosstalk_operations() const {
    std::vector<crosstalk::Operation> ops;
    for (const auto& c : crosstalk) ops.push_back(c.op);
    return ops;
}

Scenario parse(const json& doc) {
    Reader r(doc, "");
    Scenario s;
    s.name = r.require<std::string>("name");
    s.description = r.get<std::string>("description", "");
    s.node = parse_node(r.child("node"));
    if (r.has("noise")) s.noise = parse_noise(r.child("noise"));

    if (r.has("infidelity")) {
        const json& arr = r.raw("infidelity");
        if (!arr.is_array()) r.fail("infidelity", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Reader t(arr[i], "infidelity[" + std::to_string(i) + "]");
            s.infidelity.push_back({t.require<std::string>("name"), t.require<double>("value")});
            if (!(s.infidelity.back().value >= 0.0)) t.fail("value", "must be >= 0");
            t.finish();
        }
    }

    if (r.has("herald")) {
        Reader h = r.child("herald");
        s.herald.chi = h.get("chi", s.herald.chi);
        s.herald.eta = h.get("eta", s.herald.eta);
        s.herald.scheme = parse_scheme(h, h.get<std::string>("scheme", "single_photon"));
        s.herald.phase = h.get("phase", s.herald.phase);
        if (!(s.herald.chi >= 0.0 && s.herald.chi <= 1.0)) h.fail("chi", "must be in [0, 1]");
        if (!(s.herald.eta >= 0.0 && s.herald.eta <= 1.0)) h.fail("eta", "must be in [0, 1]");
        h.finish();
    }

    if (r.has("crosstalk")) {
        const json& arr = r.raw("crosstalk");
        if (!arr.is_array()) r.fail("crosstalk", "expected an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string path = "crosstalk[" + std::to_string(i) + "]";
            Reader o(arr[i], path);
            CrosstalkOperation op;
            op.op.name = o.require<std::string>("name");
            const json& beams = o.raw("beams");
            if (!beams.is_array()) o.fail("beams", "expected an array");
            for (std::size_t b = 0; b < beams.size(); ++b)
                op.op.beams.push_back(parse_beam(Reader(beams[b], path + ".beams[" + std::to_string(b) + "]")));
            op.separation = o.optional<double>("separation");
            op.radius = o.optional<double>("radius");
            if (op.separation.has_value() != op.radius.has_value())
                o.fail("radius", "separation and radius go together");
            if (op.radius) {
                if (!(*op.radius > 0.0)) o.fail("radius", "must be > 0");
                op.op.memory_scale = crosstalk::rabi_scale_gaussian(*op.separation, *op.radius);
            } else {
                op.op.memory_scale = o.get("memory_scale", 1.0);
            }
            o.finish();
            s.crosstalk.push_back(std::move(op));
        }
    }

    if (r.has("heating")) {
        Reader h = r.child("heating");
        Heating heat;
        auto& p = heat.params;
        p.lambda = h.require<double>("lambda");
        p.mass = h.require<double>("mass_u") * kAtomicMass;
        p.p_excite = h.get("p_excite", p.p_excite);
        p.n_modes = h.get("n_modes", p.n_modes);
        p.mode_freqs = h.require<std::vector<double>>("mode_freqs");
        p.pump_survival = h.get("pump_survival", p.pump_survival);
        p.n_pump_rounds = h.get("n_pump_rounds", p.n_pump_rounds);
        p.initial_unwanted = h.get("initial_unwanted", p.initial_unwanted);
        heat.base_nbar = h.get("base_nbar", heat.base_nbar);
        heat.attempts_between_cooling = h.get("attempts_between_cooling", heat.attempts_between_cooling);
        h.finish();
        validated("heating", [&] { p.validate(); });
        s.heating = heat;
    }

    if (r.has("conversion")) {
        Reader c = r.child("conversion");
        Conversion conv;
        auto& m = conv.model;
        if (c.has("anchor")) {
            Reader a = c.child("anchor");
            const double power = a.require<double>("power");
            const double eff = a.require<double>("efficiency");
            a.finish();
            const double eta_max = c.require<double>("eta_max");
            try {
                m = conversion::ConversionModel::anchored(eta_max, power, eff);
            } catch (const std::invalid_argument& e) {
                c.fail("anchor", e.what());
            }
            conv.anchor = {power, eff};
        } else {
            m.eta_max = c.require<double>("eta_max");
            m.p_ref = c.require<double>("p_ref");
        }
        m.noise_per_nm = c.get("noise_per_nm", m.noise_per_nm);
        m.noise_ref_power = c.get("noise_ref_power", m.noise_ref_power);
        m.filter_bandwidth_hz = c.get("filter_bandwidth_hz", m.filter_bandwidth_hz);
        m.wavelength = c.get("wavelength", m.wavelength);
        m.dark_rate = c.get("dark_rate", m.dark_rate);
        conv.pump_power = c.get("pump_power", conv.pump_power);
        conv.signal_rate = c.optional<double>("signal_rate");
        c.finish();
        validated("conversion", [&] { m.validate(); });
        s.conversion = conv;
    }

    if (r.has("outputs")) s.outputs = r.raw("outputs").get<std::map<std::string, std::string>>();
    r.finish();
    return s;
}

json serialize(const Scenario& s) {
    json j{{"name", s.name}, {"node", node_json(s.node)}, {"noise", noise_json(s.noise)}};
    if (!s.description.empty()) j["description"] = s.description;
    if (!s.infidelity.empty()) {
        json arr = json::array();
        for (const auto& t : s.infidelity) arr.push_back({{"name", t.name}, {"value", t.value}});
        j["infidelity"] = arr;
    }
    j["herald"] = {{"chi", s.herald.chi},
                   {"eta", s.herald.eta},
                   {"scheme", scheme_name(s.herald.scheme)},
                   {"phase", s.herald.phase}};
    if (!s.crosstalk.empty()) {
        json arr = json::array();
        for (const auto& c : s.crosstalk) {
            json beams = json::array();
            for (const auto& b : c.op.beams) beams.push_back(beam_json(b));
            json o{{"name", c.op.name}, {"beams", beams}};
            if (c.radius) {
                o["separation"] = *c.separation;
                o["radius"] = *c.radius;
            } else {
                o["memory_scale"] = c.op.memory_scale;
            }
            arr.push_back(o);
        }
        j["crosstalk"] = arr;
    }
    if (s.heating) {
        const auto& p = s.heating->params;
        j["heating"] = {{"lambda", p.lambda},
                        {"mass_u", p.mass / kAtomicMass},
                        {"p_excite", p.p_excite},
                        {"n_modes", p.n_modes},
                        {"mode_freqs", p.mode_freqs},
                        {"pump_survival", p.pump_survival},
                        {"n_pump_rounds", p.n_pump_rounds},
                        {"initial_unwanted", p.initial_unwanted},
                        {"base_nbar", s.heating->base_nbar},
                        {"attempts_between_cooling", s.heating->attempts_between_cooling}};
    }
    if (s.conversion) {
        const auto& c = *s.conversion;
        json o{{"eta_max", c.model.eta_max},
               {"noise_per_nm", c.model.noise_per_nm},
               {"noise_ref_power", c.model.noise_ref_power},
               {"filter_bandwidth_hz", c.model.filter_bandwidth_hz},
               {"wavelength", c.model.wavelength},
               {"dark_rate", c.model.dark_rate},
               {"pump_power", c.pump_power}};
        if (c.anchor)
            o["anchor"] = {{"power", c.anchor->first}, {"efficiency", c.anchor->second}};
        else
            o["p_ref"] = c.model.p_ref;
        if (c.signal_rate) o["signal_rate"] = *c.signal_rate;
        j["conversion"] = o;
    }
    if (!s.outputs.empty()) j["outputs"] = s.outputs;
    return j;
}

std::filesystem::path scenario_dir() {
    if (const char* env = std::getenv("IONNODE_SCENARIO_DIR"); env && *env) return env;
    return IONNODE_DEFAULT_SCENARIO_DIR;
}

std::filesystem::path resolve(const std::string& name_or_path) {
    const std::filesystem::path direct(name_or_path);
    if (std::filesystem::is_regular_file(direct)) return direct;
    const auto named = scenario_dir() / (name_or_path + ".json");
    if (std::filesystem::is_regular_file(named)) return named;
    throw ConfigError("scenario: unknown scenario '" + name_or_path + "' (searched " + scenario_dir().string() + ")");
}

Scenario load(const std::string& name_or_path) {
    const auto path = resolve(name_or_path);
    std::ifstream in(path);
    if (!in) throw ConfigError("scenario: cannot read " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("scenario: " + path.string() + " is not valid JSON (" + e.what() + ")");
    }
    return parse(doc);
}

std::vector<std::string> list_scenarios() {
    std::vector<std::string> names;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(scenario_dir(), ec))
        if (entry.path().extension() == ".json") names.push_back(entry.path().stem().string());
    std::sort(names.begin(), names.end());
    return names;
}

std::string scenario_hash(const Scenario& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(s).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace ionnode::scenario
