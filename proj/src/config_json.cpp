#include "magneto/config_json.hpp"
#include "magneto/errors.hpp"

#include <fstream>
#include <set>

namespace magneto {

using nlohmann::json;

namespace {

// Tracks consumed keys so leftovers can be rejected.
class Strict {
public:
    Strict(const json& j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object()) throw ConfigError(where_ + ": expected a JSON object");
    }

    template <typename T>
    T get(const std::string& key, const T& fallback) {
        seen_.insert(key);
        if (!j_.contains(key)) return fallback;
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    template <typename T>
    T require(const std::string& key) {
        seen_.insert(key);
        if (!j_.contains(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
        try {
            return j_.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ConfigError(where_ + "." + key + ": " + e.what());
        }
    }

    const json* sub(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()))
                throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
    }

private:
    const json& j_;
    std::string where_;
    std::set<std::string> seen_;
};

json biquad_to_json(const BiquadCoeffs& c) {
    return json{{"b0", c.b0}, {"b1", c.b1}, {"b2", c.b2}, {"a1", c.a1}, {"a2", c.a2}};
}

BiquadCoeffs biquad_from_json(const json& j, const std::string& where) {
    Strict s(j, where);
    BiquadCoeffs c;
    c.b0 = s.require<double>("b0");
    c.b1 = s.get<double>("b1", 0.0);
    c.b2 = s.get<double>("b2", 0.0);
    c.a1 = s.get<double>("a1", 0.0);
    c.a2 = s.get<double>("a2", 0.0);
    s.done();
    return c;
}

} // namespace

json oracle_config_to_json(const OracleConfig& cfg) {
    json j;
    j["hysteresis"] = {{"M_s", cfg.hysteresis.m_s}, {"a", cfg.hysteresis.a},
                       {"alpha", cfg.hysteresis.alpha}, {"k", cfg.hysteresis.k},
                       {"c", cfg.hysteresis.c}};
    j["drive_gain"] = cfg.drive_gain;
    j["bias_amount"] = cfg.bias_amount;
    j["pre_filter"] = json::array();
    for (const auto& b : cfg.pre_filter) j["pre_filter"].push_back(biquad_to_json(b));
    j["post_filter"] = json::array();
    for (const auto& b : cfg.post_filter) j["post_filter"].push_back(biquad_to_json(b));
    j["timing_enabled"] = cfg.timing_enabled;
    j["wow"] = {{"depth_samples", cfg.wow.depth_samples}, {"rate_hz", cfg.wow.rate_hz},
                {"variance", cfg.wow.variance}};
    j["flutter"] = {{"depth_samples", cfg.flutter.depth_samples},
                    {"bandwidth_hz", cfg.flutter.bandwidth_hz}};
    j["base_delay_samples"] = cfg.base_delay_samples;
    j["hiss"] = {{"level_rms", cfg.hiss.level_rms}, {"hum_hz", cfg.hiss.hum_hz},
                 {"hum_level", cfg.hiss.hum_level}};
    j["seed"] = cfg.seed;
    j["pulse_rate_hz"] = cfg.pulse_rate_hz;
    return j;
}

OracleConfig oracle_config_from_json(const json& j, int sample_rate) {
    OracleConfig cfg = OracleConfig::defaults(sample_rate);
    Strict s(j, "oracle_config");
    if (const json* h = s.sub("hysteresis")) {
        Strict hs(*h, "oracle_config.hysteresis");
        cfg.hysteresis.m_s = hs.get<double>("M_s", cfg.hysteresis.m_s);
        cfg.hysteresis.a = hs.get<double>("a", cfg.hysteresis.a);
        cfg.hysteresis.alpha = hs.get<double>("alpha", cfg.hysteresis.alpha);
        cfg.hysteresis.k = hs.get<double>("k", cfg.hysteresis.k);
        cfg.hysteresis.c = hs.get<double>("c", cfg.hysteresis.c);
        hs.done();
    }
    cfg.drive_gain = s.get<double>("drive_gain", cfg.drive_gain);
    cfg.bias_amount = s.get<double>("bias_amount", cfg.bias_amount);
    if (const json* f = s.sub("pre_filter")) {
        cfg.pre_filter.clear();
        for (const auto& b : *f) cfg.pre_filter.push_back(biquad_from_json(b, "pre_filter[]"));
    }
    if (const json* f = s.sub("post_filter")) {
        cfg.post_filter.clear();
        for (const auto& b : *f) cfg.post_filter.push_back(biquad_from_json(b, "post_filter[]"));
    }
    cfg.timing_enabled = s.get<bool>("timing_enabled", cfg.timing_enabled);
    if (const json* w = s.sub("wow")) {
        Strict ws(*w, "oracle_config.wow");
        cfg.wow.depth_samples = ws.get<double>("depth_samples", cfg.wow.depth_samples);
        cfg.wow.rate_hz = ws.get<double>("rate_hz", cfg.wow.rate_hz);
        cfg.wow.variance = ws.get<double>("variance", cfg.wow.variance);
        ws.done();
    }
    if (const json* f = s.sub("flutter")) {
        Strict fs(*f, "oracle_config.flutter");
        cfg.flutter.depth_samples = fs.get<double>("depth_samples", cfg.flutter.depth_samples);
        cfg.flutter.bandwidth_hz = fs.get<double>("bandwidth_hz", cfg.flutter.bandwidth_hz);
        fs.done();
    }
    cfg.base_delay_samples = s.get<double>("base_delay_samples", cfg.base_delay_samples);
    if (const json* h = s.sub("hiss")) {
        Strict hs(*h, "oracle_config.hiss");
        cfg.hiss.level_rms = hs.get<double>("level_rms", cfg.hiss.level_rms);
        cfg.hiss.hum_hz = hs.get<double>("hum_hz", cfg.hiss.hum_hz);
        cfg.hiss.hum_level = hs.get<double>("hum_level", cfg.hiss.hum_level);
        hs.done();
    }
    cfg.seed = s.get<std::uint64_t>("seed", cfg.seed);
    cfg.pulse_rate_hz = s.get<double>("pulse_rate_hz", cfg.pulse_rate_hz);
    s.done();
    cfg.validate();
    return cfg;
}

json manifest_to_json(const DatasetManifest& m) {
    json j;
    j["oracle_config"] = oracle_config_to_json(m.oracle_config);
    j["seed"] = m.seed;
    j["splits"] = json::array();
    for (const auto& sp : m.splits)
        j["splits"].push_back({{"name", sp.name}, {"minutes", sp.minutes}});
    j["out_dir"] = m.out_dir;
    j["sample_rate"] = m.sample_rate;
    j["file_seconds"] = m.file_seconds;
    return j;
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    Strict s(j, "manifest");
    m.sample_rate = s.get<int>("sample_rate", 44100);
    if (const json* oc = s.sub("oracle_config"))
        m.oracle_config = oracle_config_from_json(*oc, m.sample_rate);
    else
        m.oracle_config = OracleConfig::defaults(m.sample_rate);
    m.seed = s.get<std::uint64_t>("seed", 0);
    if (const json* sp = s.sub("splits")) {
        for (const auto& e : *sp) {
            Strict ss(e, "manifest.splits[]");
            SplitSpec split;
            split.name = ss.require<std::string>("name");
            split.minutes = ss.require<double>("minutes");
            ss.done();
            m.splits.push_back(split);
        }
    }
    m.out_dir = s.require<std::string>("out_dir");
    m.file_seconds = s.get<double>("file_seconds", 15.0);
    s.done();
    m.validate();
    return m;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw IoError("write failed: " + path);
}

} // namespace magneto
