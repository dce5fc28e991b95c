#include "swmon/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace swmon {

using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
    if (!out) throw std::invalid_argument("write failed: " + path);
}

json descriptor_to_json(const FeatureDescriptor& d) {
    json j;
    j["kind"] = to_string(d.kind);
    j["cutoff"] = d.cutoff ? json(*d.cutoff) : json(nullptr);
    j["channel"] = d.channel;
    return j;
}

FeatureDescriptor descriptor_from_json(const json& j) {
    FeatureDescriptor d;
    d.kind = feature_kind_from_string(j.at("kind").get<std::string>());
    if (!j.at("cutoff").is_null()) d.cutoff = j.at("cutoff").get<double>();
    d.channel = j.at("channel").get<std::size_t>();
    return d;
}

json config_to_json_obj(const RunConfig& c) {
    json j;
    j["interval_len"] = c.interval_len;
    j["margin_k"] = c.margin_k;
    j["cutoffs"] = c.cutoffs;
    json kinds = json::array();
    for (auto k : c.kinds) kinds.push_back(to_string(k));
    j["kinds"] = kinds;
    j["m"] = c.m;
    j["alpha"] = c.alpha;
    j["vote_mode"] = to_string(c.vote_mode);
    j["alarm_threshold"] = c.alarm_threshold;
    j["sigma_floor"] = c.sigma_floor;
    j["trigger_channel"] = c.trigger_channel;
    j["cycle"] = c.cycle;
    j["seed"] = c.seed;
    j["noise_seconds"] = c.noise_seconds;
    j["switching_duration"] = c.switching_duration;
    j["train_per_scenario"] = c.train_per_scenario;
    return j;
}

RunConfig config_from_json_obj(const json& j) {
    RunConfig c;
    c.interval_len = j.at("interval_len").get<double>();
    c.margin_k = j.at("margin_k").get<double>();
    c.cutoffs = j.at("cutoffs").get<std::vector<double>>();
    c.kinds.clear();
    for (const auto& k : j.at("kinds"))
        c.kinds.push_back(feature_kind_from_string(k.get<std::string>()));
    c.m = j.at("m").get<std::size_t>();
    c.alpha = j.at("alpha").get<double>();
    c.vote_mode = vote_mode_from_string(j.at("vote_mode").get<std::string>());
    c.alarm_threshold = j.at("alarm_threshold").get<double>();
    c.sigma_floor = j.at("sigma_floor").get<double>();
    c.trigger_channel = j.at("trigger_channel").get<std::size_t>();
    c.cycle = j.at("cycle").get<std::vector<std::string>>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.noise_seconds = j.at("noise_seconds").get<double>();
    c.switching_duration = j.at("switching_duration").get<double>();
    c.train_per_scenario = j.at("train_per_scenario").get<std::size_t>();
    return c;
}

}  // namespace

std::vector<double> RunConfig::usable_cutoffs(double sample_rate) const {
    std::vector<double> out;
    for (double c : cutoffs)
        if (c > 0.0 && c < sample_rate / 2.0) out.push_back(c);
    return out;
}

std::string config_to_json(const RunConfig& config) {
    return config_to_json_obj(config).dump(2) + "\n";
}

RunConfig config_from_json(const std::string& text) {
    return config_from_json_obj(json::parse(text));
}

void save_config(const std::string& path, const RunConfig& config) {
    write_file(path, config_to_json(config));
}

RunConfig load_config(const std::string& path) {
    return config_from_json(read_file(path));
}

std::string model_to_json(const ModelFile& file) {
    json j;
    j["schema_version"] = file.schema_version;
    j["created"] = file.created;
    j["config"] = config_to_json_obj(file.config);

    json m;
    json descs = json::array();
    for (const auto& d : file.model.descriptors) descs.push_back(descriptor_to_json(d));
    m["descriptors"] = descs;
    m["fc"] = file.model.fc;
    m["normalizer"] = {{"mean", file.model.normalizer.mean},
                       {"stddev", file.model.normalizer.stddev},
                       {"degenerate", file.model.normalizer.degenerate}};
    m["centers"] = {{"scenarios", file.model.centers.scenarios},
                    {"centers", file.model.centers.centers},
                    {"sigma", file.model.centers.sigma}};
    m["calibration"] = {{"threshold", file.model.calibration.threshold},
                        {"mean_noise", file.model.calibration.mean_noise},
                        {"std_noise", file.model.calibration.std_noise},
                        {"margin_k", file.model.calibration.margin_k},
                        {"refractory", file.model.calibration.refractory}};
    m["cycle"] = file.model.cycle;
    j["model"] = m;
    return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model file: ") + e.what());
    }
    const int version = j.value("schema_version", -1);
    if (version != kModelSchemaVersion)
        throw SchemaError("model schema version " + std::to_string(version) +
                          " not supported (expected " +
                          std::to_string(kModelSchemaVersion) + ")");
    ModelFile file;
    file.schema_version = version;
    file.created = j.at("created").get<std::string>();
    file.config = config_from_json_obj(j.at("config"));

    const json& m = j.at("model");
    for (const auto& d : m.at("descriptors"))
        file.model.descriptors.push_back(descriptor_from_json(d));
    file.model.fc = m.at("fc").get<std::vector<double>>();
    file.model.normalizer.descriptors = file.model.descriptors;
    file.model.normalizer.mean = m.at("normalizer").at("mean").get<std::vector<double>>();
    file.model.normalizer.stddev = m.at("normalizer").at("stddev").get<std::vector<double>>();
    file.model.normalizer.degenerate =
        m.at("normalizer").at("degenerate").get<std::vector<bool>>();
    file.model.centers.scenarios =
        m.at("centers").at("scenarios").get<std::vector<std::string>>();
    file.model.centers.centers =
        m.at("centers").at("centers").get<std::vector<std::vector<double>>>();
    file.model.centers.sigma =
        m.at("centers").at("sigma").get<std::vector<std::vector<double>>>();
    file.model.calibration.threshold = m.at("calibration").at("threshold").get<double>();
    file.model.calibration.mean_noise = m.at("calibration").at("mean_noise").get<double>();
    file.model.calibration.std_noise = m.at("calibration").at("std_noise").get<double>();
    file.model.calibration.margin_k = m.at("calibration").at("margin_k").get<double>();
    file.model.calibration.refractory = m.at("calibration").at("refractory").get<double>();
    file.model.cycle = m.at("cycle").get<std::vector<std::string>>();
    file.model.created = file.created;
    file.model.validate();
    return file;
}

void save_model(const std::string& path, const ModelFile& file) {
    write_file(path, model_to_json(file));
}

ModelFile load_model(const std::string& path) {
    return model_from_json(read_file(path));
}

void save_truth(const std::string& path, const std::vector<EventSegment>& truth) {
    json arr = json::array();
    for (const auto& e : truth) {
        json rec;
        rec["start"] = e.start;
        rec["end"] = e.end;
        rec["label"] = e.label ? json(*e.label) : json(nullptr);
        arr.push_back(rec);
    }
    write_file(path, arr.dump(2) + "\n");
}

std::vector<EventSegment> load_truth(const std::string& path) {
    json arr;
    try {
        arr = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("truth file: ") + e.what());
    }
    std::vector<EventSegment> truth;
    for (const auto& rec : arr) {
        EventSegment e;
        e.start = rec.at("start").get<double>();
        e.end = rec.at("end").get<double>();
        if (!rec.at("label").is_null()) e.label = rec.at("label").get<std::string>();
        truth.push_back(std::move(e));
    }
    return truth;
}

std::string corpus_spec_to_json(const CorpusSpec& spec) {
    json j;
    json scenarios = json::array();
    for (const auto& s : spec.scenarios) {
        json a;
        a["label"] = s.label;
        a["dominant_freq"] = s.actuation.dominant_freq;
        json secondary = json::array();
        for (const auto& [f, amp] : s.actuation.secondary_freqs)
            secondary.push_back({{"freq", f}, {"amplitude", amp}});
        a["secondary_freqs"] = secondary;
        a["damping"] = s.actuation.damping;
        a["duration"] = s.actuation.duration;
        a["amplitude"] = s.actuation.amplitude;
        if (s.actuation.double_peak)
            a["double_peak"] = {{"delay", s.actuation.double_peak->delay},
                                {"relative_amplitude",
                                 s.actuation.double_peak->relative_amplitude}};
        if (s.drift_dominant_freq_to)
            a["drift_dominant_freq_to"] = *s.drift_dominant_freq_to;
        scenarios.push_back(a);
    }
    j["scenarios"] = scenarios;
    j["event_count"] = spec.event_count;
    j["gap"] = spec.gap;
    j["lead_in"] = spec.lead_in;
    j["snr_db"] = spec.snr_db;
    j["sample_rate"] = spec.sample_rate;
    j["seed"] = spec.seed;
    j["channel_name"] = spec.channel_name;
    return j.dump(2) + "\n";
}

CorpusSpec corpus_spec_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("corpus spec: ") + e.what());
    }
    CorpusSpec spec;
    for (const auto& a : j.at("scenarios")) {
        ScenarioSpec s;
        s.label = a.at("label").get<std::string>();
        s.actuation.dominant_freq = a.at("dominant_freq").get<double>();
        if (a.contains("secondary_freqs"))
            for (const auto& sf : a.at("secondary_freqs"))
                s.actuation.secondary_freqs.emplace_back(sf.at("freq").get<double>(),
                                                         sf.at("amplitude").get<double>());
        s.actuation.damping = a.value("damping", s.actuation.damping);
        s.actuation.duration = a.value("duration", s.actuation.duration);
        s.actuation.amplitude = a.value("amplitude", s.actuation.amplitude);
        if (a.contains("double_peak"))
            s.actuation.double_peak = ActuationSpec::DoublePeak{
                a.at("double_peak").at("delay").get<double>(),
                a.at("double_peak").at("relative_amplitude").get<double>()};
        if (a.contains("drift_dominant_freq_to"))
            s.drift_dominant_freq_to = a.at("drift_dominant_freq_to").get<double>();
        spec.scenarios.push_back(std::move(s));
    }
    spec.event_count = j.at("event_count").get<std::size_t>();
    spec.gap = j.value("gap", spec.gap);
    spec.lead_in = j.value("lead_in", spec.lead_in);
    spec.snr_db = j.value("snr_db", spec.snr_db);
    spec.sample_rate = j.value("sample_rate", spec.sample_rate);
    spec.seed = j.value("seed", spec.seed);
    spec.channel_name = j.value("channel_name", spec.channel_name);
    return spec;
}

CorpusSpec load_corpus_spec(const std::string& path) {
    return corpus_spec_from_json(read_file(path));
}

}  // namespace swmon
