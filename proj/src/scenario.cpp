// SPDX-License-Identifier: Apache-2.0
#include "doa/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace doa {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ScenarioParseError(path + ": " + message);
}

void reject_unknown_keys(const json& node, const std::string& path,
                         std::initializer_list<const char*> allowed) {
    for (const auto& item : node.items()) {
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key)
                known = true;
        if (!known)
            fail(path, "unknown key '" + item.key() + "'");
    }
}

const json* find(const json& node, const char* key) {
    const auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

double require_number(const json& node, const std::string& path, const char* key) {
    const json* v = find(node, key);
    if (!v || !v->is_number())
        fail(path, std::string("expected number '") + key + "'");
    return v->get<double>();
}

double number_or(const json& node, const std::string& path, const char* key, double fallback) {
    const json* v = find(node, key);
    if (!v)
        return fallback;
    if (!v->is_number())
        fail(path, std::string("'") + key + "' must be a number");
    return v->get<double>();
}

std::int64_t integer_or(const json& node, const std::string& path, const char* key,
                        std::int64_t fallback) {
    const json* v = find(node, key);
    if (!v)
        return fallback;
    if (!v->is_number_integer())
        fail(path, std::string("'") + key + "' must be an integer");
    return v->get<std::int64_t>();
}

bool bool_or(const json& node, const std::string& path, const char* key, bool fallback) {
    const json* v = find(node, key);
    if (!v)
        return fallback;
    if (!v->is_boolean())
        fail(path, std::string("'") + key + "' must be a boolean");
    return v->get<bool>();
}

std::string string_or(const json& node, const std::string& path, const char* key,
                      const std::string& fallback) {
    const json* v = find(node, key);
    if (!v)
        return fallback;
    if (!v->is_string())
        fail(path, std::string("'") + key + "' must be a string");
    return v->get<std::string>();
}

ArrayGeometry parse_array(const json& node, const std::string& path) {
    reject_unknown_keys(node, path,
                        {"num_elements", "carrier_freq_hz", "spacing_m", "spacing_wavelengths"});
    ArrayGeometry g;
    g.num_elements = static_cast<int>(integer_or(node, path, "num_elements", 16));
    g.carrier_freq_hz = number_or(node, path, "carrier_freq_hz", 2.4e9);
    const json* meters = find(node, "spacing_m");
    const json* waves = find(node, "spacing_wavelengths");
    if (meters && waves)
        fail(path, "give spacing_m or spacing_wavelengths, not both");
    if (meters)
        g.spacing_m = meters->get<double>();
    else if (waves)
        g.spacing_m = waves->get<double>() * g.wavelength_m();
    else
        g.spacing_m = 0.5 * g.wavelength_m();
    return g;
}

NoiseSpec parse_noise(const json& node, const std::string& path,
                      std::vector<double>& sweep_out) {
    reject_unknown_keys(node, path, {"disabled", "snr_db", "snr_db_sweep", "noise_power_linear"});
    const bool disabled = bool_or(node, path, "disabled", false);
    const json* snr = find(node, "snr_db");
    const json* sweep = find(node, "snr_db_sweep");
    const json* power = find(node, "noise_power_linear");
    if (disabled) {
        if (snr || sweep || power)
            fail(path, "disabled noise takes no other keys");
        return NoiseSpec::disabled();
    }
    if (sweep) {
        if (!sweep->is_array() || sweep->empty())
            fail(path, "snr_db_sweep must be a non-empty array");
        for (const json& v : *sweep) {
            if (!v.is_number())
                fail(path, "snr_db_sweep entries must be numbers");
            sweep_out.push_back(v.get<double>());
        }
        return NoiseSpec::from_snr_db(sweep_out.front());
    }
    if (power) {
        if (snr)
            fail(path, "give snr_db or noise_power_linear, not both");
        return NoiseSpec::from_power(power->get<double>());
    }
    return NoiseSpec::from_snr_db(require_number(node, path, "snr_db"));
}

std::vector<QpskSource> parse_sources(const json& node, const std::string& path,
                                      double sample_rate_hz) {
    if (!node.is_array() || node.empty())
        fail(path, "sources must be a non-empty array");
    std::vector<QpskSource> sources;
    std::size_t index = 0;
    for (const json& s : node) {
        const std::string spath = path + "[" + std::to_string(index++) + "]";
        reject_unknown_keys(s, spath,
                            {"doa_deg", "bit_rate_bps", "power_linear", "pulse",
                             "samples_per_bit"});
        QpskSource src;
        src.doa_deg = require_number(s, spath, "doa_deg");
        src.bit_rate_bps = number_or(s, spath, "bit_rate_bps", 2.0e6);
        src.power_linear = number_or(s, spath, "power_linear", 1.0);
        const std::string pulse = string_or(s, spath, "pulse", "rect");
        if (pulse == "rect")
            src.pulse = PulseShape::rectangular;
        else if (pulse == "half_sine")
            src.pulse = PulseShape::half_sine;
        else
            fail(spath, "pulse must be rect or half_sine");
        const double per_bit = sample_rate_hz / src.bit_rate_bps;
        if (std::abs(per_bit - std::round(per_bit)) > 1e-9 || per_bit < 1.0)
            fail(spath, "bit rate must divide the sample rate into whole samples");
        src.samples_per_bit = static_cast<int>(std::llround(per_bit));
        // Redundant on input; accepted so an echoed config re-parses, but it
        // must agree with the sample rate.
        if (integer_or(s, spath, "samples_per_bit", src.samples_per_bit) != src.samples_per_bit)
            fail(spath, "samples_per_bit contradicts sample_rate_hz / bit_rate_bps");
        sources.push_back(src);
    }
    return sources;
}

ChannelModel parse_channel(const json& node, const std::string& path) {
    reject_unknown_keys(node, path, {"model"});
    const std::string model = string_or(node, path, "model", "none");
    ChannelModel channel;
    if (model == "none")
        channel.variant = ChannelVariant::no_fading;
    else if (model == "coherent_wavefront")
        channel.variant = ChannelVariant::coherent_wavefront;
    else if (model == "noncoherent_element")
        channel.variant = ChannelVariant::noncoherent_element;
    else
        fail(path, "model must be none, coherent_wavefront or noncoherent_element");
    return channel;
}

} // namespace

LoadedScenario parse_scenario(const std::string& text, const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line/column for the diagnostic.
        int line = 1, column = 1;
        const std::size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ScenarioParseError(origin + ":" + std::to_string(line) + ":" +
                                     std::to_string(column) + ": " + e.what(),
                                 line, column);
    }
    if (!root.is_object())
        fail(origin, "scenario must be a JSON object");

    reject_unknown_keys(root, origin,
                        {"array", "sources", "channel", "noise", "sampling", "grid", "estimators",
                         "cyclic", "preprocess", "peaks", "montecarlo"});

    ScenarioConfig config;

    const json* sampling = find(root, "sampling");
    double sample_rate_hz = 2.0e7;
    std::size_t num_snapshots = 1000;
    if (sampling) {
        reject_unknown_keys(*sampling, origin + ".sampling", {"sample_rate_hz", "num_snapshots"});
        sample_rate_hz = number_or(*sampling, origin + ".sampling", "sample_rate_hz", 2.0e7);
        num_snapshots = static_cast<std::size_t>(
            integer_or(*sampling, origin + ".sampling", "num_snapshots", 1000));
    }
    config.synthesis.sample_rate_hz = sample_rate_hz;
    config.synthesis.num_snapshots = num_snapshots;

    if (const json* array = find(root, "array"))
        config.synthesis.geometry = parse_array(*array, origin + ".array");

    const json* sources = find(root, "sources");
    if (!sources)
        fail(origin, "missing 'sources'");
    config.synthesis.sources = parse_sources(*sources, origin + ".sources", sample_rate_hz);

    if (const json* channel = find(root, "channel"))
        config.synthesis.channel = parse_channel(*channel, origin + ".channel");

    if (const json* noise = find(root, "noise"))
        config.synthesis.noise = parse_noise(*noise, origin + ".noise", config.snr_db_sweep);
    else
        fail(origin, "missing 'noise'");

    if (const json* grid = find(root, "grid")) {
        reject_unknown_keys(*grid, origin + ".grid", {"start_deg", "stop_deg", "step_deg"});
        config.grid.start_deg = number_or(*grid, origin + ".grid", "start_deg", 0.0);
        config.grid.stop_deg = number_or(*grid, origin + ".grid", "stop_deg", 180.0);
        config.grid.step_deg = number_or(*grid, origin + ".grid", "step_deg", 0.1);
    }

    if (const json* arms = find(root, "estimators")) {
        if (!arms->is_array() || arms->empty())
            fail(origin, "'estimators' must be a non-empty array");
        config.arms.clear();
        std::size_t index = 0;
        for (const json& a : *arms) {
            const std::string apath = origin + ".estimators[" + std::to_string(index++) + "]";
            reject_unknown_keys(a, apath, {"estimator", "preprocess"});
            EstimatorArm arm;
            const std::string kind = string_or(a, apath, "estimator", "music");
            if (kind == "music")
                arm.estimator = EstimatorKind::music;
            else if (kind == "cyclic_music")
                arm.estimator = EstimatorKind::cyclic_music;
            else
                fail(apath, "estimator must be music or cyclic_music");
            arm.preprocess = bool_or(a, apath, "preprocess", false);
            config.arms.push_back(arm);
        }
    }

    // The default cycle frequency is the SOI symbol rate.
    config.cyclic.alpha_hz = config.synthesis.sources.front().symbol_rate_hz();
    if (const json* cyclic = find(root, "cyclic")) {
        const std::string cpath = origin + ".cyclic";
        reject_unknown_keys(*cyclic, cpath,
                            {"alpha_hz", "lag_samples", "conjugate_variant", "n_cyclic_sources"});
        config.cyclic.alpha_hz = number_or(*cyclic, cpath, "alpha_hz", config.cyclic.alpha_hz);
        config.cyclic.lag_samples =
            static_cast<int>(integer_or(*cyclic, cpath, "lag_samples", 2));
        config.cyclic.conjugate_variant = bool_or(*cyclic, cpath, "conjugate_variant", true);
        config.cyclic.n_cyclic_sources =
            static_cast<int>(integer_or(*cyclic, cpath, "n_cyclic_sources", 1));
    }

    if (const json* pre = find(root, "preprocess")) {
        const std::string ppath = origin + ".preprocess";
        reject_unknown_keys(*pre, ppath,
                            {"wavelet", "threshold_rule", "beta", "obw_on_raw",
                             "reference_element", "average_spectrum"});
        const std::string wavelet = string_or(*pre, ppath, "wavelet", "haar");
        if (wavelet != "haar")
            fail(ppath, "wavelet must be haar");
        const std::string rule = string_or(*pre, ppath, "threshold_rule", "universal");
        if (rule == "universal")
            config.preprocess.denoise.threshold_rule = ThresholdRule::universal;
        else if (rule == "heuristic_sure")
            config.preprocess.denoise.threshold_rule = ThresholdRule::heuristic_sure;
        else
            fail(ppath, "threshold_rule must be universal or heuristic_sure");
        config.preprocess.beta = number_or(*pre, ppath, "beta", 0.01);
        config.preprocess.obw_on_raw = bool_or(*pre, ppath, "obw_on_raw", false);
        config.preprocess.reference_element =
            static_cast<int>(integer_or(*pre, ppath, "reference_element", 0));
        config.preprocess.average_spectrum = bool_or(*pre, ppath, "average_spectrum", false);
    }

    if (const json* peaks = find(root, "peaks")) {
        const std::string kpath = origin + ".peaks";
        reject_unknown_keys(*peaks, kpath, {"num_sources", "guard_deg", "resolution_tol_deg"});
        config.peaks.num_sources =
            static_cast<int>(integer_or(*peaks, kpath, "num_sources", 0));
        config.peaks.guard_deg = number_or(*peaks, kpath, "guard_deg", 2.0);
        config.peaks.resolution_tol_deg =
            number_or(*peaks, kpath, "resolution_tol_deg", 1.0);
    }

    if (const json* mc = find(root, "montecarlo")) {
        const std::string mpath = origin + ".montecarlo";
        reject_unknown_keys(*mc, mpath, {"num_runs", "base_seed"});
        config.montecarlo.num_runs =
            static_cast<int>(integer_or(*mc, mpath, "num_runs", 1000));
        config.montecarlo.base_seed = static_cast<std::uint64_t>(
            integer_or(*mc, mpath, "base_seed", 20240101));
    }

    config.validate();

    LoadedScenario out;
    out.config = std::move(config);
    out.normalized = normalized_scenario_json(out.config);
    return out;
}

LoadedScenario load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ScenarioParseError(path + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path);
}

std::string normalized_scenario_json(const ScenarioConfig& config) {
    json root;
    root["array"] = {
        {"num_elements", config.synthesis.geometry.num_elements},
        {"carrier_freq_hz", config.synthesis.geometry.carrier_freq_hz},
        {"spacing_m", config.synthesis.geometry.spacing_m},
    };
    root["sampling"] = {
        {"sample_rate_hz", config.synthesis.sample_rate_hz},
        {"num_snapshots", config.synthesis.num_snapshots},
    };
    json sources = json::array();
    for (const QpskSource& s : config.synthesis.sources) {
        sources.push_back({
            {"doa_deg", s.doa_deg},
            {"bit_rate_bps", s.bit_rate_bps},
            {"power_linear", s.power_linear},
            {"samples_per_bit", s.samples_per_bit},
            {"pulse", s.pulse == PulseShape::rectangular ? "rect" : "half_sine"},
        });
    }
    root["sources"] = sources;
    switch (config.synthesis.channel.variant) {
    case ChannelVariant::no_fading:
        root["channel"] = {{"model", "none"}};
        break;
    case ChannelVariant::coherent_wavefront:
        root["channel"] = {{"model", "coherent_wavefront"}};
        break;
    case ChannelVariant::noncoherent_element:
        root["channel"] = {{"model", "noncoherent_element"}};
        break;
    }
    if (!config.synthesis.noise.enabled) {
        root["noise"] = {{"disabled", true}};
    } else if (!config.snr_db_sweep.empty()) {
        root["noise"] = {{"snr_db_sweep", config.snr_db_sweep}};
    } else if (config.synthesis.noise.snr_db) {
        root["noise"] = {{"snr_db", *config.synthesis.noise.snr_db}};
    } else {
        root["noise"] = {{"noise_power_linear", config.synthesis.noise.power_linear}};
    }
    root["grid"] = {
        {"start_deg", config.grid.start_deg},
        {"stop_deg", config.grid.stop_deg},
        {"step_deg", config.grid.step_deg},
    };
    json arms = json::array();
    for (const EstimatorArm& arm : config.arms) {
        arms.push_back({
            {"estimator", arm.estimator == EstimatorKind::music ? "music" : "cyclic_music"},
            {"preprocess", arm.preprocess},
        });
    }
    root["estimators"] = arms;
    root["cyclic"] = {
        {"alpha_hz", config.cyclic.alpha_hz},
        {"lag_samples", config.cyclic.lag_samples},
        {"conjugate_variant", config.cyclic.conjugate_variant},
        {"n_cyclic_sources", config.cyclic.n_cyclic_sources},
    };
    root["preprocess"] = {
        {"wavelet", "haar"},
        {"threshold_rule", config.preprocess.denoise.threshold_rule == ThresholdRule::universal
                               ? "universal"
                               : "heuristic_sure"},
        {"beta", config.preprocess.beta},
        {"obw_on_raw", config.preprocess.obw_on_raw},
        {"reference_element", config.preprocess.reference_element},
        {"average_spectrum", config.preprocess.average_spectrum},
    };
    root["peaks"] = {
        {"num_sources", config.peaks.num_sources},
        {"guard_deg", config.peaks.guard_deg},
        {"resolution_tol_deg", config.peaks.resolution_tol_deg},
    };
    root["montecarlo"] = {
        {"num_runs", config.montecarlo.num_runs},
        {"base_seed", config.montecarlo.base_seed},
    };
    return root.dump(2) + "\n";
}

} // namespace doa
