#include "sal/config.hpp"

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "sal/error.hpp"
#include "sal/netpbm.hpp"

namespace sal {

void TrainConfig::validate() const {
    auto fail = [](const std::string& msg) { throw DataError("config: " + msg); };
    if (n_patches < 1) fail("n_patches must be >= 1");
    if (!(epsilon > 0.0 && epsilon < 1.0)) fail("epsilon must be in (0,1)");
    if (image_size < 8 || image_size % 8 != 0) fail("image_size must be a positive multiple of 8");
    if (loc_size < 8 || loc_size % 4 != 0) fail("loc_size must be a multiple of 4, >= 8");
    if (base_channels < 1) fail("base_channels must be positive");
    if (feature_channels < 4 || feature_channels % 4 != 0)
        fail("feature_channels must be a positive multiple of 4");
    if (hidden_channels < 1) fail("hidden_channels must be positive");
    if (dilation4 < 1 || dilation5 < 1) fail("dilations must be >= 1");
    if (lambda1 < 0.0 || lambda2 < 0.0) fail("loss weights must be non-negative");
    if (k < 1.0) fail("k must be >= 1");
    if (smoothing <= 0.0) fail("smoothing must be positive");
    if (stage1_lr <= 0.0 || stage2_lr_pgm <= 0.0 || stage2_lr_ram <= 0.0 || stage3_lr_spm <= 0.0)
        fail("learning rates must be positive");
    if (stage1_batch < 1 || stage2_batch < 1) fail("batch sizes must be >= 1");
    if (stage1_epochs < 1 || stage2_epochs < 1 || stage3_epochs < 1) fail("epochs must be >= 1");
    if (!(lr_decay_factor > 0.0 && lr_decay_factor < 1.0)) fail("lr_decay_factor must be in (0,1)");
    if (lr_patience < 1) fail("lr_patience must be >= 1");
    if (lr_min_delta < 0.0) fail("lr_min_delta must be non-negative");
    if (val_count < 1) fail("val_count must be >= 1");
}

namespace {

using Setter = std::function<void(TrainConfig&, const std::string&)>;

int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw DataError("config: bad integer for '" + key + "': " + value);
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw DataError("config: bad number for '" + key + "': " + value);
    }
}

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"seed", [](TrainConfig& c, const std::string& v) { c.seed = static_cast<uint64_t>(parse_int("seed", v)); }},
        {"n_patches", [](TrainConfig& c, const std::string& v) { c.n_patches = parse_int("n_patches", v); }},
        {"epsilon", [](TrainConfig& c, const std::string& v) { c.epsilon = parse_double("epsilon", v); }},
        {"image_size", [](TrainConfig& c, const std::string& v) { c.image_size = parse_int("image_size", v); }},
        {"loc_size", [](TrainConfig& c, const std::string& v) { c.loc_size = parse_int("loc_size", v); }},
        {"base_channels", [](TrainConfig& c, const std::string& v) { c.base_channels = parse_int("base_channels", v); }},
        {"feature_channels", [](TrainConfig& c, const std::string& v) { c.feature_channels = parse_int("feature_channels", v); }},
        {"hidden_channels", [](TrainConfig& c, const std::string& v) { c.hidden_channels = parse_int("hidden_channels", v); }},
        {"dilation4", [](TrainConfig& c, const std::string& v) { c.dilation4 = parse_int("dilation4", v); }},
        {"dilation5", [](TrainConfig& c, const std::string& v) { c.dilation5 = parse_int("dilation5", v); }},
        {"lambda1", [](TrainConfig& c, const std::string& v) { c.lambda1 = parse_double("lambda1", v); }},
        {"lambda2", [](TrainConfig& c, const std::string& v) { c.lambda2 = parse_double("lambda2", v); }},
        {"k", [](TrainConfig& c, const std::string& v) { c.k = parse_double("k", v); }},
        {"smoothing", [](TrainConfig& c, const std::string& v) { c.smoothing = parse_double("smoothing", v); }},
        {"stage1_lr", [](TrainConfig& c, const std::string& v) { c.stage1_lr = parse_double("stage1_lr", v); }},
        {"stage1_batch", [](TrainConfig& c, const std::string& v) { c.stage1_batch = parse_int("stage1_batch", v); }},
        {"stage1_epochs", [](TrainConfig& c, const std::string& v) { c.stage1_epochs = parse_int("stage1_epochs", v); }},
        {"stage2_lr_pgm", [](TrainConfig& c, const std::string& v) { c.stage2_lr_pgm = parse_double("stage2_lr_pgm", v); }},
        {"stage2_lr_ram", [](TrainConfig& c, const std::string& v) { c.stage2_lr_ram = parse_double("stage2_lr_ram", v); }},
        {"stage2_batch", [](TrainConfig& c, const std::string& v) { c.stage2_batch = parse_int("stage2_batch", v); }},
        {"stage2_epochs", [](TrainConfig& c, const std::string& v) { c.stage2_epochs = parse_int("stage2_epochs", v); }},
        {"stage3_lr_spm", [](TrainConfig& c, const std::string& v) { c.stage3_lr_spm = parse_double("stage3_lr_spm", v); }},
        {"stage3_epochs", [](TrainConfig& c, const std::string& v) { c.stage3_epochs = parse_int("stage3_epochs", v); }},
        {"lr_decay_factor", [](TrainConfig& c, const std::string& v) { c.lr_decay_factor = parse_double("lr_decay_factor", v); }},
        {"lr_patience", [](TrainConfig& c, const std::string& v) { c.lr_patience = parse_int("lr_patience", v); }},
        {"lr_min_delta", [](TrainConfig& c, const std::string& v) { c.lr_min_delta = parse_double("lr_min_delta", v); }},
        {"val_count", [](TrainConfig& c, const std::string& v) { c.val_count = parse_int("val_count", v); }},
    };
    return table;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

TrainConfig parse_config(const std::string& text) {
    TrainConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw DataError("config: line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        auto it = setters().find(key);
        if (it == setters().end()) throw DataError("config: unknown key '" + key + "'");
        if (value.empty()) throw DataError("config: empty value for '" + key + "'");
        it->second(cfg, value);
    }
    cfg.validate();
    return cfg;
}

TrainConfig load_config_file(const std::string& path) {
    const auto bytes = read_file(path);
    return parse_config(std::string(bytes.begin(), bytes.end()));
}

}  // namespace sal
