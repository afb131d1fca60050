#include "sparselab/config.hpp"

#include <fstream>
#include <sstream>

#include "sparselab/errors.hpp"

namespace sparselab {

OperatorChoice operator_choice_from_string(const std::string& s) {
    if (s == "bhtModel") return OperatorChoice::bhtModel;
    if (s == "bhtDirect") return OperatorChoice::bhtDirect;
    if (s == "t0") return OperatorChoice::t0;
    if (s == "carlesonDirect") return OperatorChoice::carlesonDirect;
    if (s == "carlesonModel") return OperatorChoice::carlesonModel;
    if (s.rfind("varCarleson", 0) == 0) return OperatorChoice::varCarleson;
    throw BadConfig("unknown operator: " + s);
}

std::string to_string(OperatorChoice op) {
    switch (op) {
        case OperatorChoice::bhtModel: return "bhtModel";
        case OperatorChoice::bhtDirect: return "bhtDirect";
        case OperatorChoice::t0: return "t0";
        case OperatorChoice::carlesonDirect: return "carlesonDirect";
        case OperatorChoice::carlesonModel: return "carlesonModel";
        case OperatorChoice::varCarleson: return "varCarleson";
    }
    return "?";
}

namespace {

std::vector<double> parse_list(const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
    return out;
}

} // namespace

void ExperimentConfig::apply(const std::string& key, const std::string& value) {
    raw[key] = value;
    if (key == "grid.count") grid.count = static_cast<std::size_t>(std::stoull(value));
    else if (key == "grid.length") {
        const double L = std::stod(value);
        grid.step = L / static_cast<double>(grid.count);
    } else if (key == "grid.origin") grid.origin = std::stod(value);
    else if (key == "operator") {
        op = operator_choice_from_string(value);
        if (op == OperatorChoice::varCarleson && value.size() > 12)
            var_r = std::stod(value.substr(12, value.find(')') - 12));
    }
    else if (key == "exponents.s") s = parse_list(value);
    else if (key == "exponents.q") q = std::stod(value);
    else if (key == "exponents.p") p = std::stod(value);
    else if (key == "exponents.r") lr = std::stod(value);
    else if (key == "vector.r") lr = std::stod(value);
    else if (key == "vector.depth") vector_depth = std::stoi(value);
    else if (key == "stopping.C") stopping_C = (value == "auto") ? 0.0 : std::stod(value);
    else if (key == "stopping.M" || key == "m.M") M = std::stoi(value);
    else if (key == "suite.seed") seed = std::stoull(value);
    else if (key == "suite.cases") cases = std::stoi(value);
    else if (key == "suite.kind") kind = suite_kind_from_string(value);
    else if (key == "weight") weight = value;
    else if (key == "symbol") symbol = value;
    else if (key == "tiles") tiles = value;
    else if (key == "packets.fraction") bump_fraction = std::stod(value);
    else if (key == "packets.smoothness") bump_smoothness = std::stoi(value);
    else throw BadConfig("unknown config key: " + key);
}

ExperimentConfig ExperimentConfig::from_entries(const std::vector<std::string>& kv_entries) {
    ExperimentConfig cfg;
    // grid geometry first so grid.length lands on the final count
    std::vector<std::pair<std::string, std::string>> kvs;
    for (const std::string& e : kv_entries) {
        const auto eq = e.find('=');
        if (eq == std::string::npos) throw BadConfig("expected key=value: " + e);
        kvs.emplace_back(e.substr(0, eq), e.substr(eq + 1));
    }
    for (const auto& [k, v] : kvs)
        if (k == "grid.count") cfg.apply(k, v);
    for (const auto& [k, v] : kvs)
        if (k != "grid.count") cfg.apply(k, v);
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    ExperimentConfig cfg;
    std::vector<std::string> warnings;
    cfg.merge_file_over(path, warnings);
    return cfg;
}

void ExperimentConfig::merge_file_over(const std::string& path, std::vector<std::string>& warnings) {
    std::ifstream is(path);
    if (!is) throw IOFailure("cannot open config: " + path);
    std::vector<std::string> entries;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
            line.pop_back();
        std::size_t start = 0;
        while (start < line.size() && (line[start] == ' ' || line[start] == '\t')) ++start;
        line = line.substr(start);
        if (line.empty()) continue;
        entries.push_back(line);
    }
    // config wins over any flag-provided value already present
    for (const std::string& e : entries) {
        const auto eq = e.find('=');
        if (eq == std::string::npos) throw BadConfig("expected key=value: " + e);
        const std::string key = e.substr(0, eq);
        const std::string value = e.substr(eq + 1);
        if (raw.count(key) && raw[key] != value)
            warnings.push_back("config overrides flag " + key + "=" + raw[key] + " with " + value);
    }
    std::vector<std::pair<std::string, std::string>> kvs;
    for (const std::string& e : entries) {
        const auto eq = e.find('=');
        kvs.emplace_back(e.substr(0, eq), e.substr(eq + 1));
    }
    for (const auto& [k, v] : kvs)
        if (k == "grid.count") apply(k, v);
    for (const auto& [k, v] : kvs)
        if (k != "grid.count") apply(k, v);
}

MultiTileCollection ExperimentConfig::make_tiles() const {
    auto args = [](const std::string& spec, std::size_t open) {
        std::vector<long long> out;
        std::stringstream ss(spec.substr(open + 1, spec.find(')') - open - 1));
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
        return out;
    };
    if (tiles.rfind("rank1(", 0) == 0) {
        const auto a = args(tiles, 5);
        return generate_rank1_family(static_cast<int>(a.at(0)), static_cast<int>(a.at(1)), grid);
    }
    if (tiles.rfind("rank0(", 0) == 0) {
        const auto a = args(tiles, 5);
        return generate_rank0_family(static_cast<int>(a.at(0)), static_cast<int>(a.at(1)), grid);
    }
    if (tiles.rfind("bitile(", 0) == 0) {
        const auto a = args(tiles, 6);
        return generate_bitile_family(static_cast<int>(a.at(0)), static_cast<int>(a.at(1)), grid,
                                      a.size() > 2 ? a[2] : 8);
    }
    if (tiles.rfind("file(", 0) == 0)
        return load_tile_family(tiles.substr(5, tiles.find(')') - 5));
    throw BadConfig("unknown tile family preset: " + tiles);
}

WeightFunction ExperimentConfig::make_weight(const GridFunction& like) const {
    if (weight == "one") return weight_one(like);
    if (weight.rfind("power(", 0) == 0) {
        const auto comma = weight.find(',');
        const double a = std::stod(weight.substr(6, comma - 6));
        const double clip = std::stod(weight.substr(comma + 1, weight.find(')') - comma - 1));
        return weight_power(like, a, clip);
    }
    if (weight.rfind("step(", 0) == 0)
        return weight_step(like, std::stoi(weight.substr(5, weight.find(')') - 5)));
    if (weight.rfind("fileCSV(", 0) == 0) {
        GridFunction g = GridFunction::load_csv(weight.substr(8, weight.find(')') - 8));
        return WeightFunction{std::move(g), std::nullopt};
    }
    throw BadConfig("unknown weight preset: " + weight);
}

} // namespace sparselab
