#include "gravelai/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "gravelai/error.hpp"

namespace gravelai {

using nlohmann::json;

namespace {

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ParseError, "field '" + field + "': " + what);
}

const json& require(const json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end()) {
        field_error(key, "missing");
    }
    return *it;
}

std::size_t as_count(const json& value, const std::string& field) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
        field_error(field, "expected a nonnegative integer, got " + value.dump());
    }
    return value.get<std::size_t>();
}

double as_real(const json& value, const std::string& field) {
    if (!value.is_number()) {
        field_error(field, "expected a number, got " + value.dump());
    }
    return value.get<double>();
}

std::size_t as_index(const json& value, const std::string& field, IndexBase base) {
    std::size_t raw = as_count(value, field);
    if (raw < base.offset()) {
        field_error(field, "index 0 is invalid with 1-based indices");
    }
    return raw - base.offset();
}

RewardModel model_from_json(const json& doc) {
    if (!doc.is_object()) {
        field_error("model", "expected an object");
    }
    const json& kind = require(doc, "kind");
    if (kind == "bernoulli") {
        if (doc.contains("variance")) {
            field_error("model.variance", "bernoulli rewards take no variance");
        }
        return RewardModel::bernoulli();
    }
    if (kind != "gaussian") {
        field_error("model.kind", "expected \"gaussian\" or \"bernoulli\", got " + kind.dump());
    }
    auto it = doc.find("variance");
    if (it == doc.end()) {
        return RewardModel::gaussian();
    }
    if (it->is_array()) {
        std::vector<double> per_arm;
        for (std::size_t i = 0; i < it->size(); ++i) {
            per_arm.push_back(as_real((*it)[i], "model.variance[" + std::to_string(i) + "]"));
        }
        return RewardModel::gaussian(std::move(per_arm));
    }
    return RewardModel::gaussian(as_real(*it, "model.variance"));
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

Instance instance_from_json(const json& doc, IndexBase base) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "instance document must be an object");
    }
    const std::size_t K = as_count(require(doc, "arms"), "arms");

    const json& edge_list = require(doc, "edges");
    if (!edge_list.is_array()) {
        field_error("edges", "expected a list of pairs");
    }
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < edge_list.size(); ++i) {
        const std::string name = "edges[" + std::to_string(i) + "]";
        const json& pair = edge_list[i];
        if (!pair.is_array() || pair.size() != 2) {
            field_error(name, "expected a pair of arm indices");
        }
        edges.emplace_back(as_index(pair[0], name, base), as_index(pair[1], name, base));
    }

    const json& mu_list = require(doc, "mu");
    if (!mu_list.is_array()) {
        field_error("mu", "expected a list of reals");
    }
    std::vector<double> mu;
    for (std::size_t i = 0; i < mu_list.size(); ++i) {
        mu.push_back(as_real(mu_list[i], "mu[" + std::to_string(i) + "]"));
    }
    if (mu.size() != K) {
        field_error("mu", "has " + std::to_string(mu.size()) + " entries for " + std::to_string(K) + " arms");
    }

    const std::size_t m = as_count(require(doc, "m"), "m");
    RewardModel model = doc.contains("model") ? model_from_json(doc["model"]) : RewardModel::gaussian();

    try {
        return Instance(TreeGraph(K, std::move(edges)), std::move(mu), m, std::move(model));
    } catch (const Error& e) {
        throw Error(ErrorCode::ParseError, std::string("invalid instance: ") + e.what());
    }
}

Instance parse_instance(std::string_view text, IndexBase base) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    return instance_from_json(doc, base);
}

Instance load_instance(const std::filesystem::path& path, IndexBase base) {
    try {
        return parse_instance(read_file(path), base);
    } catch (const Error& e) {
        std::string detail = e.what();
        const std::string prefix = std::string(to_string(ErrorCode::ParseError)) + ": ";
        if (detail.rfind(prefix, 0) == 0) {
            detail.erase(0, prefix.size());
        }
        throw Error(ErrorCode::ParseError, path.string() + ": " + detail);
    }
}

json instance_to_json(const Instance& instance, IndexBase base) {
    json edges = json::array();
    for (auto [a, b] : instance.tree().edges()) {
        edges.push_back({a + base.offset(), b + base.offset()});
    }
    json model;
    if (instance.model().kind() == ModelKind::Bernoulli) {
        model = {{"kind", "bernoulli"}};
    } else if (instance.model().per_arm()) {
        model = {{"kind", "gaussian"}, {"variance", instance.model().variances()}};
    } else {
        model = {{"kind", "gaussian"}, {"variance", instance.model().variance(0)}};
    }
    return {{"arms", instance.arms()}, {"edges", edges}, {"mu", instance.mu()}, {"m", instance.m()},
            {"model", model}};
}

void save_json(const std::filesystem::path& path, const json& doc) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    }
    out << doc.dump(2) << '\n';
}

std::vector<double> parse_real_list(std::string_view text) {
    std::string cleaned(text);
    auto first = cleaned.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && cleaned[first] == '[') {
        try {
            json doc = json::parse(cleaned);
            std::vector<double> out;
            for (std::size_t i = 0; i < doc.size(); ++i) {
                out.push_back(as_real(doc[i], "[" + std::to_string(i) + "]"));
            }
            return out;
        } catch (const json::exception& e) {
            throw Error(ErrorCode::ParseError, e.what());
        }
    }
    for (char& c : cleaned) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(cleaned);
    std::vector<double> out;
    std::string token;
    while (in >> token) {
        double v = 0.0;
        auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || end != token.data() + token.size()) {
            throw Error(ErrorCode::ParseError, "not a number: '" + token + "'");
        }
        out.push_back(v);
    }
    return out;
}

std::vector<Arm> parse_arm_list(std::string_view text, IndexBase base) {
    std::vector<Arm> out;
    for (double v : parse_real_list(text)) {
        if (v < static_cast<double>(base.offset()) || v != static_cast<double>(static_cast<Arm>(v))) {
            throw Error(ErrorCode::ParseError, "invalid arm index " + std::to_string(v));
        }
        out.push_back(static_cast<Arm>(v) - base.offset());
    }
    return out;
}

TreeGraph tree_from_spec(std::string_view spec) {
    const auto colon = spec.find(':');
    const std::string family(spec.substr(0, colon));
    std::map<std::string, std::size_t> params;
    if (colon != std::string_view::npos) {
        std::string rest(spec.substr(colon + 1));
        std::istringstream in(rest);
        std::string item;
        while (std::getline(in, item, ',')) {
            const auto eq = item.find('=');
            const std::string key = eq == std::string::npos ? "" : item.substr(0, eq);
            const std::string value = eq == std::string::npos ? item : item.substr(eq + 1);
            std::size_t parsed = 0;
            auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
            if (ec != std::errc() || end != value.data() + value.size()) {
                throw Error(ErrorCode::ParseError, "tree spec: bad value in '" + item + "'");
            }
            params[key] = parsed;
        }
    }
    auto get = [&](const std::string& key, bool first, std::optional<std::size_t> fallback = {}) {
        if (auto it = params.find(key); it != params.end()) {
            return it->second;
        }
        if (auto it = params.find(""); first && it != params.end()) {
            return it->second;
        }
        if (fallback) {
            return *fallback;
        }
        throw Error(ErrorCode::ParseError, "tree spec '" + std::string(spec) + "' needs " + key);
    };

    if (family == "line") {
        return line_tree(get("K", true));
    }
    if (family == "binary") {
        return balanced_tree(2, get("h", true));
    }
    if (family == "dary") {
        return balanced_tree(get("d", true), get("h", false));
    }
    if (family == "star") {
        const std::size_t K = get("K", true);
        std::vector<Edge> edges;
        for (Arm k = 1; k < K; ++k) {
            edges.emplace_back(0, k);
        }
        return TreeGraph(K, std::move(edges));
    }
    if (family == "random") {
        std::mt19937_64 rng(get("seed", false, 1));
        return random_tree(get("K", true), rng);
    }
    throw Error(ErrorCode::ParseError, "unknown tree family '" + family + "'");
}

}  // namespace gravelai
