#pragma once

#include <filesystem>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "gravelai/reward_models.hpp"

namespace gravelai {

/// Index convention of a file. Internally arms are always 0-based.
struct IndexBase {
    bool one_based = false;

    std::size_t offset() const noexcept { return one_based ? 1 : 0; }
};

/// Fields: arms, edges, mu, m, model {kind, variance}. Failures throw ParseError naming the
/// line and column for syntax problems and the field for content problems.
Instance instance_from_json(const nlohmann::json& doc, IndexBase base = {});
Instance parse_instance(std::string_view text, IndexBase base = {});
Instance load_instance(const std::filesystem::path& path, IndexBase base = {});

nlohmann::json instance_to_json(const Instance& instance, IndexBase base = {});
void save_json(const std::filesystem::path& path, const nlohmann::json& doc);

/// Reals from a JSON array or a comma/whitespace separated list.
std::vector<double> parse_real_list(std::string_view text);

/// Arm indices from a comma separated list, shifted to 0-based.
std::vector<Arm> parse_arm_list(std::string_view text, IndexBase base = {});

/// Tree from a generator spec: line:K=10, binary:h=2, dary:d=3,h=2, star:K=6, random:K=20,seed=1.
/// A bare number after the colon is read as the family's first parameter.
TreeGraph tree_from_spec(std::string_view spec);

}  // namespace gravelai
