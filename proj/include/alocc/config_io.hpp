#pragma once

#include <json.hpp>

#include "alocc/network.hpp"
#include "alocc/train.hpp"

namespace alocc {

nlohmann::json network_config_to_json(const NetworkConfig& cfg);
NetworkConfig network_config_from_json(const nlohmann::json& j);

nlohmann::json train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

} // namespace alocc
