#pragma once

#include "dsirp/prize_model.hpp"
#include "json_util.hpp"

namespace dsirp::detail {

json params_to_json(const ModelParams& w);
ModelParams params_from_json(const json& j, const std::string& path, int P, int H);

}  // namespace dsirp::detail
