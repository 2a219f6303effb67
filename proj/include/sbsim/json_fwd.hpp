// json_fwd.hpp: JSON document type used for metadata and configuration

#pragma once

#include <json.hpp>

namespace sbsim {

using json = nlohmann::ordered_json;

} // namespace sbsim
