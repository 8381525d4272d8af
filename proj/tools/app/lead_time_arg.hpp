#pragma once

#include <string>

#include "bullwhip/stochastic.hpp"

namespace bullwhip::app {

/// Parses det:L, uniform:a:b or cat:p1,p2,...,pM. Throws ConfigError.
LeadTimeDistSpec parse_lead_time_arg(const std::string& text);

}  // namespace bullwhip::app
