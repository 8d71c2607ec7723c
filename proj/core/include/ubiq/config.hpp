#pragma once

#include <nlohmann/json_fwd.hpp>
#include <string>

#include "ubiq/gauge.hpp"
#include "ubiq/real.hpp"
#include "ubiq/sequence.hpp"
#include "ubiq/system.hpp"

namespace ubiq::config {

using json = nlohmann::json;

// Literal parsers; validation errors carry the offending field path.
RealSpec parse_real(const json& j, const std::string& field);
Point parse_point(const json& j, const std::string& field);
gauge::GaugeSpec parse_gauge(const json& j, const std::string& field = "gauge");
gauge::MeasureSpec parse_measure(const json& j, const std::string& field = "measure");
seq::RadiusSeqSpec parse_radii(const json& j, const std::string& field = "radii");
sys::RateSpec parse_rate(const json& j, const std::string& field = "psi");
sys::Box parse_box(const json& j, const std::string& field = "box");
sys::ApproxSystemSpec parse_system(const json& j, const std::string& field = "system");

}  // namespace ubiq::config
