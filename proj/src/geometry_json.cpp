#include "mpq/error.hpp"
#include "mpq/momwire.hpp"
#include "mpq/touchstone.hpp"

#include <json.hpp>

namespace mpq {

using nlohmann::json;

namespace {

Eigen::Vector3d vec3(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3) {
        fail(ErrorCode::parse, std::string("geometry: '") + what + "' must be an array of three numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

std::string WireArrayGeometry::to_json() const {
    // Canonical text, doubles at 17 significant digits.
    std::string out = "{\"wires\":[";
    for (std::size_t i = 0; i < wires.size(); ++i) {
        const Wire& w = wires[i];
        if (i > 0) {
            out += ',';
        }
        out += "{\"length\":" + format_double(w.length) + ",\"radius\":" + format_double(w.radius) +
               ",\"center\":[" + format_double(w.center.x()) + ',' + format_double(w.center.y()) + ',' +
               format_double(w.center.z()) + "],\"axis\":[" + format_double(w.axis.x()) + ',' +
               format_double(w.axis.y()) + ',' + format_double(w.axis.z()) +
               "],\"segments\":" + std::to_string(w.segments) + ",\"port_segment\":" +
               (w.port_segment ? std::to_string(*w.port_segment) : std::string("null")) + '}';
    }
    out += "]}";
    return out;
}

WireArrayGeometry WireArrayGeometry::from_json(const std::string& text) {
    WireArrayGeometry g;
    try {
        const json doc = json::parse(text);
        const json& wires = doc.at("wires");
        if (!wires.is_array()) {
            fail(ErrorCode::parse, "geometry: 'wires' must be an array");
        }
        for (const json& jw : wires) {
            Wire w;
            w.length = jw.at("length").get<double>();
            w.radius = jw.at("radius").get<double>();
            w.center = vec3(jw.at("center"), "center");
            if (jw.contains("axis")) {
                w.axis = vec3(jw.at("axis"), "axis");
            }
            w.segments = jw.at("segments").get<int>();
            if (jw.contains("port_segment") && !jw.at("port_segment").is_null()) {
                w.port_segment = jw.at("port_segment").get<int>();
            }
            g.wires.push_back(w);
        }
    } catch (const json::exception& e) {
        fail(ErrorCode::parse, std::string("geometry JSON: ") + e.what());
    }
    g.validate();
    return g;
}

} // namespace mpq
