#include "sego/json_io.h"

#include "sego/errors.h"
#include "sego/geometry.h"

#include <json.hpp>

namespace sego {

using nlohmann::json;

std::vector<Correspondence> correspondences_from_json(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception &e) {
        throw_invalid_input(std::string("bad JSON: ") + e.what());
    }
    if (!doc.contains("features") || !doc["features"].is_array())
        throw_invalid_input("input must contain a 'features' array");

    std::vector<Correspondence> out;
    for (const auto &jf : doc["features"]) {
        Correspondence c;
        std::string kind = jf.value("kind", "");
        if (kind == "point")
            c.kind = FeatureKind::Point;
        else if (kind == "line")
            c.kind = FeatureKind::Line;
        else
            throw_invalid_input("feature kind must be 'point' or 'line'");
        if (!jf.contains("observations") || !jf["observations"].is_array())
            throw_invalid_input("feature must contain an 'observations' array");
        for (const auto &jo : jf["observations"]) {
            Observation o;
            o.view.camera = jo.value("camera", 0);
            o.view.view = jo.value("view", 0);
            const char *key = (c.kind == FeatureKind::Point) ? "x" : "l";
            if (!jo.contains(key))
                throw_invalid_input(std::string("observation missing '") + key + "'");
            std::vector<double> v = jo[key].get<std::vector<double>>();
            if (c.kind == FeatureKind::Point) {
                if (v.size() == 2)
                    o.v = Eigen::Vector3d(v[0], v[1], 1.0);
                else if (v.size() == 3)
                    o.v = Eigen::Vector3d(v[0], v[1], v[2]);
                else
                    throw_invalid_input("point observation needs 2 or 3 numbers");
            } else {
                if (v.size() != 3)
                    throw_invalid_input("line observation needs 3 coefficients");
                o.v = Eigen::Vector3d(v[0], v[1], v[2]);
                double n = o.v.head<2>().norm();
                if (n == 0.0)
                    throw_invalid_input("line normal part must be nonzero");
                o.v /= n;
            }
            c.obs.push_back(o);
        }
        c.validate();
        out.push_back(std::move(c));
    }
    return out;
}

std::string solve_output_to_json(const SolveOutput &out) {
    json doc;
    doc["label"] = out.label;
    doc["swap_cameras"] = out.swap_cameras;
    doc["candidates"] = json::array();
    for (const auto &c : out.candidates) {
        json jc;
        jc["q"] = {c.q.w, c.q.x, c.q.y, c.q.z};
        jc["t"] = {c.t.x(), c.t.y(), c.t.z()};
        doc["candidates"].push_back(jc);
    }
    return doc.dump(2) + "\n";
}

} // namespace sego
