#include "pgl/json_io.hpp"

#include <json.hpp>

namespace pgl {

using nlohmann::json;

namespace {

json element_to_json(const ElementSpec& e) {
    json j;
    j["kind"] = element_kind_name(e.kind);
    j["ports"] = e.ports;
    if (e.kind == ElementKind::HWP) j["theta"] = e.theta_deg;
    if (e.kind == ElementKind::PBS) j["h_of_in_a"] = e.h_of_in_a;
    return j;
}

ElementSpec element_from_json(const json& j) {
    ElementSpec e;
    e.kind = element_kind_from_name(j.at("kind").get<std::string>());
    e.ports = j.at("ports").get<std::vector<std::string>>();
    if (e.kind == ElementKind::HWP) e.theta_deg = j.at("theta").get<double>();
    if (e.kind == ElementKind::PBS) e.h_of_in_a = j.at("h_of_in_a").get<std::string>();
    return e;
}

json pattern_to_json(const CountPattern& p) {
    json j = json::object();
    for (const auto& [label, count] : p) j[label] = count;
    return j;
}

CountPattern pattern_from_json(const json& j) {
    CountPattern p;
    for (auto it = j.begin(); it != j.end(); ++it) p[it.key()] = it.value().get<int>();
    return p;
}

}  // namespace

std::string circuit_to_json(const Circuit& c) {
    json j;
    j["schema_version"] = 1;
    j["registry"] = c.registry;

    json placements = json::array();
    for (const auto& step : c.placements) {
        json s;
        switch (step.type) {
            case Step::Type::Element:
                s["type"] = "element";
                s["element"] = element_to_json(step.element);
                break;
            case Step::Type::Detect:
                s["type"] = "detect";
                s["detection"] = step.detection;
                break;
            case Step::Type::PostSelect:
                s["type"] = "postselect";
                s["label"] = step.post_select.label;
                s["pattern"] = pattern_to_json(step.post_select.pattern);
                break;
            case Step::Type::Checkpoint:
                s["type"] = "checkpoint";
                s["label"] = step.checkpoint.label;
                if (!step.checkpoint.view_exact.empty()) s["view_exact"] = pattern_to_json(step.checkpoint.view_exact);
                if (!step.checkpoint.view_at_most.empty())
                    s["view_at_most"] = pattern_to_json(step.checkpoint.view_at_most);
                break;
        }
        placements.push_back(std::move(s));
    }
    j["placements"] = std::move(placements);

    json detections = json::array();
    for (const auto& d : c.detections) {
        detections.push_back({{"label", d.label},
                              {"mode", d.mode},
                              {"basis", d.basis == DetectionBasis::PolarizationResolved ? "polarization" : "number"},
                              {"required_count", d.required_count}});
    }
    j["detections"] = std::move(detections);

    json ffs = json::array();
    for (const auto& ff : c.feed_forwards)
        ffs.push_back({{"detection", ff.detection}, {"outcome", ff.outcome}, {"action", element_to_json(ff.action)}});
    j["feed_forwards"] = std::move(ffs);

    json outputs = json::array();
    for (const auto& o : c.outputs) outputs.push_back({{"mode", o.mode}, {"alias", o.alias}});
    j["outputs"] = std::move(outputs);

    return j.dump(2) + "\n";
}

Circuit circuit_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, std::string("circuit JSON: ") + e.what());
    }
    try {
        if (j.at("schema_version").get<int>() != 1)
            throw Error(ErrorKind::Io, "circuit JSON: unsupported schema_version");
        Circuit c;
        c.registry = j.at("registry").get<std::vector<std::string>>();
        for (const auto& s : j.at("placements")) {
            const std::string type = s.at("type").get<std::string>();
            if (type == "element") {
                c.placements.push_back(Step::make_element(element_from_json(s.at("element"))));
            } else if (type == "detect") {
                c.placements.push_back(Step::make_detect(s.at("detection").get<std::string>()));
            } else if (type == "postselect") {
                c.placements.push_back(
                    Step::make_post_select({s.at("label").get<std::string>(), pattern_from_json(s.at("pattern"))}));
            } else if (type == "checkpoint") {
                CheckpointStep cp{s.at("label").get<std::string>(), {}, {}};
                if (s.contains("view_exact")) cp.view_exact = pattern_from_json(s.at("view_exact"));
                if (s.contains("view_at_most")) cp.view_at_most = pattern_from_json(s.at("view_at_most"));
                c.placements.push_back(Step::make_checkpoint(std::move(cp)));
            } else {
                throw Error(ErrorKind::Io, "circuit JSON: unknown placement type '" + type + "'");
            }
        }
        for (const auto& d : j.at("detections")) {
            DetectionRule rule;
            rule.label = d.at("label").get<std::string>();
            rule.mode = d.at("mode").get<std::string>();
            const std::string basis = d.at("basis").get<std::string>();
            if (basis == "polarization")
                rule.basis = DetectionBasis::PolarizationResolved;
            else if (basis == "number")
                rule.basis = DetectionBasis::NumberOnly;
            else
                throw Error(ErrorKind::Io, "circuit JSON: unknown detection basis '" + basis + "'");
            rule.required_count = d.at("required_count").get<int>();
            c.detections.push_back(std::move(rule));
        }
        for (const auto& f : j.at("feed_forwards"))
            c.feed_forwards.push_back({f.at("detection").get<std::string>(), f.at("outcome").get<std::string>(),
                                       element_from_json(f.at("action"))});
        for (const auto& o : j.at("outputs"))
            c.outputs.push_back({o.at("mode").get<std::string>(), o.at("alias").get<std::string>()});
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Io, std::string("circuit JSON: ") + e.what());
    }
}

std::string state_to_json(const FockState& state) {
    json kets = json::object();
    for (const auto& [ket, amp] : state.terms())
        kets[ket.str(state.registry())] = {amp.real(), amp.imag()};
    json j;
    j["kets"] = std::move(kets);
    j["norm_squared"] = state.norm_squared();
    j["photon_number"] = state.photon_number();
    return j.dump(2);
}

}  // namespace pgl
