#include "tailbound/instance.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace tailbound {

namespace {

using nlohmann::json;

std::vector<double> number_array(const json& j, const std::string& field) {
    if (!j.contains(field) || !j[field].is_array()) {
        throw InstanceError("instance: missing or non-array field '" + field +
                            "'");
    }
    std::vector<double> out;
    out.reserve(j[field].size());
    for (const auto& v : j[field]) {
        if (!v.is_number()) {
            throw InstanceError("instance: non-numeric entry in '" + field +
                                "'");
        }
        out.push_back(v.get<double>());
    }
    return out;
}

std::vector<DiscreteZeroMeanDistribution> parse_dists(const json& j) {
    if (!j.contains("dists") || !j["dists"].is_array()) {
        throw InstanceError("instance: missing or non-array field 'dists'");
    }
    std::vector<DiscreteZeroMeanDistribution> out;
    out.reserve(j["dists"].size());
    for (const auto& d : j["dists"]) {
        if (!d.is_object()) {
            throw InstanceError("instance: 'dists' entries must be objects");
        }
        try {
            out.push_back(DiscreteZeroMeanDistribution::make(
                number_array(d, "support"), number_array(d, "probs")));
        } catch (const std::invalid_argument& e) {
            throw InstanceError(std::string("instance: bad dist: ") + e.what());
        }
    }
    return out;
}

}  // namespace

Instance parse_instance_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InstanceError(std::string("instance: JSON parse error: ") +
                            e.what());
    }
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
        throw InstanceError("instance: missing string field 'type'");
    }
    const std::string type = j["type"].get<std::string>();
    try {
        if (type == "rademacher") {
            return RademacherInstance{WeightVector(number_array(j, "weights"))};
        }
        if (type == "bounded") {
            return BoundedInstance{WeightVector(number_array(j, "weights")),
                                   parse_dists(j)};
        }
        if (type == "martingale") {
            if (!j.contains("rule_seed") ||
                !j["rule_seed"].is_number_unsigned()) {
                throw InstanceError(
                    "instance: martingale requires unsigned field 'rule_seed'");
            }
            return MartingaleInstance{WeightVector(number_array(j, "weights")),
                                      j["rule_seed"].get<std::uint64_t>()};
        }
        if (type == "hilbert") {
            if (!j.contains("vectors") || !j["vectors"].is_array()) {
                throw InstanceError(
                    "instance: missing or non-array field 'vectors'");
            }
            std::vector<std::vector<double>> vecs;
            vecs.reserve(j["vectors"].size());
            for (std::size_t i = 0; i < j["vectors"].size(); ++i) {
                const auto& row = j["vectors"][i];
                if (!row.is_array()) {
                    throw InstanceError(
                        "instance: 'vectors' entries must be arrays");
                }
                std::vector<double> v;
                v.reserve(row.size());
                for (const auto& c : row) {
                    if (!c.is_number()) {
                        throw InstanceError(
                            "instance: non-numeric coordinate in 'vectors'");
                    }
                    v.push_back(c.get<double>());
                }
                vecs.push_back(std::move(v));
            }
            return HilbertInstance::make(std::move(vecs), parse_dists(j));
        }
    } catch (const std::invalid_argument& e) {
        throw InstanceError(std::string("instance: ") + e.what());
    }
    throw InstanceError("instance: unknown type '" + type + "'");
}

Instance load_instance_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InstanceError("instance: cannot open file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_json(buf.str());
}

}  // namespace tailbound
