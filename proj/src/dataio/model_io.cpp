#include "dataio/model_io.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "core/error.hpp"

namespace topsim {

namespace {

using nlohmann::json;

void check_keys(const json& object, std::initializer_list<const char*> allowed,
                const std::string& where) {
    for (const auto& item : object.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ParseError("unknown field '" + item.key() + "' in " + where);
    }
    for (const char* key : allowed) {
        if (!object.contains(key)) {
            throw ParseError("missing field '" + std::string(key) + "' in " + where);
        }
    }
}

}  // namespace

void save_model(const SimilarityModel& model, const std::string& path) {
    if (model.dim == 0 || model.weights.size() != model.dim * model.dim) {
        throw InvalidArgumentError("model weights do not form a d x d matrix");
    }
    json j;
    j["format_version"] = 1;
    j["d"] = model.dim;
    j["W"] = model.weights;
    j["provenance"] = to_string(model.provenance);
    j["trained_C"] = model.trained_c ? json(*model.trained_c) : json(nullptr);
    j["preprocessing"] = json{{"normalize", model.normalize}};

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    out << j.dump(2) << '\n';
    if (!out) throw IoError("cannot write " + path);
}

SimilarityModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError("invalid model file " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError("model file must hold a JSON object");
    check_keys(j, {"format_version", "d", "W", "provenance", "trained_C", "preprocessing"},
               "model file");

    if (!j["format_version"].is_number_integer() || j["format_version"].get<int>() != 1) {
        throw ParseError("unsupported format_version in model file");
    }

    SimilarityModel model;
    if (!j["d"].is_number_unsigned() || j["d"].get<std::size_t>() == 0) {
        throw ParseError("d must be a positive integer");
    }
    model.dim = j["d"].get<std::size_t>();

    if (!j["W"].is_array()) throw ParseError("W must be an array");
    if (j["W"].size() != model.dim * model.dim) {
        throw ParseError("W has " + std::to_string(j["W"].size()) + " entries, expected " +
                         std::to_string(model.dim * model.dim));
    }
    model.weights.reserve(j["W"].size());
    for (const json& value : j["W"]) {
        if (!value.is_number()) throw ParseError("W entries must be numbers");
        const double w = value.get<double>();
        if (!std::isfinite(w)) throw ParseError("W entries must be finite");
        model.weights.push_back(w);
    }

    if (!j["provenance"].is_string()) throw ParseError("provenance must be a string");
    const auto provenance = provenance_from_string(j["provenance"].get<std::string>());
    if (!provenance) {
        throw ParseError("unknown provenance '" + j["provenance"].get<std::string>() + "'");
    }
    model.provenance = *provenance;

    if (j["trained_C"].is_null()) {
        model.trained_c.reset();
    } else if (j["trained_C"].is_number()) {
        const double c = j["trained_C"].get<double>();
        if (!(c > 0.0)) throw ParseError("trained_C must be positive or null");
        model.trained_c = c;
    } else {
        throw ParseError("trained_C must be a number or null");
    }

    const json& pre = j["preprocessing"];
    if (!pre.is_object()) throw ParseError("preprocessing must be an object");
    check_keys(pre, {"normalize"}, "preprocessing");
    if (!pre["normalize"].is_boolean()) throw ParseError("normalize must be a boolean");
    model.normalize = pre["normalize"].get<bool>();

    if (model.provenance == Provenance::Identity) {
        for (std::size_t r = 0; r < model.dim; ++r) {
            for (std::size_t c = 0; c < model.dim; ++c) {
                if (model.weight(r, c) != (r == c ? 1.0 : 0.0)) {
                    throw ParseError("identity model with non-identity weights");
                }
            }
        }
    }
    return model;
}

}  // namespace topsim
