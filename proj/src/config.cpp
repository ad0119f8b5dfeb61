#include "levysim/config.hpp"

#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "levysim/chaos.hpp"
#include "levysim/errors.hpp"
#include "levysim/malliavin.hpp"
#include "levysim/transfer.hpp"

namespace levysim {

namespace {

using nlohmann::json;

void check_keys(const json& doc, const std::set<std::string>& allowed, const std::string& where) {
    if (!doc.is_object()) throw ConfigInvalid(where + " must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (!allowed.contains(key)) {
            throw ConfigInvalid("unknown key '" + key + "' in " + where);
        }
    }
}

const json& require(const json& doc, const std::string& key, const std::string& where) {
    if (!doc.contains(key)) throw ConfigInvalid("missing key '" + key + "' in " + where);
    return doc.at(key);
}

JumpMeasureSpec parse_nu(const json& doc) {
    const std::string type = require(doc, "type", "triplet.nu").get<std::string>();
    if (type == "finite_discrete") {
        check_keys(doc, {"type", "atoms"}, "triplet.nu");
        FiniteDiscreteMeasure m;
        for (const auto& atom : require(doc, "atoms", "triplet.nu")) {
            check_keys(atom, {"size", "rate"}, "triplet.nu.atoms[]");
            m.atoms.push_back({require(atom, "size", "atom").get<double>(),
                               require(atom, "rate", "atom").get<double>()});
        }
        return m;
    }
    if (type == "two_sided_exponential") {
        check_keys(doc, {"type", "rate_plus", "scale_plus", "rate_minus", "scale_minus"},
                   "triplet.nu");
        TwoSidedExponentialMeasure m;
        m.rate_plus = require(doc, "rate_plus", "triplet.nu").get<double>();
        m.scale_plus = require(doc, "scale_plus", "triplet.nu").get<double>();
        m.rate_minus = require(doc, "rate_minus", "triplet.nu").get<double>();
        m.scale_minus = require(doc, "scale_minus", "triplet.nu").get<double>();
        return m;
    }
    if (type == "truncated_stable") {
        check_keys(doc, {"type", "alpha", "scale", "cutoff", "max_size"}, "triplet.nu");
        TruncatedStableMeasure m;
        m.alpha = require(doc, "alpha", "triplet.nu").get<double>();
        m.scale = require(doc, "scale", "triplet.nu").get<double>();
        m.cutoff = require(doc, "cutoff", "triplet.nu").get<double>();
        if (doc.contains("max_size")) m.max_size = doc.at("max_size").get<double>();
        return m;
    }
    throw ConfigInvalid("unknown jump measure type '" + type + "'");
}

json nu_to_json(const JumpMeasureSpec& spec) {
    if (const auto* d = std::get_if<FiniteDiscreteMeasure>(&spec)) {
        json atoms = json::array();
        for (const auto& atom : d->atoms) {
            atoms.push_back({{"size", atom.size}, {"rate", atom.rate}});
        }
        return {{"type", "finite_discrete"}, {"atoms", std::move(atoms)}};
    }
    if (const auto* e = std::get_if<TwoSidedExponentialMeasure>(&spec)) {
        return {{"type", "two_sided_exponential"},
                {"rate_plus", e->rate_plus},
                {"scale_plus", e->scale_plus},
                {"rate_minus", e->rate_minus},
                {"scale_minus", e->scale_minus}};
    }
    const auto& s = std::get<TruncatedStableMeasure>(spec);
    return {{"type", "truncated_stable"},
            {"alpha", s.alpha},
            {"scale", s.scale},
            {"cutoff", s.cutoff},
            {"max_size", s.max_size}};
}

Rect parse_box(const json& doc, const std::string& where) {
    check_keys(doc, {"t_lo", "t_hi", "x_lo", "x_hi"}, where);
    return make_rect(require(doc, "t_lo", where).get<double>(),
                     require(doc, "t_hi", where).get<double>(),
                     require(doc, "x_lo", where).get<double>(),
                     require(doc, "x_hi", where).get<double>());
}

json box_to_json(const Rect& box) {
    return {{"t_lo", box.t_lo},
            {"t_hi", box.t_hi},
            {"x_lo", box.sizes.at(0).lo},
            {"x_hi", box.sizes.at(0).hi}};
}

std::vector<Rect> parse_boxes(const json& doc, const std::string& where) {
    std::vector<Rect> boxes;
    for (const auto& box : doc) boxes.push_back(parse_box(box, where + "[]"));
    return boxes;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& doc) {
    check_keys(doc,
               {"description", "horizon", "triplet", "partition", "brownian_step", "seed",
                "functional", "simulate", "derivative", "chain_check", "chaos", "transfer"},
               "config");
    ExperimentConfig cfg;
    if (doc.contains("description")) cfg.description = doc.at("description").get<std::string>();
    cfg.horizon = require(doc, "horizon", "config").get<double>();
    if (!(cfg.horizon > 0.0)) throw ConfigInvalid("horizon must be positive");

    const json& triplet = require(doc, "triplet", "config");
    check_keys(triplet, {"gamma", "sigma", "nu"}, "triplet");
    cfg.triplet.gamma = triplet.value("gamma", 0.0);
    cfg.triplet.sigma = triplet.value("sigma", 0.0);
    cfg.triplet.nu = parse_nu(require(triplet, "nu", "triplet"));
    try {
        validate(cfg.triplet);
    } catch (const std::invalid_argument& e) {
        throw ConfigInvalid(std::string("invalid triplet: ") + e.what());
    }

    if (doc.contains("partition")) {
        const json& p = doc.at("partition");
        check_keys(p, {"sectors", "eps_min"}, "partition");
        cfg.partition_sectors = p.value("sectors", 8);
        cfg.partition_eps_min = p.value("eps_min", 1e-3);
    }
    cfg.brownian_step = doc.value("brownian_step", 0.0);
    cfg.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("functional")) {
        try {
            cfg.functional = PathFunctional::from_json(doc.at("functional"));
        } catch (const std::exception& e) {
            throw ConfigInvalid(std::string("invalid functional: ") + e.what());
        }
    }

    if (doc.contains("simulate")) {
        const json& s = doc.at("simulate");
        check_keys(s, {"n_paths", "grid_points"}, "simulate");
        Simulate block;
        block.n_paths = s.value("n_paths", std::uint64_t{1});
        block.grid_points = s.value("grid_points", 64);
        if (block.grid_points < 1) throw ConfigInvalid("simulate.grid_points must be >= 1");
        cfg.simulate = block;
    }
    if (doc.contains("derivative")) {
        const json& d = doc.at("derivative");
        check_keys(d, {"n_samples", "r_values", "v_values", "r_count"}, "derivative");
        Derivative block;
        block.n_samples = d.value("n_samples", std::uint64_t{1000});
        if (d.contains("r_values")) block.r_values = d.at("r_values").get<std::vector<double>>();
        if (d.contains("v_values")) block.v_values = d.at("v_values").get<std::vector<double>>();
        block.r_count = d.value("r_count", 4);
        cfg.derivative = block;
    }
    if (doc.contains("chain_check")) {
        const json& c = doc.at("chain_check");
        check_keys(c, {"g", "n_samples", "tolerance"}, "chain_check");
        ChainCheck block;
        try {
            block.g = ParametricFunctional::from_json(require(c, "g", "chain_check"));
        } catch (const std::exception& e) {
            throw ConfigInvalid(std::string("invalid chain_check.g: ") + e.what());
        }
        block.n_samples = c.value("n_samples", std::uint64_t{1000});
        block.tolerance = c.value("tolerance", 1e-10);
        cfg.chain_check = block;
    }
    if (doc.contains("chaos")) {
        const json& c = doc.at("chaos");
        check_keys(c, {"boxes", "orders", "n_samples"}, "chaos");
        Boxes block;
        block.boxes = parse_boxes(require(c, "boxes", "chaos"), "chaos.boxes");
        if (c.contains("orders")) block.orders = c.at("orders").get<std::vector<int>>();
        block.n_samples = c.value("n_samples", std::uint64_t{10000});
        cfg.chaos = block;
    }
    if (doc.contains("transfer")) {
        const json& t = doc.at("transfer");
        check_keys(t, {"boxes", "orders", "n_samples", "rate_corruption", "field_times"},
                   "transfer");
        Transfer block;
        block.boxes = parse_boxes(require(t, "boxes", "transfer"), "transfer.boxes");
        if (t.contains("orders")) block.orders = t.at("orders").get<std::vector<int>>();
        block.n_samples = t.value("n_samples", std::uint64_t{100000});
        block.rate_corruption = t.value("rate_corruption", 1.0);
        block.field_times = t.value("field_times", 0);
        cfg.transfer = block;
    }

    auto check_orders = [](const std::vector<int>& orders, const std::string& where) {
        for (int order : orders) {
            if (order < 0 || order > 2) {
                throw ConfigInvalid(where + ".orders must lie in {0, 1, 2}");
            }
        }
    };
    if (cfg.chaos) check_orders(cfg.chaos->orders, "chaos");
    if (cfg.transfer) check_orders(cfg.transfer->orders, "transfer");
    return cfg;
}

json ExperimentConfig::to_json() const {
    json doc;
    if (!description.empty()) doc["description"] = description;
    doc["horizon"] = horizon;
    doc["triplet"] = {{"gamma", triplet.gamma}, {"sigma", triplet.sigma}, {"nu", nu_to_json(triplet.nu)}};
    doc["partition"] = {{"sectors", partition_sectors}, {"eps_min", partition_eps_min}};
    if (brownian_step > 0.0) doc["brownian_step"] = brownian_step;
    doc["seed"] = seed;
    if (functional) doc["functional"] = functional->to_json();
    if (simulate) {
        doc["simulate"] = {{"n_paths", simulate->n_paths}, {"grid_points", simulate->grid_points}};
    }
    if (derivative) {
        json d{{"n_samples", derivative->n_samples}, {"r_count", derivative->r_count}};
        if (!derivative->r_values.empty()) d["r_values"] = derivative->r_values;
        if (!derivative->v_values.empty()) d["v_values"] = derivative->v_values;
        doc["derivative"] = std::move(d);
    }
    if (chain_check) {
        doc["chain_check"] = {{"g", chain_check->g.to_json()},
                              {"n_samples", chain_check->n_samples},
                              {"tolerance", chain_check->tolerance}};
    }
    if (chaos) {
        json boxes = json::array();
        for (const auto& box : chaos->boxes) boxes.push_back(box_to_json(box));
        doc["chaos"] = {{"boxes", std::move(boxes)},
                        {"orders", chaos->orders},
                        {"n_samples", chaos->n_samples}};
    }
    if (transfer) {
        json boxes = json::array();
        for (const auto& box : transfer->boxes) boxes.push_back(box_to_json(box));
        json t{{"boxes", std::move(boxes)},
               {"orders", transfer->orders},
               {"n_samples", transfer->n_samples}};
        if (transfer->rate_corruption != 1.0) t["rate_corruption"] = transfer->rate_corruption;
        if (transfer->field_times > 0) t["field_times"] = transfer->field_times;
        doc["transfer"] = std::move(t);
    }
    return doc;
}

std::string ExperimentConfig::hash() const {
    const std::string dump = to_json().dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot read config file: " + path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ConfigInvalid(std::string("config is not valid JSON: ") + e.what());
    }
    return ExperimentConfig::from_json(doc);
}

}  // namespace levysim
