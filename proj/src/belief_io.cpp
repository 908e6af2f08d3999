#include "mlmarket/belief_io.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "mlmarket/errors.hpp"

namespace mlmarket {

namespace {

using nlohmann::json;

UtilitySpec parse_utility(const json& spec, const std::string& agent_id) {
    if (!spec.is_object() || !spec.contains("family")) {
        throw ParseError("agent '" + agent_id + "': utility must be {family, eta?}");
    }
    const std::string family = spec.at("family").get<std::string>();
    if (family == "logarithmic") {
        return UtilitySpec::logarithmic();
    }
    if (family == "exponential") {
        return UtilitySpec::exponential();
    }
    if (family == "isoelastic") {
        if (!spec.contains("eta")) {
            throw ParseError("agent '" + agent_id + "': isoelastic utility requires eta");
        }
        const double eta = spec.at("eta").get<double>();
        if (!(eta > 0.0) || !std::isfinite(eta)) {
            throw ParseError("agent '" + agent_id + "': eta must be positive");
        }
        return UtilitySpec::isoelastic(eta);
    }
    throw ParseError("agent '" + agent_id + "': unknown utility family '" + family + "'");
}

}  // namespace

MarketInstance BeliefFile::market_for_instance(std::size_t instance) const {
    if (instance >= num_instances) {
        throw ValidationError("instance index " + std::to_string(instance) + " out of range");
    }
    std::vector<Agent> agents;
    agents.reserve(agent_ids.size());
    for (std::size_t i = 0; i < agent_ids.size(); ++i) {
        agents.push_back(Agent{agent_ids[i], utilities[i], wealths[i],
                               belief_rows[i * num_instances + instance]});
    }
    return MarketInstance(std::move(agents), num_goods);
}

LabeledBeliefSet BeliefFile::labeled() const {
    if (!targets) {
        throw ValidationError("belief file has no targets; wealth updates need them");
    }
    return LabeledBeliefSet(matrix(), *targets);
}

BeliefFile load_belief_matrix(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open belief file: " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("belief file is not valid JSON: " + std::string(e.what()));
    }

    if (!doc.is_object() || !doc.contains("num_goods") || !doc.contains("agents")) {
        throw ParseError("belief file must be an object with num_goods and agents");
    }

    BeliefFile out;
    out.num_goods = doc.at("num_goods").get<std::size_t>();
    if (out.num_goods == 0) {
        throw ParseError("num_goods must be positive");
    }
    const json& agents = doc.at("agents");
    if (!agents.is_array() || agents.empty()) {
        throw ParseError("agents must be a nonempty array");
    }

    std::set<std::string> seen_ids;
    bool any_wealth = false;
    std::vector<double> raw_wealths;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const json& entry = agents[i];
        if (!entry.is_object() || !entry.contains("id") || !entry.contains("beliefs")) {
            throw ParseError("agent " + std::to_string(i) + " must have id and beliefs");
        }
        const std::string id = entry.at("id").get<std::string>();
        if (!seen_ids.insert(id).second) {
            throw ParseError("duplicate agent id '" + id + "'");
        }
        out.agent_ids.push_back(id);
        out.utilities.push_back(entry.contains("utility")
                                    ? parse_utility(entry.at("utility"), id)
                                    : UtilitySpec::logarithmic());
        if (entry.contains("wealth")) {
            any_wealth = true;
            const double w = entry.at("wealth").get<double>();
            if (!(w >= 0.0) || !std::isfinite(w)) {
                throw ParseError("agent '" + id + "': wealth must be nonnegative");
            }
            raw_wealths.push_back(w);
        } else {
            raw_wealths.push_back(-1.0);  // placeholder: uniform fill below
        }

        const json& beliefs = entry.at("beliefs");
        if (!beliefs.is_array() || beliefs.empty()) {
            throw ParseError("agent '" + id + "': beliefs must be a nonempty array of rows");
        }
        if (i == 0) {
            out.num_instances = beliefs.size();
        } else if (beliefs.size() != out.num_instances) {
            throw ParseError("agent '" + id + "' has " + std::to_string(beliefs.size()) +
                             " belief rows, expected " + std::to_string(out.num_instances));
        }
        for (std::size_t t = 0; t < beliefs.size(); ++t) {
            const json& row = beliefs[t];
            if (!row.is_array() || row.size() != out.num_goods) {
                throw ParseError("agent '" + id + "', row " + std::to_string(t) +
                                 ": expected " + std::to_string(out.num_goods) + " entries");
            }
            std::vector<double> values;
            values.reserve(out.num_goods);
            double sum = 0.0;
            for (const json& cell : row) {
                if (!cell.is_number()) {
                    throw ParseError("agent '" + id + "', row " + std::to_string(t) +
                                     ": non-numeric probability");
                }
                const double p = cell.get<double>();
                if (!std::isfinite(p)) {
                    throw ParseError("agent '" + id + "', row " + std::to_string(t) +
                                     ": non-finite probability");
                }
                if (p < 0.0) {
                    throw ParseError("agent '" + id + "', row " + std::to_string(t) +
                                     ": negative probability " + std::to_string(p));
                }
                values.push_back(p);
                sum += p;
            }
            if (sum <= 0.0) {
                throw ParseError("agent '" + id + "', row " + std::to_string(t) +
                                 ": probabilities sum to zero");
            }
            if (std::abs(sum - 1.0) > 1e-9) {
                out.warnings.push_back("agent '" + id + "', row " + std::to_string(t) +
                                       ": renormalized (sum was " + std::to_string(sum) + ")");
            }
            out.belief_rows.push_back(clip_belief(normalize_simplex(values), kBeliefFloor));
        }
    }

    if (any_wealth) {
        for (std::size_t i = 0; i < raw_wealths.size(); ++i) {
            if (raw_wealths[i] < 0.0) {
                throw ParseError("agent '" + out.agent_ids[i] +
                                 "': wealth missing while other agents specify one");
            }
        }
        double total = 0.0;
        for (double w : raw_wealths) total += w;
        if (total <= 0.0) {
            throw ParseError("agent wealths sum to zero");
        }
        out.wealths = raw_wealths;
        for (double& w : out.wealths) w /= total;
    } else {
        out.wealths.assign(out.agent_ids.size(), 1.0 / static_cast<double>(out.agent_ids.size()));
    }

    if (doc.contains("targets")) {
        const json& targets = doc.at("targets");
        if (!targets.is_array() || targets.size() != out.num_instances) {
            throw ParseError("targets must list one good index per instance");
        }
        std::vector<std::size_t> parsed;
        parsed.reserve(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t) {
            if (!targets[t].is_number_unsigned() ||
                targets[t].get<std::size_t>() >= out.num_goods) {
                throw ParseError("target " + std::to_string(t) +
                                 " is not a good index in [0, " +
                                 std::to_string(out.num_goods) + ")");
            }
            parsed.push_back(targets[t].get<std::size_t>());
        }
        out.targets = std::move(parsed);
    }
    return out;
}

}  // namespace mlmarket
