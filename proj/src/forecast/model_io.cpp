#include "drm/error.hpp"
#include "drm/forecast.hpp"

namespace drm::forecast {

using nlohmann::json;

namespace {

json config_to_json(const TrainingConfig& c) {
    json j = {
        {"input_size", c.input_size},
        {"hidden_size", c.hidden_size},
        {"max_epochs", c.max_epochs},
        {"lm_initial_damping", c.lm_initial_damping},
        {"lm_damping_up", c.lm_damping_up},
        {"lm_damping_down", c.lm_damping_down},
        {"lm_damping_max", c.lm_damping_max},
        {"stop_patience", c.stop_patience},
        {"min_relative_improvement", c.min_relative_improvement},
        {"validation_fraction", c.validation_fraction},
        {"test_fraction", c.test_fraction},
        {"rng_seed", c.rng_seed},
    };
    j["monthly_weights"] = c.monthly_weights ? json(*c.monthly_weights) : json(nullptr);
    return j;
}

TrainingConfig config_from_json(const json& j) {
    TrainingConfig c;
    c.input_size = j.at("input_size").get<int>();
    c.hidden_size = j.at("hidden_size").get<int>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.lm_initial_damping = j.at("lm_initial_damping").get<double>();
    c.lm_damping_up = j.at("lm_damping_up").get<double>();
    c.lm_damping_down = j.at("lm_damping_down").get<double>();
    c.lm_damping_max = j.at("lm_damping_max").get<double>();
    c.stop_patience = j.at("stop_patience").get<int>();
    c.min_relative_improvement = j.at("min_relative_improvement").get<double>();
    c.validation_fraction = j.at("validation_fraction").get<double>();
    c.test_fraction = j.at("test_fraction").get<double>();
    c.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    if (j.contains("monthly_weights") && !j.at("monthly_weights").is_null())
        c.monthly_weights = j.at("monthly_weights").get<std::array<double, 12>>();
    return c;
}

}  // namespace

json to_json(const NarModel& model) {
    const auto& net = model.network;
    const auto params = net.parameters();
    const auto in = static_cast<std::size_t>(net.input_size());
    const auto hid = static_cast<std::size_t>(net.hidden_size());
    auto slice = [&](std::size_t from, std::size_t n) {
        return std::vector<double>(params.begin() + static_cast<std::ptrdiff_t>(from),
                                   params.begin() + static_cast<std::ptrdiff_t>(from + n));
    };
    return json{
        {"format", "drm-nar-model/1"},
        {"input_size", net.input_size()},
        {"hidden_size", net.hidden_size()},
        {"output_size", 1},
        {"activation", {{"hidden", "tanh"}, {"output", "identity"}}},
        {"parameters",
         {{"input_hidden", slice(0, hid * in)},
          {"hidden_bias", slice(hid * in, hid)},
          {"hidden_output", slice(hid * in + hid, hid)},
          {"output_bias", params.back()}}},
        {"normalization", {{"min", model.scaling.min}, {"max", model.scaling.max}}},
        {"seed", model.config.rng_seed},
        {"config", config_to_json(model.config)},
    };
}

NarModel model_from_json(const json& j) {
    try {
        if (j.at("format").get<std::string>() != "drm-nar-model/1")
            throw Error(ErrorKind::format, "unsupported model format");
        if (j.at("output_size").get<int>() != 1) throw Error(ErrorKind::format, "output_size must be 1");
        const int in = j.at("input_size").get<int>();
        const int hid = j.at("hidden_size").get<int>();
        const auto& p = j.at("parameters");
        auto w_ih = p.at("input_hidden").get<std::vector<double>>();
        auto b_h = p.at("hidden_bias").get<std::vector<double>>();
        auto w_ho = p.at("hidden_output").get<std::vector<double>>();
        const double b_o = p.at("output_bias").get<double>();
        if (in < 1 || hid < 1 || w_ih.size() != static_cast<std::size_t>(in) * hid ||
            b_h.size() != static_cast<std::size_t>(hid) || w_ho.size() != static_cast<std::size_t>(hid))
            throw Error(ErrorKind::format, "parameter counts do not match layer sizes " + std::to_string(in) + "x" +
                                               std::to_string(hid) + "x1");
        std::vector<double> flat;
        flat.reserve(NarNetwork::parameter_count(in, hid));
        flat.insert(flat.end(), w_ih.begin(), w_ih.end());
        flat.insert(flat.end(), b_h.begin(), b_h.end());
        flat.insert(flat.end(), w_ho.begin(), w_ho.end());
        flat.push_back(b_o);

        NarModel model{NarNetwork(in, hid), {}, config_from_json(j.at("config"))};
        model.network.set_parameters(flat);
        model.scaling = {j.at("normalization").at("min").get<double>(), j.at("normalization").at("max").get<double>()};
        if (model.config.input_size != in || model.config.hidden_size != hid)
            throw Error(ErrorKind::format, "config echo disagrees with layer sizes");
        return model;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::format, std::string("malformed model JSON: ") + e.what());
    }
}

}  // namespace drm::forecast
