#include "quantfusion/network.hpp"

#include "quantfusion/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>

namespace qf {

void NetworkShape::validate() const {
    if (k < 1) throw DomainError("network shape: k must be >= 1");
    if (n < 1) throw DomainError("network shape: n must be >= 1");
    if (!(a > 0)) throw DomainError("network shape: a must be positive");
}

double activation(double x, double a) {
    return 0.1 * std::tanh(0.5 * a * x);
}

double activation_inverse(double y, double a) {
    if (!(y > -0.1 && y < 0.1)) {
        throw DomainError("activation_inverse: value outside (-0.1, 0.1)");
    }
    return 2.0 * std::atanh(y / 0.1) / a;
}

namespace {

void check_dims(const NetworkParams& net, const NetworkShape& shape,
                const std::vector<double>& input) {
    const auto n = static_cast<std::size_t>(shape.n);
    const auto k = static_cast<std::size_t>(shape.k);
    if (net.w.size() != n || net.h.size() != n || net.q.size() != n) {
        throw DimensionError("network params do not match shape n");
    }
    for (const auto& row : net.w) {
        if (row.size() != k) throw DimensionError("hidden weight row width != k");
    }
    if (input.size() != k) {
        throw DimensionError("input width " + std::to_string(input.size()) +
                             " != k " + std::to_string(shape.k));
    }
}

// Pre-activation sum z and the hidden node values u_i.
double preactivation(const NetworkParams& net, const NetworkShape& shape,
                     const std::vector<double>& input, std::vector<double>* hidden) {
    double z = net.o1;
    for (int i = 0; i < shape.n; ++i) {
        double u = net.h[static_cast<std::size_t>(i)];
        for (int j = 0; j < shape.k; ++j) {
            u += net.w[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] *
                 input[static_cast<std::size_t>(j)];
        }
        if (hidden) (*hidden)[static_cast<std::size_t>(i)] = u;
        z += net.q[static_cast<std::size_t>(i)] * u;
    }
    return z;
}

} // namespace

double forward(const NetworkParams& net, const NetworkShape& shape,
               const std::vector<double>& input) {
    shape.validate();
    check_dims(net, shape, input);
    return activation(preactivation(net, shape, input, nullptr), shape.a);
}

std::vector<double> forward_gradient(const NetworkParams& net, const NetworkShape& shape,
                                     const std::vector<double>& input) {
    shape.validate();
    check_dims(net, shape, input);

    std::vector<double> hidden(static_cast<std::size_t>(shape.n));
    const double z = preactivation(net, shape, input, &hidden);
    // d/dz of 0.1*tanh(a z / 2)
    const double t = std::tanh(0.5 * shape.a * z);
    const double dadz = 0.05 * shape.a * (1.0 - t * t);

    std::vector<double> grad;
    grad.reserve(static_cast<std::size_t>(shape.param_count()));
    for (int i = 0; i < shape.n; ++i) {
        for (int j = 0; j < shape.k; ++j) {
            grad.push_back(dadz * net.q[static_cast<std::size_t>(i)] *
                           input[static_cast<std::size_t>(j)]);
        }
    }
    for (int i = 0; i < shape.n; ++i) {
        grad.push_back(dadz * net.q[static_cast<std::size_t>(i)]);
    }
    for (int i = 0; i < shape.n; ++i) {
        grad.push_back(dadz * hidden[static_cast<std::size_t>(i)]);
    }
    grad.push_back(dadz);
    return grad;
}

std::vector<double> encode(const NetworkParams& net, const NetworkShape& shape) {
    shape.validate();
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(shape.param_count()));
    for (const auto& row : net.w) flat.insert(flat.end(), row.begin(), row.end());
    flat.insert(flat.end(), net.h.begin(), net.h.end());
    flat.insert(flat.end(), net.q.begin(), net.q.end());
    flat.push_back(net.o1);
    if (flat.size() != static_cast<std::size_t>(shape.param_count())) {
        throw DimensionError("encode: params disagree with shape");
    }
    return flat;
}

NetworkParams decode(const std::vector<double>& position, const NetworkShape& shape) {
    shape.validate();
    if (position.size() != static_cast<std::size_t>(shape.param_count())) {
        throw DimensionError("decode: expected " + std::to_string(shape.param_count()) +
                             " parameters, got " + std::to_string(position.size()));
    }
    NetworkParams net;
    std::size_t pos = 0;
    net.w.resize(static_cast<std::size_t>(shape.n));
    for (auto& row : net.w) {
        row.assign(position.begin() + static_cast<std::ptrdiff_t>(pos),
                   position.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(shape.k)));
        pos += static_cast<std::size_t>(shape.k);
    }
    net.h.assign(position.begin() + static_cast<std::ptrdiff_t>(pos),
                 position.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(shape.n)));
    pos += static_cast<std::size_t>(shape.n);
    net.q.assign(position.begin() + static_cast<std::ptrdiff_t>(pos),
                 position.begin() + static_cast<std::ptrdiff_t>(pos + static_cast<std::size_t>(shape.n)));
    pos += static_cast<std::size_t>(shape.n);
    net.o1 = position[pos];
    return net;
}

double fitness_rmse(const std::vector<double>& position,
                    const std::vector<TrainingSample>& samples,
                    const NetworkShape& shape) {
    if (samples.empty()) throw DomainError("fitness: no training samples");
    const NetworkParams net = decode(position, shape);
    double ss = 0.0;
    for (const TrainingSample& s : samples) {
        const double err = forward(net, shape, s.input) - s.target;
        ss += err * err;
    }
    return std::sqrt(ss / static_cast<double>(samples.size()));
}

PickResult predict_and_pick(const NetworkParams& net, const NetworkShape& shape,
                            const std::vector<std::pair<std::string, std::vector<double>>>& rows,
                            int n_pick) {
    if (n_pick < 1) throw DomainError("predict_and_pick: n_pick must be >= 1");
    struct Scored {
        const std::string* id;
        double score;
    };
    std::vector<Scored> scored;
    scored.reserve(rows.size());
    for (const auto& [id, input] : rows) {
        scored.push_back({&id, forward(net, shape, input)});
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return *a.id < *b.id;
    });

    PickResult result;
    result.short_of_candidates = static_cast<int>(rows.size()) < n_pick;
    const std::size_t take = std::min(rows.size(), static_cast<std::size_t>(n_pick));
    for (std::size_t i = 0; i < take; ++i) result.picks.push_back(*scored[i].id);
    return result;
}

void save_network(const std::string& path, const NetworkShape& shape,
                  const NetworkParams& params) {
    nlohmann::json doc;
    doc["k"] = shape.k;
    doc["n"] = shape.n;
    doc["a"] = shape.a;
    doc["params"] = encode(params, shape);
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << doc.dump(2) << '\n';
}

std::pair<NetworkShape, NetworkParams> load_network(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    nlohmann::json doc;
    try {
        in >> doc;
        NetworkShape shape;
        shape.k = doc.at("k").get<int>();
        shape.n = doc.at("n").get<int>();
        shape.a = doc.at("a").get<double>();
        shape.validate();
        const auto flat = doc.at("params").get<std::vector<double>>();
        return {shape, decode(flat, shape)};
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace qf
