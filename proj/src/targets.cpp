#include "qgeo/targets.hpp"

#include "qgeo/errors.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <unordered_map>

namespace qgeo {
namespace targets {

namespace {

using nlohmann::json;
constexpr double pi = std::numbers::pi;

const std::unordered_map<std::string, std::pair<int, int>>& gate_table() {
    // name -> {arity, param count}
    static const std::unordered_map<std::string, std::pair<int, int>> table = {
        {"I", {1, 0}},  {"X", {1, 0}},    {"Y", {1, 0}},   {"Z", {1, 0}},  {"H", {1, 0}},
        {"S", {1, 0}},  {"T", {1, 0}},    {"RX", {1, 1}},  {"RY", {1, 1}}, {"RZ", {1, 1}},
        {"CP", {2, 1}}, {"CZ", {2, 0}},   {"CNOT", {2, 0}}, {"SWAP", {2, 0}},
        {"RXX", {2, 1}}, {"RYY", {2, 1}},
    };
    return table;
}

CMat two_site_rotation(double theta, bool yy) {
    // exp(-i theta/2 P(x)P) = cos(theta/2) I - i sin(theta/2) P(x)P.
    const double c = std::cos(theta / 2.0);
    const Complex ms(0.0, -std::sin(theta / 2.0));
    CMat pp = CMat::Zero(4, 4);
    if (yy) {
        pp(0, 3) = -1.0; pp(1, 2) = 1.0; pp(2, 1) = 1.0; pp(3, 0) = -1.0;
    } else {
        pp(0, 3) = 1.0; pp(1, 2) = 1.0; pp(2, 1) = 1.0; pp(3, 0) = 1.0;
    }
    return c * CMat::Identity(4, 4) + ms * pp;
}

}  // namespace

int gate_arity(const std::string& name) {
    const auto it = gate_table().find(name);
    if (it == gate_table().end()) throw InputError("unknown gate: " + name);
    return it->second.first;
}

int gate_param_count(const std::string& name) {
    const auto it = gate_table().find(name);
    if (it == gate_table().end()) throw InputError("unknown gate: " + name);
    return it->second.second;
}

CMat gate_matrix(const std::string& name, const std::vector<double>& params) {
    const int want = gate_param_count(name);
    if (static_cast<int>(params.size()) != want) {
        throw InputError("gate " + name + " expects " + std::to_string(want) + " parameter(s), got " +
                         std::to_string(params.size()));
    }
    for (double p : params) {
        if (!std::isfinite(p)) throw InputError("gate " + name + ": non-finite angle");
    }
    const Complex i1(0.0, 1.0);
    if (name == "I") return CMat::Identity(2, 2);
    if (name == "X") {
        CMat m(2, 2);
        m << 0, 1, 1, 0;
        return m;
    }
    if (name == "Y") {
        CMat m(2, 2);
        m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
        return m;
    }
    if (name == "Z") {
        CMat m(2, 2);
        m << 1, 0, 0, -1;
        return m;
    }
    if (name == "H") {
        CMat m(2, 2);
        m << 1, 1, 1, -1;
        return m / std::numbers::sqrt2;
    }
    if (name == "S") {
        CMat m = CMat::Identity(2, 2);
        m(1, 1) = i1;
        return m;
    }
    if (name == "T") {
        CMat m = CMat::Identity(2, 2);
        m(1, 1) = std::polar(1.0, pi / 4.0);
        return m;
    }
    if (name == "RX" || name == "RY" || name == "RZ") {
        const double th = params[0];
        const double c = std::cos(th / 2.0), s = std::sin(th / 2.0);
        CMat m(2, 2);
        if (name == "RX") {
            m << Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0);
        } else if (name == "RY") {
            m << Complex(c, 0), Complex(-s, 0), Complex(s, 0), Complex(c, 0);
        } else {
            m << std::polar(1.0, -th / 2.0), Complex(0, 0), Complex(0, 0), std::polar(1.0, th / 2.0);
        }
        return m;
    }
    if (name == "CP") {
        CMat m = CMat::Identity(4, 4);
        m(3, 3) = std::polar(1.0, params[0]);
        return m;
    }
    if (name == "CZ") {
        CMat m = CMat::Identity(4, 4);
        m(3, 3) = -1.0;
        return m;
    }
    if (name == "CNOT") {
        CMat m = CMat::Zero(4, 4);
        m(0, 0) = 1.0;
        m(1, 1) = 1.0;
        m(2, 3) = 1.0;
        m(3, 2) = 1.0;
        return m;
    }
    if (name == "SWAP") {
        CMat m = CMat::Zero(4, 4);
        m(0, 0) = 1.0;
        m(1, 2) = 1.0;
        m(2, 1) = 1.0;
        m(3, 3) = 1.0;
        return m;
    }
    if (name == "RXX") return two_site_rotation(params[0], false);
    if (name == "RYY") return two_site_rotation(params[0], true);
    throw InputError("unknown gate: " + name);
}

namespace {

// Embed a k-qubit gate matrix on the given qubit positions of an n-qubit
// register. Qubit q occupies bit (n-1-q) of the basis index.
CMat embed_gate(const CMat& g, const std::vector<int>& qubits, int n) {
    const int k = static_cast<int>(qubits.size());
    const Eigen::Index dim = Eigen::Index{1} << n;
    const Eigen::Index gdim = Eigen::Index{1} << k;
    CMat out = CMat::Zero(dim, dim);
    std::vector<int> bits(qubits.size());
    for (int j = 0; j < k; ++j) bits[static_cast<std::size_t>(j)] = n - 1 - qubits[static_cast<std::size_t>(j)];
    Eigen::Index mask = 0;
    for (int b : bits) mask |= (Eigen::Index{1} << b);

    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::Index gcol = 0;
        for (int j = 0; j < k; ++j) {
            gcol = (gcol << 1) | ((col >> bits[static_cast<std::size_t>(j)]) & 1);
        }
        const Eigen::Index rest = col & ~mask;
        for (Eigen::Index grow = 0; grow < gdim; ++grow) {
            const Complex v = g(grow, gcol);
            if (v == Complex(0.0, 0.0)) continue;
            Eigen::Index row = rest;
            for (int j = 0; j < k; ++j) {
                if ((grow >> (k - 1 - j)) & 1) row |= (Eigen::Index{1} << bits[static_cast<std::size_t>(j)]);
            }
            out(row, col) += v;
        }
    }
    return out;
}

void validate_gate(const Gate& g, int n, std::size_t position) {
    const std::string where = "gate " + std::to_string(position) + " (" + g.name + ")";
    const int arity = gate_arity(g.name);  // throws on unknown gate
    if (static_cast<int>(g.qubits.size()) != arity) {
        throw InputError(where + ": expects " + std::to_string(arity) + " qubit(s), got " +
                         std::to_string(g.qubits.size()));
    }
    for (int q : g.qubits) {
        if (q < 0 || q >= n) {
            throw InputError(where + ": qubit index " + std::to_string(q) + " out of range [0," +
                             std::to_string(n) + ")");
        }
    }
    for (std::size_t a = 0; a < g.qubits.size(); ++a) {
        for (std::size_t b = a + 1; b < g.qubits.size(); ++b) {
            if (g.qubits[a] == g.qubits[b]) throw InputError(where + ": repeated qubit index");
        }
    }
    if (static_cast<int>(g.params.size()) != gate_param_count(g.name)) {
        throw InputError(where + ": wrong parameter count");
    }
}

}  // namespace

CMat compile_circuit(const CircuitSpec& spec) {
    if (spec.n < 1 || spec.n > 6) throw InputError("compile_circuit: n out of range [1,6]");
    const Eigen::Index dim = Eigen::Index{1} << spec.n;
    CMat U = CMat::Identity(dim, dim);
    for (std::size_t i = 0; i < spec.gates.size(); ++i) {
        const Gate& g = spec.gates[i];
        validate_gate(g, spec.n, i);
        U = embed_gate(gate_matrix(g.name, g.params), g.qubits, spec.n) * U;
    }
    if (!matfun::is_unitary(U)) throw NumericalError("compile_circuit: result drifted from unitary");
    return U;
}

CMat qft_matrix(int n) {
    if (n < 1 || n > 6) throw InputError("qft_matrix: n out of range [1,6]");
    const Eigen::Index dim = Eigen::Index{1} << n;
    const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
    CMat F(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            const auto e = static_cast<double>((j * k) % dim);
            F(j, k) = std::polar(norm, 2.0 * pi * e / static_cast<double>(dim));
        }
    }
    return F;
}

std::uint64_t SplitMix64::next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

CircuitSpec random_circuit(int n, int depth, std::uint64_t seed) {
    if (n < 1 || n > 6) throw InputError("random_circuit: n out of range [1,6]");
    if (depth < 1) throw InputError("random_circuit: depth must be >= 1");
    static const std::vector<std::string> pool = {"H", "S", "T", "RX", "RY", "RZ", "CNOT", "CZ"};
    static const std::vector<std::string> pool1 = {"H", "S", "T", "RX", "RY", "RZ"};
    const auto& gates = (n == 1) ? pool1 : pool;

    SplitMix64 rng(seed);
    CircuitSpec spec;
    spec.n = n;
    spec.gates.reserve(static_cast<std::size_t>(depth));
    for (int layer = 0; layer < depth; ++layer) {
        Gate g;
        g.name = gates[static_cast<std::size_t>(rng.next() % gates.size())];
        const int arity = gate_arity(g.name);
        const int q0 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n));
        g.qubits.push_back(q0);
        if (arity == 2) {
            int q1 = static_cast<int>(rng.next() % static_cast<std::uint64_t>(n - 1));
            if (q1 >= q0) ++q1;
            g.qubits.push_back(q1);
        }
        for (int p = 0; p < gate_param_count(g.name); ++p) {
            g.params.push_back(rng.uniform() * 2.0 * pi);
        }
        spec.gates.push_back(std::move(g));
    }
    return spec;
}

CMat fermion_block(const FermionChainSpec& spec, int block) {
    if (spec.sites < 2) throw InputError("fermion_block: need at least 2 sites");
    if (spec.sites > 6) throw InputError("fermion_block: at most 6 sites supported");
    if (block != 1 && block != 2) throw InputError("fermion_block: block must be 1 or 2");
    if (!std::isfinite(spec.hopping) || !std::isfinite(spec.dt)) {
        throw InputError("fermion_block: non-finite parameters");
    }
    const double theta = spec.hopping * spec.dt;
    const Eigen::Index dim = Eigen::Index{1} << spec.sites;
    CMat U = CMat::Identity(dim, dim);
    const int start = (block == 1) ? 0 : 1;
    for (int i = start; i + 1 < spec.sites; i += 2) {
        const std::vector<int> pair = {i, i + 1};
        U = embed_gate(gate_matrix("RXX", {theta}), pair, spec.sites) * U;
        U = embed_gate(gate_matrix("RYY", {theta}), pair, spec.sites) * U;
    }
    return U;
}

CMat trotter_evolution(const FermionChainSpec& spec) {
    if (spec.steps < 0) throw InputError("trotter_evolution: steps must be >= 0");
    const Eigen::Index dim = Eigen::Index{1} << spec.sites;
    CMat U = CMat::Identity(dim, dim);
    if (spec.steps == 0) return U;

    CMat step;
    if (spec.ordering == FermionChainSpec::Ordering::even_odd) {
        step = fermion_block(spec, 2) * fermion_block(spec, 1);
    } else {
        const double theta = spec.hopping * spec.dt;
        step = CMat::Identity(dim, dim);
        for (int i = 0; i + 1 < spec.sites; ++i) {
            const std::vector<int> pair = {i, i + 1};
            step = embed_gate(gate_matrix("RXX", {theta}), pair, spec.sites) * step;
            step = embed_gate(gate_matrix("RYY", {theta}), pair, spec.sites) * step;
        }
    }
    for (int s = 0; s < spec.steps; ++s) U = step * U;
    return U;
}

CMat fermion_chain_hamiltonian(int sites, double hopping) {
    if (sites < 2 || sites > 6) throw InputError("fermion_chain_hamiltonian: sites out of range");
    const Eigen::Index dim = Eigen::Index{1} << sites;
    CMat H = CMat::Zero(dim, dim);
    for (int i = 0; i + 1 < sites; ++i) {
        const std::vector<int> pair = {i, i + 1};
        CMat xx = CMat::Zero(4, 4), yy = CMat::Zero(4, 4);
        xx(0, 3) = 1.0; xx(1, 2) = 1.0; xx(2, 1) = 1.0; xx(3, 0) = 1.0;
        yy(0, 3) = -1.0; yy(1, 2) = 1.0; yy(2, 1) = 1.0; yy(3, 0) = -1.0;
        H += (hopping / 2.0) * (embed_gate(xx, pair, sites) + embed_gate(yy, pair, sites));
    }
    return H;
}

double naive_block_complexity() { return 12.0 * (std::sqrt(3.0) * pi / 4.0); }

namespace {

Gate gate_from_json(const json& jg, std::size_t position) {
    const std::string where = "gate " + std::to_string(position);
    if (!jg.is_object()) throw InputError(where + ": expected an object");
    if (!jg.contains("name") || !jg["name"].is_string()) {
        throw InputError(where + ": missing string field 'name'");
    }
    if (!jg.contains("qubits") || !jg["qubits"].is_array()) {
        throw InputError(where + ": missing array field 'qubits'");
    }
    Gate g;
    g.name = jg["name"].get<std::string>();
    for (const auto& q : jg["qubits"]) {
        if (!q.is_number_integer()) throw InputError(where + ": qubit indices must be integers");
        g.qubits.push_back(q.get<int>());
    }
    if (jg.contains("params")) {
        if (!jg["params"].is_array()) throw InputError(where + ": 'params' must be an array");
        for (const auto& p : jg["params"]) {
            if (!p.is_number()) throw InputError(where + ": params must be numbers");
            g.params.push_back(p.get<double>());
        }
    }
    return g;
}

}  // namespace

CircuitSpec parse_circuit_file(const std::string& bytes) {
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw InputError("circuit JSON syntax error at byte " + std::to_string(e.byte) + ": " +
                         e.what());
    }
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer()) {
        throw InputError("circuit JSON: missing integer field 'n'");
    }
    CircuitSpec spec;
    spec.n = j["n"].get<int>();
    if (spec.n < 1 || spec.n > 6) throw InputError("circuit JSON: n out of range [1,6]");
    if (j.contains("gates")) {
        if (!j["gates"].is_array()) throw InputError("circuit JSON: 'gates' must be an array");
        std::size_t pos = 0;
        for (const auto& jg : j["gates"]) {
            Gate g = gate_from_json(jg, pos);
            validate_gate(g, spec.n, pos);
            spec.gates.push_back(std::move(g));
            ++pos;
        }
    }
    return spec;
}

std::string circuit_to_json(const CircuitSpec& spec) {
    json j;
    j["n"] = spec.n;
    j["gates"] = json::array();
    for (const Gate& g : spec.gates) {
        json jg;
        jg["name"] = g.name;
        jg["qubits"] = g.qubits;
        if (!g.params.empty()) jg["params"] = g.params;
        j["gates"].push_back(std::move(jg));
    }
    return j.dump();
}

}  // namespace targets
}  // namespace qgeo
