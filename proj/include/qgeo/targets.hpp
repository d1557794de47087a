#pragma once

#include "qgeo/matfun.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgeo {
namespace targets {

struct Gate {
    std::string name;
    std::vector<int> qubits;
    std::vector<double> params;
};

// Gates apply in list order: gates[0] acts first, so the compiled matrix is
// g_last * ... * gates[0]. Qubit 0 is the leftmost (most significant) tensor
// factor throughout.
struct CircuitSpec {
    int n = 1;
    std::vector<Gate> gates;
};

struct FermionChainSpec {
    int sites = 2;
    double hopping = 1.0;
    double dt = 0.1;
    int steps = 1;
    enum class Ordering { even_odd, naive } ordering = Ordering::even_odd;
};

int gate_arity(const std::string& name);
int gate_param_count(const std::string& name);

// Native matrix of one gate (RXX(t) = exp(-i t/2 X(x)X), RYY analogous).
CMat gate_matrix(const std::string& name, const std::vector<double>& params);

CMat compile_circuit(const CircuitSpec& spec);

// Entry (j,k) = omega^{jk} / sqrt(2^n), omega = exp(2 pi i / 2^n).
CMat qft_matrix(int n);

// Deterministic layered circuit: each layer draws one gate from
// {H,S,T,RX,RY,RZ,CNOT,CZ} (single-qubit pool only when n = 1), uniform angles
// in [0, 2pi), distinct qubit indices. Streams from splitmix64(seed).
CircuitSpec random_circuit(int n, int depth, std::uint64_t seed);

// One even (block 1) or odd (block 2) bond layer of RXX.RYY rotations with
// angle hopping*dt on an open chain of `sites` qubits.
CMat fermion_block(const FermionChainSpec& spec, int block);

CMat trotter_evolution(const FermionChainSpec& spec);

// XX-chain Hamiltonian (h/2) sum_i (X_i X_{i+1} + Y_i Y_{i+1}), the
// Jordan-Wigner image of the hopping chain; oracle for Trotter error tests.
CMat fermion_chain_hamiltonian(int sites, double hopping);

// 12 CNOTs per block at sqrt(3) pi / 4 each.
double naive_block_complexity();

CircuitSpec parse_circuit_file(const std::string& bytes);
std::string circuit_to_json(const CircuitSpec& spec);

// splitmix64 stream; the pinned PRNG for random_circuit.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform();  // [0, 1)
};

}  // namespace targets
}  // namespace qgeo
