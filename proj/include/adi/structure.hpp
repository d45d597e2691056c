#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "adi/execution.hpp"
#include "adi/spectral.hpp"

namespace adi {

/// Rayleigh damping C = alpha * M + beta * K.
struct RayleighDamping {
    double alpha = 2500.0;  // 1/s
    double beta = 1e-6;     // s

    bool operator==(const RayleighDamping&) const = default;
};

/// Lumped mass-spring-damper chain clamped at the root. Spring j joins nodes j
/// and j + 1; `root_stiffness` ties node 0 to ground.
struct StructureModel {
    std::vector<double> masses;       // kg
    std::vector<double> stiffnesses;  // N/m, size n_nodes - 1
    double root_stiffness = 0.0;      // N/m
    RayleighDamping damping;
    std::map<TransducerId, std::size_t> transducer_nodes;
    double pitch_m = 0.02;

    std::size_t n_nodes() const { return masses.size(); }
    std::size_t node_of(TransducerId id) const;
    std::vector<TransducerId> transducer_ids() const;
    /// Axial coordinate (m) of each transducer, measured from the root.
    std::map<TransducerId, double> transducer_positions() const;
    void validate() const;

    bool operator==(const StructureModel&) const = default;
};

struct ChainParams {
    std::size_t n_nodes = 64;
    double mass_kg = 0.05;
    double stiffness_n_per_m = 2e6;
    RayleighDamping damping;
    double pitch_m = 0.02;
    std::size_t transducer_count = 4;
};

/// Uniform chain with transducers evenly spaced over the middle half, ids 1..count.
StructureModel make_uniform_chain(const ChainParams& params = {});

/// Local stiffness loss standing in for a delamination.
struct DamageSpec {
    std::size_t site_node = 0;
    double severity = 0.0;  // [0, 1)

    bool operator==(const DamageSpec&) const = default;
};

/// Scales the two springs adjacent to site_node by (1 - severity). At node 0 the
/// root spring counts as the left neighbour; the free end has only one.
StructureModel apply_damage(const StructureModel& model, const DamageSpec& spec);
StructureModel apply_damage(const StructureModel& model, std::span<const DamageSpec> specs);

/// Complex receptance for one drive node at every node, row-major [freq][node].
class FrfMatrix {
public:
    FrfMatrix() = default;
    FrfMatrix(std::size_t n_freqs, std::size_t n_nodes) : n_freqs_(n_freqs), n_nodes_(n_nodes), data_(n_freqs * n_nodes) {}

    std::size_t n_freqs() const { return n_freqs_; }
    std::size_t n_nodes() const { return n_nodes_; }
    std::complex<double>& operator()(std::size_t f, std::size_t node) { return data_[f * n_nodes_ + node]; }
    const std::complex<double>& operator()(std::size_t f, std::size_t node) const { return data_[f * n_nodes_ + node]; }
    std::span<std::complex<double>> row(std::size_t f) { return {data_.data() + f * n_nodes_, n_nodes_}; }

    bool operator==(const FrfMatrix&) const = default;

private:
    std::size_t n_freqs_ = 0;
    std::size_t n_nodes_ = 0;
    std::vector<std::complex<double>> data_;
};

/// Solves (K - w^2 M + i w C) u = e_drive at each frequency with a tridiagonal
/// sweep. The OpenMP kernel splits the frequency axis; Execution::serial is the
/// reference loop. Throws NumericalError naming the bin when a pivot vanishes.
FrfMatrix frf_sweep(const StructureModel& model, std::size_t drive_node, std::span<const double> freqs_hz,
                    Execution exec = Execution::parallel);

/// H(w) = e_s^T (K - w^2 M + i w C)^-1 e_a on the given grid; coherence is 1.
TransferFunction analytic_frf(const StructureModel& model, std::size_t actuator_node, std::size_t sensor_node,
                              std::span<const double> freqs_hz);

}  // namespace adi
