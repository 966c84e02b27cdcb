#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>

#include "persbar/path.hpp"
#include "persbar/random.hpp"

namespace persbar {

enum class Family {
    bm,
    drift_bm,
    bridge,
    ito_constant,
    ou,
    rademacher,
    empirical,
    levy,
    fbm,
    time_changed_bm,
};

std::string family_name(Family f);
/// Inverse of family_name; throws DomainError on an unknown name.
Family parse_family(const std::string& name);

/// Parameters of a process family. Fields a family does not use are ignored
/// by the sampler but kept in the fingerprint.
struct ProcessSpec {
    Family family = Family::bm;
    double t = 1.0;          // horizon (bridge, empirical and levy live on [0, 1])
    double mu = 0.0;         // drift
    double sigma = 1.0;      // diffusion coefficient
    double theta = 1.0;      // OU mean reversion
    double hurst = 0.5;      // FBM index H
    std::size_t n = 0;       // walk steps, empirical samples or Levy modes
    std::size_t n_steps = 1000;
    std::optional<SampledPath> qv;  // time-changed BM clock, qv(start) = 0

    /// Throws DomainError naming the first bad parameter.
    void validate() const;
    /// Stable text identifying every parameter, for result provenance.
    std::string fingerprint() const;
};

SampledPath sample(const ProcessSpec& spec, Seed seed, std::uint64_t trial);

/// Supported couplings: two Levy partial sums sharing their coefficients,
/// BM with a coarsened copy (either order; the smaller n_steps must divide
/// the larger), and identical specs. Paths come back in argument order.
/// Anything else throws DomainError.
/// Throws DomainError exactly when coupled_pair(a, b, ...) would.
void validate_coupling(const ProcessSpec& a, const ProcessSpec& b);

std::pair<SampledPath, SampledPath> coupled_pair(const ProcessSpec& spec_a, const ProcessSpec& spec_b,
                                                 Seed seed, std::uint64_t trial);

}  // namespace persbar
