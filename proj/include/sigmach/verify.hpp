#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sigmach/ca.hpp"
#include "sigmach/cts.hpp"

namespace sigmach::verify {

/// mt19937_64 with a bounded draw that does not depend on the standard
/// library's distributions, so a seed gives the same instances everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    /// Uniform in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi);

private:
    std::mt19937_64 engine_;
};

/// Seed of instance `index` in a suite started from `seed`.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

struct CtsBounds {
    std::size_t max_appendants = 4;
    std::size_t max_appendant_length = 4;
    std::size_t max_word = 6;
    std::size_t iterations = 30;
    bool allow_halt = true;
};

struct CaBounds {
    std::size_t max_states = 4;
    std::size_t max_width = 6;
    std::size_t max_background = 3;
    std::size_t max_horizon = 8;
};

cts::CyclicTagSystem random_cts(Rng& rng, const CtsBounds& bounds = {});

struct CaInstance {
    ca::CellularAutomaton ca;
    ca::CAWindow window;
    std::size_t horizon = 1;
};

CaInstance random_ca(Rng& rng, const CaBounds& bounds = {});

/// Empty string on success, otherwise the first discrepancy.
std::string check_cts(const cts::CyclicTagSystem& sys, const cts::SimulationOptions& options,
                      std::size_t iterations);
std::string check_ca(const CaInstance& inst);

/// Greedy reduction keeping check_cts failing: drop appendants, shorten
/// words, drop the halt marker, lower the iteration count.
struct CtsRepro {
    cts::CyclicTagSystem system;
    std::size_t iterations = 0;
    std::string failure;
};
CtsRepro shrink_cts(const cts::CyclicTagSystem& sys, const cts::SimulationOptions& options,
                    std::size_t iterations);

struct CaRepro {
    CaInstance instance;
    std::string failure;
};
CaRepro shrink_ca(const CaInstance& inst);

struct InstanceResult {
    std::size_t index = 0;
    std::string instance;  ///< serialized, ready to replay
    std::string failure;   ///< empty when the instance passed
};

struct Report {
    std::vector<InstanceResult> results;  ///< sorted by index
    std::size_t passed = 0;

    bool ok() const { return passed == results.size(); }
    /// One line per instance and a summary line; byte-identical for a seed.
    std::string text() const;
};

Report verify_cts(std::size_t count, std::uint64_t seed, const cts::SimulationOptions& options,
                  const CtsBounds& bounds = {}, unsigned threads = 0);
Report verify_ca(std::size_t count, std::uint64_t seed, const CaBounds& bounds = {}, unsigned threads = 0);

/// Serialized CA instance: local table, window and `horizon <T>`.
std::string emit_ca_instance(const CaInstance& inst);
CaInstance parse_ca_instance(std::string_view text);

}  // namespace sigmach::verify
