#ifndef SCOTTKIT_CONFIG_HPP
#define SCOTTKIT_CONFIG_HPP

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace scottkit {

/// Raised when an operation would exceed a configured size budget.
struct BudgetError : std::runtime_error {
    explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an input is not in the image of the encoder it claims to be.
struct DecodeError : std::runtime_error {
    explicit DecodeError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on malformed values: signature mismatches, non-members, bad shapes.
struct InvalidInput : std::runtime_error {
    explicit InvalidInput(const std::string& what) : std::runtime_error(what) {}
};

/**
 * Size budgets. All caps are configuration values, not constants; the
 * defaults suit exhaustive desk-scale sweeps. `from_env` applies the
 * SCOTTKIT_BUDGET_PROFILE preset (small|default|large).
 */
struct Budgets {
    std::size_t iso_universe_cap = 64;        // max |A| for isomorphism search
    std::size_t aut_full_listing_cap = 8;     // |A| <= cap guarantees complete listing
    std::size_t aut_count_cap = 200000;       // abort enumeration past this many automorphisms
    std::size_t orbit_tuple_cap = 1000000;    // |A|^k cap for orbit partitions
    std::size_t bf_table_cap = 5000000;       // back-and-forth tuple table cap
    std::size_t dense_step_cap = 2000000;     // partition-table entries per dense_pick
    std::size_t fragment_cap = 200000;        // max elements in an order fragment
    std::size_t tree_node_cap = 4096;         // generator output size cap

    static Budgets profile(const std::string& name) {
        Budgets b;
        if (name == "small") {
            b.iso_universe_cap = 32;
            b.aut_count_cap = 20000;
            b.orbit_tuple_cap = 100000;
            b.bf_table_cap = 500000;
            b.dense_step_cap = 500000;
            b.fragment_cap = 20000;
            b.tree_node_cap = 512;
        } else if (name == "large") {
            b.iso_universe_cap = 128;
            b.aut_count_cap = 2000000;
            b.orbit_tuple_cap = 10000000;
            b.bf_table_cap = 50000000;
            b.dense_step_cap = 20000000;
            b.fragment_cap = 2000000;
            b.tree_node_cap = 65536;
        }
        return b;
    }

    static Budgets from_env() {
        const char* p = std::getenv("SCOTTKIT_BUDGET_PROFILE");
        return profile(p ? std::string(p) : "default");
    }
};

} // namespace scottkit

#endif // SCOTTKIT_CONFIG_HPP
