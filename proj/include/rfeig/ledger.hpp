#pragma once

#include <cstdint>
#include <map>
#include <string>

namespace rfeig {

// Exact linear-solve tally, split by algorithm phase and solve family.
// Interior-block solves B(zeta) x_d = b_d and interface solves
// S(zeta) x_s = b_s are the two cost units of the partitioned algorithms; a
// solve with the full matrix A - zeta*M counts as two B-solves plus one
// S-solve (its Schur-form decomposition) and is additionally tracked raw.
struct PhaseCounts {
    std::int64_t b_solves = 0;
    std::int64_t s_solves = 0;
    std::int64_t full_solves = 0;
};

class SolveLedger {
public:
    void add_b(const std::string& phase, std::int64_t count) { phases_[phase].b_solves += count; }
    void add_s(const std::string& phase, std::int64_t count) { phases_[phase].s_solves += count; }
    void add_full(const std::string& phase, std::int64_t count) {
        PhaseCounts& c = phases_[phase];
        c.full_solves += count;
        c.b_solves += 2 * count;
        c.s_solves += count;
    }

    const std::map<std::string, PhaseCounts>& phases() const { return phases_; }
    PhaseCounts phase(const std::string& name) const {
        auto it = phases_.find(name);
        return it == phases_.end() ? PhaseCounts{} : it->second;
    }
    PhaseCounts total() const {
        PhaseCounts sum;
        for (const auto& [name, counts] : phases_) {
            sum.b_solves += counts.b_solves;
            sum.s_solves += counts.s_solves;
            sum.full_solves += counts.full_solves;
        }
        return sum;
    }

private:
    std::map<std::string, PhaseCounts> phases_;
};

}  // namespace rfeig
