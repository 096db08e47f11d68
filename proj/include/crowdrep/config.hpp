#pragma once

#include "crowdrep/fairness.hpp"
#include "crowdrep/timeutil.hpp"
#include "crowdrep/trust.hpp"

namespace crowdrep {

/// Model parameters shared by every stage of the computation.
struct EngineConfig {
    double scale_max = 3.0; ///< M, ceiling of the evaluation scale
    double half_life = 2.0; ///< t, in intervals
    Duration interval_width = kHalfYear;
    CreditFunction credit_fn = CreditFunction::identity;
    ConsensusMode consensus = ConsensusMode::per_evaluator;
    FairnessMode fairness = FairnessMode::literal;

    double q() const { return compute_q(half_life); }

    void validate() const {
        if (!(scale_max > 0.0)) throw ConfigError("scale maximum M must be positive");
        if (!(half_life > 0.0)) throw ConfigError("half-life must be positive");
        if (interval_width.count() <= 0) throw ConfigError("interval width must be positive");
    }
};

} // namespace crowdrep
