#pragma once

#include <cstdint>
#include <string>

#include "crowdrep/timeutil.hpp"

namespace crowdrep {

using ActorId = std::string;

/// One time-stamped, credited judgement of a worker by an evaluator.
struct Evaluation {
    ActorId evaluator;
    ActorId worker;
    double value = 0.0;          ///< in [0, M]
    Timestamp timestamp{};
    std::int64_t time_label = 1; ///< 1-based interval index
    double credit = 1.0;         ///< > 0

    friend bool operator==(const Evaluation&, const Evaluation&) = default;
};

} // namespace crowdrep
