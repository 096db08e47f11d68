#pragma once

#include "crowdrep/attack.hpp"
#include "crowdrep/baselines.hpp"
#include "crowdrep/config.hpp"
#include "crowdrep/error.hpp"
#include "crowdrep/evaluation.hpp"
#include "crowdrep/fairness.hpp"
#include "crowdrep/graph.hpp"
#include "crowdrep/log_ingest.hpp"
#include "crowdrep/reputation.hpp"
#include "crowdrep/synthetic.hpp"
#include "crowdrep/timeutil.hpp"
#include "crowdrep/trust.hpp"
