#pragma once

#include "branch_bound.hpp"
#include "budget.hpp"
#include "completion_bound.hpp"
#include "cost.hpp"
#include "dfg.hpp"
#include "error.hpp"
#include "library.hpp"
#include "list_scheduler.hpp"
#include "oracle.hpp"
#include "pareto.hpp"
#include "report.hpp"
#include "schedule.hpp"
#include "timing.hpp"
