#pragma once

#include <string>

#include "xlradr/engine/scenario.h"
#include "xlradr/engine/trace.h"
#include "xlradr/metrics/metrics.h"

namespace xlradr {

// 9 significant digits, "%.9g".
std::string FormatNumber(double v);

std::string MetricsHeader();
std::string MetricsRow(const RunMetrics& metrics, const Scenario& scenario);

std::string TraceCsv(const TraceLog& trace);
std::string LifetimeCurveCsv(const TraceLog& trace);

}  // namespace xlradr
