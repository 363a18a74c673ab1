#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace signlab {

// Self-contained log-log polyline chart of (x, y) points, with an optional
// dashed reference line of the given slope anchored at the first point.
// Points with x <= 0 or y <= 0 are dropped (they have no log coordinates).
void write_loglog_svg(std::ostream& os,
                      const std::vector<std::pair<double, double>>& points,
                      std::optional<double> reference_slope,
                      const std::string& title);

} // namespace signlab
