#include "xlradr/core/types.h"

#include <algorithm>
#include <cmath>

namespace xlradr {

double Distance(const Position& a, const Position& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

double RoundedDistance(const Position& a, const Position& b) {
  return std::round(Distance(a, b) * 1e9) / 1e9;
}

std::string_view ToString(FrameKind kind) {
  switch (kind) {
    case FrameKind::kRRequest: return "RREQUEST";
    case FrameKind::kAck1: return "ACK1";
    case FrameKind::kData: return "DATA";
    case FrameKind::kAck2: return "ACK2";
    case FrameKind::kRouteRecover: return "ROUTE_RECOVER";
    case FrameKind::kDsrRreq: return "DSR_RREQ";
    case FrameKind::kDsrRrep: return "DSR_RREP";
    case FrameKind::kDsrRerr: return "DSR_RERR";
  }
  return "?";
}

bool Path::Contains(NodeId id) const { return IndexOf(id).has_value(); }

std::optional<std::size_t> Path::IndexOf(NodeId id) const {
  auto it = std::find(nodes.begin(), nodes.end(), id);
  if (it == nodes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - nodes.begin());
}

NotOnPath::NotOnPath(NodeId id)
    : std::out_of_range("node " + std::to_string(Index(id)) + " is not on the path"), m_node(id) {}

std::size_t HopsBetween(const Path& path, NodeId a, NodeId b) {
  auto ia = path.IndexOf(a);
  if (!ia) throw NotOnPath(a);
  auto ib = path.IndexOf(b);
  if (!ib) throw NotOnPath(b);
  return *ia > *ib ? *ia - *ib : *ib - *ia;
}

}  // namespace xlradr
