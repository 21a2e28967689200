#pragma once

#include <cstddef>
#include <string_view>

#include "xlradr/core/types.h"

namespace xlradr {

enum class KmaxMode { kFormula, kProgressive };

std::string_view ToString(KmaxMode mode);

struct KmaxPolicy {
  KmaxMode mode = KmaxMode::kFormula;
  int floor = 1;
};

// Retransmission context for one hop of one payload. The path may be the
// cached end-to-end route or a hop-count estimate; only its length and the
// transmitter's position on it enter the Kmax arithmetic.
struct RetryContext {
  std::size_t hop_count = 0;          // path L
  std::size_t transmitter_index = 0;  // source = 0
  std::size_t initial_m = 0;          // m as seen by the source
  int retry_count = 0;

  static RetryContext FromPath(const Path& path, NodeId transmitter, int retry_count = 0);
};

// Hops from the first receiver to the destination: L - 1.
std::size_t InitialM(const Path& path);

// Kmax before flooring.
int RawKmax(const RetryContext& ctx, KmaxMode mode);

int KmaxForLink(const RetryContext& ctx, const KmaxPolicy& policy);

bool ShouldDrop(const RetryContext& ctx, const KmaxPolicy& policy);

}  // namespace xlradr
