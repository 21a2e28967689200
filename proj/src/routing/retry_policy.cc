#include "xlradr/routing/retry_policy.h"

#include <algorithm>
#include <stdexcept>

namespace xlradr {

std::string_view ToString(KmaxMode mode) {
  return mode == KmaxMode::kFormula ? "formula" : "progressive";
}

std::size_t InitialM(const Path& path) {
  if (path.HopCount() < 1) throw std::invalid_argument("path needs at least one hop");
  return HopsBetween(path, path.nodes[1], path.nodes.back());
}

RetryContext RetryContext::FromPath(const Path& path, NodeId transmitter, int retry_count) {
  RetryContext ctx;
  ctx.hop_count = path.HopCount();
  ctx.transmitter_index = HopsBetween(path, path.nodes.front(), transmitter);
  if (ctx.transmitter_index >= ctx.hop_count) throw std::invalid_argument("transmitter is the destination");
  ctx.initial_m = InitialM(path);
  ctx.retry_count = retry_count;
  return ctx;
}

int RawKmax(const RetryContext& ctx, KmaxMode mode) {
  if (mode == KmaxMode::kFormula) {
    // hops(source -> transmitter) + hops(receiver -> destination)
    const std::size_t receiver_left = ctx.hop_count - ctx.transmitter_index - 1;
    return static_cast<int>(ctx.transmitter_index + receiver_left);
  }
  return static_cast<int>(ctx.initial_m + ctx.transmitter_index);
}

int KmaxForLink(const RetryContext& ctx, const KmaxPolicy& policy) {
  return std::max(RawKmax(ctx, policy.mode), policy.floor);
}

bool ShouldDrop(const RetryContext& ctx, const KmaxPolicy& policy) {
  return ctx.retry_count >= KmaxForLink(ctx, policy);
}

}  // namespace xlradr
