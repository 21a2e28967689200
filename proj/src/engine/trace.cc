#include "xlradr/engine/trace.h"

#include <string>

namespace xlradr {

std::string_view ToString(TraceKind kind) {
  switch (kind) {
    case TraceKind::kTx: return "tx";
    case TraceKind::kRx: return "rx";
    case TraceKind::kTimeout: return "timeout";
    case TraceKind::kGenerate: return "generate";
    case TraceKind::kDeliver: return "deliver";
    case TraceKind::kLost: return "lost";
    case TraceKind::kDeath: return "death";
    case TraceKind::kSleep: return "sleep";
    case TraceKind::kRecover: return "recover";
    case TraceKind::kReestablish: return "reestablish";
  }
  return "?";
}

std::string_view ToString(LossReason reason) {
  switch (reason) {
    case LossReason::kKmaxDrop: return "KmaxDrop";
    case LossReason::kRecoveryExhausted: return "RecoveryExhausted";
    case LossReason::kUnreachable: return "Unreachable";
    case LossReason::kNodeDeath: return "NodeDeath";
  }
  return "?";
}

std::string CategoryName(std::size_t category) {
  if (category == kDataRetxCategory) return "tx_DATA_RETX";
  if (category < kRxCategoryBase) return "tx_" + std::string(ToString(static_cast<FrameKind>(category)));
  return "rx_" + std::string(ToString(static_cast<FrameKind>(category - kRxCategoryBase)));
}

}  // namespace xlradr
