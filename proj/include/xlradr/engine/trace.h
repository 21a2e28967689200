#pragma once

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include "xlradr/core/types.h"

namespace xlradr {

enum class TraceKind {
  kTx,
  kRx,
  kTimeout,
  kGenerate,
  kDeliver,
  kLost,
  kDeath,
  kSleep,
  kRecover,
  kReestablish,
};

std::string_view ToString(TraceKind kind);

enum class LossReason { kKmaxDrop, kRecoveryExhausted, kUnreachable, kNodeDeath };

std::string_view ToString(LossReason reason);

struct TraceRow {
  SimTime tick = 0;
  std::uint64_t seq = 0;
  TraceKind kind = TraceKind::kTx;
  NodeId actor{};
  std::optional<NodeId> peer;
  std::optional<FrameKind> frame;
  std::string_view outcome;  // static strings only
  double energy_debit_j = 0.0;
};

struct PayloadRecord {
  PayloadId id = 0;
  NodeId src{};
  NodeId dst{};
  std::uint32_t bits = 0;
  SimTime generated_at = 0;
  std::optional<SimTime> delivered_at;
  std::optional<LossReason> lost;
  std::vector<NodeId> delivered_path;
};

struct DeathRecord {
  NodeId node{};
  SimTime at = 0;
};

// Energy categories: transmit and receive per frame kind, plus transmit
// energy of retransmitted DATA kept apart from first transmissions.
inline constexpr std::size_t kTxCategoryBase = 0;
inline constexpr std::size_t kRxCategoryBase = kFrameKindCount;
inline constexpr std::size_t kDataRetxCategory = 2 * kFrameKindCount;
inline constexpr std::size_t kEnergyCategoryCount = kDataRetxCategory + 1;

std::string CategoryName(std::size_t category);

using CategoryLedger = std::array<double, kEnergyCategoryCount>;

struct TraceLog {
  std::uint32_t node_count = 0;
  SimTime sim_end = 0;
  double tick_seconds = 1e-3;
  std::vector<double> initial_energy_j;
  std::vector<double> residual_energy_j;
  std::vector<CategoryLedger> ledger;  // per node

  bool rows_enabled = true;
  std::vector<TraceRow> rows;
  std::vector<DeathRecord> deaths;
  std::vector<PayloadRecord> payloads;
  std::array<std::uint64_t, kFrameKindCount> frames_sent{};
  std::uint64_t retransmissions = 0;
  // Traffic items skipped because their source had already died.
  std::uint64_t suppressed_generations = 0;
  bool ended_all_sources_dead = false;
};

}  // namespace xlradr
