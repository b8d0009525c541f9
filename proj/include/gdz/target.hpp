#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace gdz {

/// The result families the toolkit implements. The string identifiers
/// ("2.4", "4.1", ...) are the ones used on the command line and in files.
enum class Target {
  nilpotent_pair,        ///< "2.2": a, b nilpotent, ab = lambda ba
  nilpotent_drazin,      ///< "2.3": a nilpotent, ab = lambda b a b^pi
  additive,              ///< "2.4": ab = lambda a^pi b a b^pi
  block_qp,              ///< "3.1": P + Q splitting, QP condition
  block_qp_bc_zero,      ///< "3.2": as block_qp with BC = 0
  block_pq,              ///< "3.3": P + Q splitting, PQ condition
  block_pq_bc_zero,      ///< "3.4": as block_pq with DC = 0, BC = 0
  block_core,            ///< "4.1": core/nilpotent splitting of A, BC = 0
  block_core_exchanged,  ///< "4.2": block_core after exchanging the blocks, CB = 0
  block_bc_zero,         ///< "4.3": AB, DC conditions with BC = 0
};

inline constexpr std::array<Target, 10> all_targets = {
    Target::nilpotent_pair,   Target::nilpotent_drazin, Target::additive,
    Target::block_qp,         Target::block_qp_bc_zero, Target::block_pq,
    Target::block_pq_bc_zero, Target::block_core,       Target::block_core_exchanged,
    Target::block_bc_zero};

inline constexpr std::array<std::string_view, 10> target_ids = {
    "2.2", "2.3", "2.4", "3.1", "3.2", "3.3", "3.4", "4.1", "4.2", "4.3"};

constexpr std::string_view target_id(Target t) { return target_ids[static_cast<std::size_t>(t)]; }

constexpr std::optional<Target> parse_target(std::string_view id) {
  for (std::size_t i = 0; i < target_ids.size(); ++i) {
    if (target_ids[i] == id) return all_targets[i];
  }
  return std::nullopt;
}

constexpr bool is_block_target(Target t) {
  return static_cast<int>(t) >= static_cast<int>(Target::block_qp);
}

}  // namespace gdz
