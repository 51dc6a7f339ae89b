#pragma once

#include <cstdint>
#include <unordered_map>

namespace ride::intrinsic {

// Visitation counts keyed by observation hash. The episodic table is cleared
// at every episode start; the global table persists across training.
struct CountStore {
  std::unordered_map<uint64_t, uint64_t> episodic;
  std::unordered_map<uint64_t, uint64_t> global;

  // Registers an episodic visit and returns the new count (1 on first visit).
  uint64_t episodic_visit(uint64_t key) { return ++episodic[key]; }

  uint64_t global_visit(uint64_t key) { return ++global[key]; }

  void reset_episode() { episodic.clear(); }

  uint64_t episodic_count(uint64_t key) const {
    auto it = episodic.find(key);
    return it == episodic.end() ? 0 : it->second;
  }
  uint64_t global_count(uint64_t key) const {
    auto it = global.find(key);
    return it == global.end() ? 0 : it->second;
  }
};

}  // namespace ride::intrinsic
