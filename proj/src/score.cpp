#include "markerlr/score.hpp"

namespace markerlr {

std::string_view to_string(StatisticKind kind) noexcept {
  switch (kind) {
  case StatisticKind::deviance_lr: return "deviance_lr";
  case StatisticKind::ks_d: return "ks_d";
  case StatisticKind::welch_t: return "welch_t";
  }
  return "deviance_lr";
}

} // namespace markerlr
