// SPDX-License-Identifier: Apache-2.0

#include "lite/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lite/errors.hpp"

namespace lite::optim {

void ScheduleSpec::validate() const {
    if (!(lr_max >= 0.0) || !std::isfinite(lr_max)) throw ConfigError("schedule.lr_max must be finite and >= 0");
    if (total_steps == 0) throw ConfigError("schedule.total_steps must be positive");
    if (warmup_steps > total_steps) throw ConfigError("schedule.warmup_steps exceeds schedule.total_steps");
}

double lr_at(const ScheduleSpec& s, std::size_t step) {
    if (step > s.total_steps) {
        throw ContractError("lr_at: step " + std::to_string(step) + " beyond total_steps " +
                            std::to_string(s.total_steps));
    }
    if (step < s.warmup_steps) {
        return s.lr_max * static_cast<double>(step) / static_cast<double>(s.warmup_steps);
    }
    const double t = static_cast<double>(step);
    const double total = static_cast<double>(s.total_steps);
    const double warm = static_cast<double>(s.warmup_steps);
    switch (s.kind) {
        case ScheduleKind::constant:
            return s.lr_max;
        case ScheduleKind::cos: {
            if (s.total_steps == s.warmup_steps) return s.lr_max;
            const double lr_min = 0.1 * s.lr_max;
            const double progress = (t - warm) / (total - warm);
            return lr_min + (s.lr_max - lr_min) * 0.5 * (1.0 + std::cos(std::numbers::pi * progress));
        }
        case ScheduleKind::wsd: {
            const double decay_start = std::max(warm, 0.8 * total);
            if (t <= decay_start) return s.lr_max;
            return s.lr_max * (total - t) / (total - decay_start);
        }
    }
    return s.lr_max;
}

ScheduleKind parse_schedule_kind(const std::string& name) {
    if (name == "cos") return ScheduleKind::cos;
    if (name == "wsd") return ScheduleKind::wsd;
    if (name == "constant") return ScheduleKind::constant;
    throw ConfigError("unknown schedule kind '" + name + "' (expected cos, wsd or constant)");
}

std::string to_string(ScheduleKind kind) {
    switch (kind) {
        case ScheduleKind::cos: return "cos";
        case ScheduleKind::wsd: return "wsd";
        case ScheduleKind::constant: return "constant";
    }
    return "constant";
}

}  // namespace lite::optim
