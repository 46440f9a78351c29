// SPDX-License-Identifier: Apache-2.0

#ifndef LITE_SCHEDULE_HPP
#define LITE_SCHEDULE_HPP

#include <cstddef>
#include <string>

namespace lite::optim {

enum class ScheduleKind { cos, wsd, constant };

/// Linear warmup to lr_max, then
///  - cos: cosine decay to 0.1·lr_max at total_steps;
///  - wsd: flat until 0.8·total_steps, then linear to 0;
///  - constant: flat.
struct ScheduleSpec {
    ScheduleKind kind = ScheduleKind::constant;
    double lr_max = 1e-3;
    std::size_t warmup_steps = 0;
    std::size_t total_steps = 1000;

    void validate() const;
};

double lr_at(const ScheduleSpec& schedule, std::size_t step);

ScheduleKind parse_schedule_kind(const std::string& name);
std::string to_string(ScheduleKind kind);

}  // namespace lite::optim

#endif  // LITE_SCHEDULE_HPP
