#ifndef TPA_CSV_HPP
#define TPA_CSV_HPP

#include <iosfwd>
#include <span>
#include <string>

#include "tpa/engine.hpp"

namespace tpa {

inline constexpr const char* kTrajectoryHeader = "step,A,B,C,X,Y,Z,product27";

// Reals are printed with 17 significant digits, as "%.17g" would.
std::string format_real(double v);

void write_trajectory_header(std::ostream& out);
void write_trajectory_row(std::ostream& out, const TrajectoryRecord& r);
void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records);

}  // namespace tpa

#endif  // TPA_CSV_HPP
