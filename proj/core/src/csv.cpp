#include "tpa/csv.hpp"

#include <charconv>
#include <ostream>

namespace tpa {

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_trajectory_header(std::ostream& out) { out << kTrajectoryHeader << '\n'; }

void write_trajectory_row(std::ostream& out, const TrajectoryRecord& r) {
  out << r.step;
  for (double v : r.vertex.coords()) out << ',' << format_real(v);
  for (double v : r.degree.coords()) out << ',' << format_real(v);
  out << ',' << format_real(r.product27) << '\n';
}

void write_trajectory_csv(std::ostream& out, std::span<const TrajectoryRecord> records) {
  write_trajectory_header(out);
  for (const auto& r : records) write_trajectory_row(out, r);
}

}  // namespace tpa
