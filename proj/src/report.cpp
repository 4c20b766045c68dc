#include "hullsep/report.hpp"

namespace hullsep {

std::string_view status_name(Status status) {
  switch (status) {
    case Status::Intersecting: return "intersecting";
    case Status::Separated: return "separated";
    case Status::MaxIterations: return "max_iterations";
    case Status::Converged: return "converged";
  }
  return "unknown";
}

}  // namespace hullsep
