#include "blf/errors.hpp"

namespace blf {

ConstraintBreach::ConstraintBreach(const std::string& what, int joint, double time)
    : Error(what), joint_(joint), time_(time) {}

NonFinite::NonFinite(const std::string& what, double time) : Error(what), time_(time) {}

}  // namespace blf
