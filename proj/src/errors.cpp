#include <crossinggram/errors.hpp>

#include <string>

namespace crossinggram {

MissingSupport::MissingSupport(std::vector<LatticePoint> missing)
    : DataError([&] {
        std::string msg = "missing support: " + std::to_string(missing.size()) + " required site(s) not sampled:";
        std::size_t shown = 0;
        for (const auto& p : missing) {
          if (shown++ == 20) {
            msg += " ...";
            break;
          }
          msg += " " + to_string(p);
        }
        return msg;
      }()),
      missing_(std::move(missing)) {}

NoExceedances::NoExceedances(double level)
    : NumericalError("no replicate exceeds level u=" + std::to_string(level) + " anywhere in the region"),
      level_(level) {}

}  // namespace crossinggram
