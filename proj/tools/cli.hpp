#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <crossinggram/lattice.hpp>

namespace crossinggram::cli {

enum ExitCode : int { ok = 0, config_error = 2, data_error = 3, numerical_error = 4 };

int run(int argc, char** argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// disk:<r>[@<x>,<y>] | annulus:<r1>,<r2> | square:<h>@<x>,<y> | file:<path>
Region parse_region_spec(const std::string& spec);

// disk:<r> | file:<path>
Region parse_domain_spec(const std::string& spec);

}  // namespace crossinggram::cli
