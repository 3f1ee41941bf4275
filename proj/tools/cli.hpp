#ifndef AMF_TOOLS_CLI_HPP
#define AMF_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace amf {

/// Exit codes: 0 success, 1 domain error, 2 usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace amf

#endif  // AMF_TOOLS_CLI_HPP
