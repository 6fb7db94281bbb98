#include "sosw/dsl.hpp"
#include "sosw/error.hpp"
#include "sosw/harness.hpp"

namespace sosw {

namespace detail {
const std::map<std::string, std::string>& embedded_specs();
}

const std::map<std::string, std::string>& bundled_specs() { return detail::embedded_specs(); }

TSS load_bundled(const std::string& name) {
  const auto& specs = bundled_specs();
  auto it = specs.find(name);
  if (it == specs.end()) throw Error(ErrorKind::Precondition, "no bundled spec named '" + name + "'");
  return parse_spec(it->second);
}

}  // namespace sosw
