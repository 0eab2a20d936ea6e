#include "sphq_cli/output.hpp"

#include <charconv>

#include "sphq/errors.hpp"

namespace sphq::cli {

std::string fmt(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, p);
}

std::ofstream open_output(const std::filesystem::path& path, bool binary) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!os) throw ConfigError("cannot write '" + path.string() + "'");
  return os;
}

void write_dat(const std::filesystem::path& path, const std::string& xname, const std::string& yname,
               const std::vector<double>& x, const std::vector<double>& y) {
  auto os = open_output(path);
  os << "# " << xname << ' ' << yname << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) os << fmt(x[i]) << ' ' << fmt(y[i]) << '\n';
}

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) {
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
      out += c;
    else if (c == '^')
      out += 'p';
    else if (c == '-')
      out += 'm';
    else if (c == '.')
      out += 'd';
    else if (!out.empty() && out.back() != '_')
      out += '_';
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out.empty() ? "f" : out;
}

}  // namespace sphq::cli
