#include "plrs/csv.hpp"

#include <cstdio>
#include <fstream>

#include "plrs/error.hpp"
#include "plrs/version.hpp"

namespace plrs {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv_preamble(std::ostream& out, const std::string& config_digest,
                        std::uint64_t seed) {
  out << "# config_digest=" << (config_digest.empty() ? "-" : config_digest) << '\n'
      << "# seed=" << seed << '\n'
      << "# tool=plrs " << kVersion << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error("cannot open " + tmp.string() + " for writing");
      out << text;
      out.flush();
      if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
      throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " +
                  ec.message());
    }
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

}  // namespace plrs
