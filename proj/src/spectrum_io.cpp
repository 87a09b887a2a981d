#include "nlspec/spectrum_io.hpp"

#include "nlspec/errors.hpp"
#include "nlspec/format.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace nlspec {

namespace {

std::string format_eigenvalue(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
  if (ec != std::errc()) fail(ErrorKind::InvalidArgument, "cannot format eigenvalue");
  return std::string(buf, end);
}

[[noreturn]] void malformed(int line, const std::string& what) {
  fail(ErrorKind::MalformedFile, "line " + std::to_string(line) + ": " + what);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

long parse_integer(std::string_view text, int line, const char* what) {
  text = trim(text);
  long v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    malformed(line, std::string("bad ") + what + " '" + std::string(text) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

}  // namespace

std::string spectrum_to_csv(const Spectrum& s) {
  s.validate();
  std::ostringstream os;
  os << kSpectrumHeader << '\n';
  os << "# domain=" << s.domain.describe() << '\n';
  os << "# bc=" << to_string(s.bc) << '\n';
  os << "# mu=" << format_double(s.params.mu) << '\n';
  os << "# lambda=" << format_double(s.params.lambda) << '\n';
  os << "# method=" << to_string(s.method) << '\n';
  os << "# grid=" << s.grid << '\n';
  os << "index,eigenvalue,multiplicity\n";
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
    os << i + 1 << ',' << format_eigenvalue(s.eigenvalues[i]) << ',' << s.multiplicities[i] << '\n';
  return os.str();
}

Spectrum spectrum_from_csv(std::string_view text) {
  Spectrum s;
  std::map<std::string, std::string> meta;
  bool have_header = false, have_columns = false, legacy = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = trim(text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos));
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;
    if (line.empty()) continue;

    if (!have_header) {
      if (line != kSpectrumHeader) malformed(line_no, "expected '" + std::string(kSpectrumHeader) + "'");
      have_header = true;
      continue;
    }
    if (line.front() == '#') {
      if (have_columns) malformed(line_no, "metadata after the column header");
      const auto body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) malformed(line_no, "metadata must be '# key=value'");
      const std::string key(trim(body.substr(0, eq)));
      if (key != "domain" && key != "bc" && key != "mu" && key != "lambda" && key != "method" && key != "grid")
        malformed(line_no, "unknown metadata key '" + key + "'");
      if (!meta.emplace(key, std::string(trim(body.substr(eq + 1)))).second)
        malformed(line_no, "duplicate metadata key '" + key + "'");
      continue;
    }
    if (!have_columns) {
      if (line == "index,eigenvalue,multiplicity") {
        legacy = false;
      } else if (line == "index,eigenvalue") {
        legacy = true;
      } else {
        malformed(line_no, "expected column header 'index,eigenvalue,multiplicity'");
      }
      have_columns = true;
      continue;
    }

    const auto fields = split(line, ',');
    if (fields.size() != (legacy ? 2u : 3u))
      malformed(line_no, "expected " + std::to_string(legacy ? 2 : 3) + " fields, got " + std::to_string(fields.size()));
    const long index = parse_integer(fields[0], line_no, "index");
    if (index != static_cast<long>(s.eigenvalues.size()) + 1)
      malformed(line_no, "index " + std::to_string(index) + " out of sequence");
    double value = 0.0;
    try {
      value = parse_double(fields[1]);
    } catch (const Error&) {
      malformed(line_no, "bad eigenvalue '" + std::string(trim(fields[1])) + "'");
    }
    if (!std::isfinite(value) || value < 0.0) malformed(line_no, "eigenvalue must be finite and nonnegative");
    const long mult = legacy ? 1 : parse_integer(fields[2], line_no, "multiplicity");
    if (mult < 1) malformed(line_no, "multiplicity must be >= 1");
    if (!s.eigenvalues.empty() && value < s.eigenvalues.back())
      fail(ErrorKind::SortedViolation, "line " + std::to_string(line_no) + ": eigenvalue " + std::string(trim(fields[1])) +
                                           " is below its predecessor");
    s.eigenvalues.push_back(value);
    s.multiplicities.push_back(static_cast<int>(mult));
  }
  if (!have_header) malformed(1, "empty file");
  if (!have_columns) malformed(line_no, "missing column header");

  auto required = [&](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) malformed(1, std::string("missing metadata '") + key + "'");
    return it->second;
  };
  try {
    s.bc = parse_boundary_condition(required("bc"));
    s.params.mu = parse_double(required("mu"));
    s.params.lambda = parse_double(required("lambda"));
    s.params.validate();
    if (meta.count("domain")) s.domain = Domain::parse(meta["domain"]);
    if (meta.count("method")) s.method = parse_solver_method(meta["method"]);
    if (meta.count("grid")) s.grid = static_cast<int>(parse_integer(meta["grid"], 1, "grid"));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::MalformedFile) throw;
    fail(ErrorKind::MalformedFile, std::string("metadata: ") + e.what());
  }
  return s;
}

void spectrum_export(const Spectrum& spectrum, const std::string& path) {
  write_file_atomic(path, spectrum_to_csv(spectrum));
}

Spectrum spectrum_import(const std::string& path) { return spectrum_from_csv(read_file(path)); }

void write_file_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::InvalidArgument, "cannot write '" + tmp.string() + "'");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) fail(ErrorKind::InvalidArgument, "write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    fail(ErrorKind::InvalidArgument, "cannot rename onto '" + path + "': " + ec.message());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::MalformedFile, "cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace nlspec
