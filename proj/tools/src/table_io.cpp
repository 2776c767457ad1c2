#include <cctype>
#include <fstream>
#include <sstream>

#include "cli_internal.hpp"
#include "skm/dataio.hpp"
#include "skm/errors.hpp"

namespace skm::cli {
namespace {

bool looks_like_header(const std::string& text) {
  std::size_t i = 0;
  if (text.starts_with("\xEF\xBB\xBF")) i = 3;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i == text.size()) return false;
  const char c = text[i];
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '"';
}

}  // namespace

KernelArg KernelArg::parse(const std::string& text) {
  KernelArg arg;
  std::string resolved = text;
  for (const auto& [word, rule] : {std::pair{std::string("=iqr"), Rule::iqr},
                                   std::pair{std::string("=jaakkola"), Rule::jaakkola}}) {
    const auto pos = resolved.find(word);
    if (pos == std::string::npos) continue;
    const auto end = pos + word.size();
    if (end != resolved.size() && resolved[end] != ':' && resolved[end] != ',') continue;
    if (arg.rule != Rule::fixed) throw UsageError("kernel '" + text + "': more than one data-driven scale");
    arg.rule = rule;
    resolved.replace(pos, word.size(), "=1");
  }
  try {
    arg.spec = KernelSpec::parse(resolved);
  } catch (const std::invalid_argument& e) {
    throw UsageError("kernel '" + text + "': " + e.what());
  }
  return arg;
}

KernelSpec KernelArg::resolve(const DataSet& data) const {
  if (rule == Rule::fixed) return spec;
  const double h = rule == Rule::iqr ? bandwidth_iqr(data) : bandwidth_jaakkola(data);
  if (!(h > 0.0)) throw DataError("data-driven bandwidth is zero; the data are degenerate");
  // The student scale enters as |x - x'|^2 / beta, so it takes a squared length.
  return spec.with_bandwidth(spec.family == KernelFamily::student ? h * h : h);
}

DataSet read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  return parse_csv(text, looks_like_header(text), path.stem().string());
}

void write_output(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::string columns_csv(const std::vector<Column>& columns) {
  std::string out;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    if (j) out += ',';
    out += columns[j].name;
  }
  out += '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (j) out += ',';
      out += format_double(columns[j].values.at(i));
    }
    out += '\n';
  }
  return out;
}

std::vector<std::string> coordinate_header(std::size_t d) {
  std::vector<std::string> h;
  for (std::size_t j = 0; j < d; ++j) h.push_back("x" + std::to_string(j));
  return h;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace skm::cli
