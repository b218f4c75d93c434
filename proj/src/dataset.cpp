#include "valuekit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "valuekit/rng.hpp"

namespace valuekit {

namespace {

constexpr double kRatioEps = 1e-9;
constexpr int kSplitCount = 3;

long long floor_share(double v) {
  return static_cast<long long>(std::floor(v + kRatioEps));
}

}  // namespace

void SplitRatios::validate() const {
  if (train <= 0.0 || valid <= 0.0 || test <= 0.0)
    throw InvalidInputError("split ratios must be positive");
  if (std::abs(train + valid + test - 1.0) > kRatioEps)
    throw InvalidInputError("split ratios must sum to 1");
}

DatasetSplit split_dataset(const std::vector<AnnotatedSample>& samples,
                           const SplitRatios& ratios, std::uint64_t seed) {
  ratios.validate();
  DatasetSplit out;
  out.seed = seed;
  if (samples.empty()) return out;

  const double r[kSplitCount] = {ratios.train, ratios.valid, ratios.test};
  const long long total = static_cast<long long>(samples.size());

  // Global targets: floored shares, with leftover units going to test,
  // then valid, then train, skipping splits whose share is integral. Every
  // target stays within one sample of its exact share.
  long long target[kSplitCount];
  double target_frac[kSplitCount];
  long long leftover_total = total;
  for (int s = 0; s < kSplitCount; ++s) {
    double exact = total * r[s];
    target[s] = floor_share(exact);
    target_frac[s] = std::max(0.0, exact - static_cast<double>(target[s]));
    leftover_total -= target[s];
  }
  for (int s = kSplitCount - 1; s >= 0 && leftover_total > 0; --s) {
    if (target_frac[s] > kRatioEps) {
      ++target[s];
      --leftover_total;
    }
  }
  for (int s = kSplitCount - 1; s >= 0 && leftover_total > 0; --s) {
    ++target[s];
    --leftover_total;
  }

  // Group sample indices into (dimension, label) cells; cell iteration order
  // is canonical so the whole procedure is deterministic.
  std::map<std::pair<int, int>, std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label < -1 || samples[i].label > 1)
      throw InvalidInputError("sample label outside {-1,0,1} for id \"" +
                              samples[i].scenario.id + "\"");
    cells[{static_cast<int>(samples[i].dimension), samples[i].label}].push_back(
        i);
  }

  std::mt19937_64 rng(seed);
  for (auto& [key, idx] : cells) deterministic_shuffle(idx, rng);

  // Per-cell allocation by largest remainder: every split stays within one
  // sample of its exact share of the cell.
  struct CellAlloc {
    long long lo[kSplitCount];
    long long hi[kSplitCount];
    long long a[kSplitCount];
  };
  std::vector<CellAlloc> allocs;
  allocs.reserve(cells.size());
  for (const auto& [key, idx] : cells) {
    const long long n = static_cast<long long>(idx.size());
    CellAlloc cell{};
    double frac[kSplitCount];
    long long assigned = 0;
    for (int s = 0; s < kSplitCount; ++s) {
      double exact = n * r[s];
      cell.lo[s] = floor_share(exact);
      frac[s] = std::max(0.0, exact - static_cast<double>(cell.lo[s]));
      cell.hi[s] = frac[s] <= kRatioEps ? cell.lo[s] : cell.lo[s] + 1;
      cell.a[s] = cell.lo[s];
      assigned += cell.lo[s];
    }
    long long leftover = n - assigned;
    int order[kSplitCount] = {0, 1, 2};
    std::sort(order, order + kSplitCount, [&](int x, int y) {
      if (frac[x] != frac[y]) return frac[x] > frac[y];
      return x < y;
    });
    for (int s = 0; s < kSplitCount && leftover > 0; ++s) {
      int split = order[s];
      if (cell.a[split] < cell.hi[split]) {
        ++cell.a[split];
        --leftover;
      }
    }
    // Degenerate rounding residue: widen the largest-remainder split.
    for (int s = 0; leftover > 0 && s < kSplitCount; ++s) {
      cell.a[order[s]] += leftover;
      cell.hi[order[s]] = std::max(cell.hi[order[s]], cell.a[order[s]]);
      leftover = 0;
    }
    allocs.push_back(cell);
  }

  // Reconcile cell allocations with the global targets. Moves only happen
  // between a split sitting at its ceiling and one at its floor, so the
  // per-cell one-sample bound is preserved.
  long long deficit[kSplitCount] = {0, 0, 0};
  for (int s = 0; s < kSplitCount; ++s) {
    long long got = 0;
    for (const auto& cell : allocs) got += cell.a[s];
    deficit[s] = target[s] - got;
  }
  auto find_cell = [&](int from, int to) -> CellAlloc* {
    for (auto& cell : allocs)
      if (cell.a[from] > cell.lo[from] && cell.a[to] < cell.hi[to])
        return &cell;
    return nullptr;
  };
  for (long long guard = 2 * total + 10; guard > 0; --guard) {
    int under = -1, over = -1;
    for (int s = 0; s < kSplitCount; ++s) {
      if (deficit[s] > 0) under = s;
      if (deficit[s] < 0) over = s;
    }
    if (under < 0 || over < 0) break;
    bool moved = false;
    if (CellAlloc* cell = find_cell(over, under)) {
      --cell->a[over];
      ++cell->a[under];
      moved = true;
    } else {
      // Route through the remaining split; with three splits an augmenting
      // path has at most two hops. Apply only when both hops exist.
      int via = 3 - under - over;
      if (CellAlloc* first = find_cell(over, via)) {
        --first->a[over];
        ++first->a[via];
        if (CellAlloc* second = find_cell(via, under)) {
          --second->a[via];
          ++second->a[under];
          moved = true;
        } else {
          ++first->a[over];
          --first->a[via];
        }
      }
    }
    if (!moved) break;  // targets unreachable; per-cell bounds still hold
    ++deficit[over];
    --deficit[under];
  }

  // Contiguous partition of each shuffled cell.
  std::size_t cell_index = 0;
  for (const auto& [key, idx] : cells) {
    const CellAlloc& cell = allocs[cell_index++];
    std::size_t pos = 0;
    for (long long i = 0; i < cell.a[0]; ++i) out.train.push_back(samples[idx[pos++]]);
    for (long long i = 0; i < cell.a[1]; ++i) out.valid.push_back(samples[idx[pos++]]);
    while (pos < idx.size()) out.test.push_back(samples[idx[pos++]]);
  }
  return out;
}

std::vector<AnnotatedSample> make_balanced(
    const std::vector<AnnotatedSample>& samples, std::uint64_t seed) {
  long long other_negative = 0, other_neutral = 0;
  std::vector<std::size_t> ben_negative, ben_neutral;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (s.dimension == ValueDimension::Benevolence) {
      if (s.label == -1) ben_negative.push_back(i);
      if (s.label == 0) ben_neutral.push_back(i);
    } else {
      if (s.label == -1) ++other_negative;
      if (s.label == 0) ++other_neutral;
    }
  }
  const long long target_negative = std::llround(other_negative / 9.0);
  const long long target_neutral = std::llround(other_neutral / 9.0);

  std::vector<bool> removed(samples.size(), false);
  std::mt19937_64 rng(seed);
  auto downsample = [&](std::vector<std::size_t>& indices, long long keep) {
    if (static_cast<long long>(indices.size()) <= keep) return;
    deterministic_shuffle(indices, rng);
    for (std::size_t i = static_cast<std::size_t>(keep); i < indices.size(); ++i)
      removed[indices[i]] = true;
  };
  downsample(ben_negative, target_negative);
  downsample(ben_neutral, target_neutral);

  std::vector<AnnotatedSample> out;
  out.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!removed[i]) out.push_back(samples[i]);
  return out;
}

// --- canonical TSV files ----------------------------------------------------

namespace {

constexpr std::string_view kSamplesHeader = "id\tscenario\tdimension\tlabel\tagreement";
constexpr std::string_view kAnnotationsHeader =
    "scenario_id\tscenario_text\tdimension\tworker_id\tvote";

std::string escape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\t': out += "\\t"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::string unescape_field(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '\\' || i + 1 == s.size()) {
      out.push_back(s[i]);
      continue;
    }
    switch (s[++i]) {
      case '\\': out.push_back('\\'); break;
      case 't': out.push_back('\t'); break;
      case 'n': out.push_back('\n'); break;
      case 'r': out.push_back('\r'); break;
      default: out.push_back(s[i]);
    }
  }
  return out;
}

std::vector<std::string> split_tabs(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == '\t') {
      fields.emplace_back(line.substr(start, i - start));
      start = i + 1;
    }
  }
  return fields;
}

[[noreturn]] void fail_at(const std::filesystem::path& path, int line_no,
                          const std::string& what) {
  throw DecodeError(path.string() + ":" + std::to_string(line_no) + ": " + what);
}

int parse_int_field(const std::filesystem::path& path, int line_no,
                    std::string_view name, const std::string& text) {
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_at(path, line_no, "field \"" + std::string(name) +
                               "\": not an integer: \"" + text + "\"");
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::vector<AnnotatedSample> load_samples(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open samples file: " + path.string());
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || strip_cr(line) != kSamplesHeader)
    fail_at(path, 1, "expected header \"" + std::string(kSamplesHeader) + "\"");
  ++line_no;
  std::vector<AnnotatedSample> samples;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      fail_at(path, line_no, "expected 5 tab-separated fields, got " +
                                 std::to_string(fields.size()));
    AnnotatedSample s;
    s.scenario.id = unescape_field(fields[0]);
    s.scenario.text = unescape_field(fields[1]);
    try {
      s.dimension = require_dimension(fields[2]);
    } catch (const InvalidInputError& e) {
      fail_at(path, line_no, std::string("field \"dimension\": ") + e.what());
    }
    s.label = parse_int_field(path, line_no, "label", fields[3]);
    if (s.label < -1 || s.label > 1)
      fail_at(path, line_no, "field \"label\": must be -1, 0 or 1");
    s.agreement = parse_int_field(path, line_no, "agreement", fields[4]);
    if (s.agreement < 0)
      fail_at(path, line_no, "field \"agreement\": must be >= 0");
    samples.push_back(std::move(s));
  }
  return samples;
}

void save_samples(const std::filesystem::path& path,
                  std::span<const AnnotatedSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open samples file for writing: " + path.string());
  out << kSamplesHeader << "\n";
  for (const auto& s : samples) {
    out << escape_field(s.scenario.id) << '\t' << escape_field(s.scenario.text)
        << '\t' << dimension_code(s.dimension) << '\t' << s.label << '\t'
        << s.agreement << "\n";
  }
}

RawAnnotations load_annotations(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open annotations file: " + path.string());
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line) || strip_cr(line) != kAnnotationsHeader)
    fail_at(path, 1,
            "expected header \"" + std::string(kAnnotationsHeader) + "\"");
  ++line_no;
  RawAnnotations raw;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    auto fields = split_tabs(line);
    if (fields.size() != 5)
      fail_at(path, line_no, "expected 5 tab-separated fields, got " +
                                 std::to_string(fields.size()));
    Annotation ann;
    ann.scenario_id = unescape_field(fields[0]);
    std::string text = unescape_field(fields[1]);
    try {
      ann.dimension = require_dimension(fields[2]);
      ann.worker_id = unescape_field(fields[3]);
      ann.vote = parse_vote(fields[4]);
    } catch (const InvalidInputError& e) {
      fail_at(path, line_no, e.what());
    }
    auto [it, inserted] = raw.scenario_texts.emplace(ann.scenario_id, text);
    if (!inserted && it->second != text)
      fail_at(path, line_no,
              "conflicting text for scenario \"" + ann.scenario_id + "\"");
    raw.votes.push_back(std::move(ann));
  }
  return raw;
}

void save_annotations(const std::filesystem::path& path,
                      const RawAnnotations& raw) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot open annotations file for writing: " + path.string());
  out << kAnnotationsHeader << "\n";
  for (const auto& ann : raw.votes) {
    auto it = raw.scenario_texts.find(ann.scenario_id);
    out << escape_field(ann.scenario_id) << '\t'
        << escape_field(it == raw.scenario_texts.end() ? "" : it->second)
        << '\t' << dimension_code(ann.dimension) << '\t'
        << escape_field(ann.worker_id) << '\t' << vote_name(ann.vote) << "\n";
  }
}

// --- CSV adapter -------------------------------------------------------------

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& content,
                                                char delimiter) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  for (std::size_t i = 0; i < content.size(); ++i) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"') {
      in_quotes = true;
      row_started = true;
    } else if (c == delimiter) {
      row.push_back(std::move(field));
      field.clear();
      row_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < content.size() && content[i + 1] == '\n') ++i;
      if (row_started || !field.empty()) {
        row.push_back(std::move(field));
        field.clear();
        rows.push_back(std::move(row));
        row.clear();
        row_started = false;
      }
    } else {
      field.push_back(c);
      row_started = true;
    }
  }
  if (row_started || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvMapping::Column column_from_json(const nlohmann::json& j,
                                    const std::string& name) {
  if (j.is_null()) return std::monostate{};
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) return j.get<std::string>();
  throw DecodeError("csv mapping: column \"" + name +
                    "\" must be an index, a header name, or null");
}

int resolve_column(const CsvMapping::Column& col,
                   const std::vector<std::string>& header,
                   const std::string& name, bool required) {
  if (std::holds_alternative<std::monostate>(col)) {
    if (required)
      throw InvalidInputError("csv mapping: column \"" + name +
                              "\" is required");
    return -1;
  }
  if (std::holds_alternative<int>(col)) return std::get<int>(col);
  const std::string& header_name = std::get<std::string>(col);
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == header_name) return static_cast<int>(i);
  throw InvalidInputError("csv mapping: no header column named \"" +
                          header_name + "\" for \"" + name + "\"");
}

}  // namespace

CsvMapping CsvMapping::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open csv mapping file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DecodeError(path.string() + ": " + e.what());
  }
  CsvMapping m;
  if (j.contains("delimiter")) {
    std::string d = j["delimiter"].get<std::string>();
    if (d.size() != 1)
      throw DecodeError(path.string() + ": delimiter must be one character");
    m.delimiter = d[0];
  }
  if (j.contains("has_header")) m.has_header = j["has_header"].get<bool>();
  const auto& cols = j.at("columns");
  if (cols.contains("id")) m.id = column_from_json(cols["id"], "id");
  if (cols.contains("scenario"))
    m.scenario = column_from_json(cols["scenario"], "scenario");
  if (cols.contains("dimension"))
    m.dimension = column_from_json(cols["dimension"], "dimension");
  if (cols.contains("label")) m.label = column_from_json(cols["label"], "label");
  if (cols.contains("agreement"))
    m.agreement = column_from_json(cols["agreement"], "agreement");
  if (j.contains("fixed_dimension"))
    m.fixed_dimension = require_dimension(j["fixed_dimension"].get<std::string>());
  if (j.contains("agreement_default"))
    m.agreement_default = j["agreement_default"].get<int>();
  if (j.contains("label_map"))
    for (const auto& [k, v] : j["label_map"].items())
      m.label_map[k] = v.get<int>();
  return m;
}

std::vector<AnnotatedSample> load_samples_csv(const std::filesystem::path& path,
                                              const CsvMapping& mapping) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open csv file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto rows = parse_csv(buf.str(), mapping.delimiter);
  if (rows.empty()) return {};

  std::vector<std::string> header;
  std::size_t first_row = 0;
  if (mapping.has_header) {
    header = rows[0];
    first_row = 1;
  }
  const int id_col = resolve_column(mapping.id, header, "id", false);
  const int scenario_col =
      resolve_column(mapping.scenario, header, "scenario", true);
  const bool needs_dimension = !mapping.fixed_dimension.has_value();
  const int dimension_col =
      resolve_column(mapping.dimension, header, "dimension", needs_dimension);
  const int label_col = resolve_column(mapping.label, header, "label", true);
  const int agreement_col =
      resolve_column(mapping.agreement, header, "agreement", false);

  auto field = [&](const std::vector<std::string>& row, int col,
                   std::size_t row_no, const char* name) -> const std::string& {
    if (col < 0 || static_cast<std::size_t>(col) >= row.size())
      fail_at(path, static_cast<int>(row_no + 1),
              std::string("missing field \"") + name + "\" (column " +
                  std::to_string(col) + ")");
    return row[static_cast<std::size_t>(col)];
  };

  std::vector<AnnotatedSample> samples;
  for (std::size_t r = first_row; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    AnnotatedSample s;
    s.scenario.id = id_col >= 0 ? field(row, id_col, r, "id")
                                : "row" + std::to_string(r - first_row + 1);
    s.scenario.text = field(row, scenario_col, r, "scenario");
    if (mapping.fixed_dimension) {
      s.dimension = *mapping.fixed_dimension;
    } else {
      try {
        s.dimension = require_dimension(field(row, dimension_col, r, "dimension"));
      } catch (const InvalidInputError& e) {
        fail_at(path, static_cast<int>(r + 1), e.what());
      }
    }
    const std::string& label_text = field(row, label_col, r, "label");
    auto mapped = mapping.label_map.find(label_text);
    if (mapped != mapping.label_map.end()) {
      s.label = mapped->second;
    } else {
      try {
        double v = std::stod(label_text);
        double rounded = std::round(v);
        if (std::abs(v - rounded) > 1e-9) throw std::invalid_argument("frac");
        s.label = static_cast<int>(rounded);
      } catch (const std::exception&) {
        fail_at(path, static_cast<int>(r + 1),
                "field \"label\": cannot interpret \"" + label_text + "\"");
      }
    }
    if (s.label < -1 || s.label > 1)
      fail_at(path, static_cast<int>(r + 1),
              "field \"label\": must map to -1, 0 or 1");
    s.agreement = agreement_col >= 0
                      ? parse_int_field(path, static_cast<int>(r + 1),
                                        "agreement",
                                        field(row, agreement_col, r, "agreement"))
                      : mapping.agreement_default;
    samples.push_back(std::move(s));
  }
  return samples;
}

}  // namespace valuekit
