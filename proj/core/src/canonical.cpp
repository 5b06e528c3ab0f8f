#include "hevo/canonical.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "hevo/error.hpp"
#include "hevo/rational.hpp"

namespace hevo {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::invalid_config: return "invalid_config";
    case ErrorCode::worker_timeout: return "worker_timeout";
    case ErrorCode::agent_timeout: return "agent_timeout";
    case ErrorCode::protocol_error: return "protocol_error";
    case ErrorCode::trace_invalid: return "trace_invalid";
    case ErrorCode::report_invalid: return "report_invalid";
    case ErrorCode::harness_invalid: return "harness_invalid";
    case ErrorCode::blueprint_invalid: return "blueprint_invalid";
    case ErrorCode::unsupported_criterion: return "unsupported_criterion";
    case ErrorCode::resume_mismatch: return "resume_mismatch";
    case ErrorCode::empty_aggregate: return "empty_aggregate";
    case ErrorCode::train_test_overlap: return "train_test_overlap";
    case ErrorCode::io_error: return "io_error";
  }
  return "unknown";
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(std::string_view text) {
  if (text.empty()) throw Error(ErrorCode::invalid_argument, "empty number");
  std::size_t pos = 0;
  bool negative = false;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    pos = 1;
  }
  if (pos == text.size()) throw Error(ErrorCode::invalid_argument, "malformed number '" + std::string(text) + "'");
  std::int64_t value = 0;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (c < '0' || c > '9') throw Error(ErrorCode::invalid_argument, "malformed number '" + std::string(text) + "'");
    if (value > (INT64_MAX - (c - '0')) / 10) throw Error(ErrorCode::invalid_argument, "number out of range");
    value = value * 10 + (c - '0');
  }
  return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
    return Rational(parse_int(text.substr(0, slash)), den);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.empty() || frac.size() > 12) throw Error(ErrorCode::invalid_argument, "malformed decimal '" + std::string(text) + "'");
    if (frac[0] == '-' || frac[0] == '+') throw Error(ErrorCode::invalid_argument, "malformed decimal '" + std::string(text) + "'");
    bool negative = !whole.empty() && whole[0] == '-';
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::int64_t w = (whole.empty() || whole == "-" || whole == "+") ? 0 : parse_int(whole);
    std::int64_t f = parse_int(frac);
    Rational magnitude = Rational(w < 0 ? -w : w) + Rational(f, scale);
    return negative ? -magnitude : magnitude;
  }
  return Rational(parse_int(text));
}

__extension__ using Wide = __int128;

std::string to_fixed6(const Rational& r) {
  Wide num = r.numerator();
  Wide den = r.denominator();
  bool negative = num < 0;
  if (negative) num = -num;
  Wide scaled = (num * 1000000 * 2 + den) / (den * 2);
  auto whole = static_cast<std::int64_t>(scaled / 1000000);
  auto frac = static_cast<std::int64_t>(scaled % 1000000);
  std::string digits = std::to_string(frac);
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += std::to_string(whole) + "." + std::string(6 - digits.size(), '0') + digits;
  return out;
}

Json parse_json(std::string_view text, ErrorCode code, std::string_view context) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::exception& e) {
    throw Error(code, std::string(context) + ": " + e.what());
  }
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
    value >>= 4;
  }
  return out;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = splitmix64(seed);
  for (std::uint64_t step : path) state = splitmix64(state ^ splitmix64(step + 0x632be59bd9b4e019ULL));
  return state;
}

std::uint64_t uniform_index(std::uint64_t seed, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::invalid_argument, "uniform_index over an empty range");
  // mt19937_64 output is fixed by the standard; the rejection step is ours so the
  // draw does not depend on the library's distribution implementation.
  std::mt19937_64 engine(seed);
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  for (;;) {
    std::uint64_t x = engine();
    if (x < limit) return x % n;
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::io_error, "short write to " + path.string());
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.emplace_back(text.substr(start));
      break;
    }
    lines.emplace_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace hevo
