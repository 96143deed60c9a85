#include "triglab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace triglab::io {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t p = 0;
  while (true) {
    std::size_t q = line.find(sep, p);
    if (q == std::string::npos) {
      out.push_back(line.substr(p));
      break;
    }
    out.push_back(line.substr(p, q - p));
    p = q + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) fail(ErrorCode::BadFile, "trailing junk in number: " + s);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(ErrorCode::BadFile, "bad number: " + s);
  }
}

std::int64_t parse_int(const std::string& s) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) fail(ErrorCode::BadFile, "trailing junk in integer: " + s);
    return v;
  } catch (const Error&) {
    throw;
  } catch (...) {
    fail(ErrorCode::BadFile, "bad integer: " + s);
  }
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string coeffs_to_text(const TrigPoly& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.term_count(); ++i) {
    os << p.freqs()[i] << "," << format_double(p.coeffs()[i].real()) << ","
       << format_double(p.coeffs()[i].imag()) << "\n";
  }
  return os.str();
}

TrigPoly coeffs_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::pair<std::int64_t, cplx>> terms;
  std::int64_t prev = 0;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, ',');
    if (f.size() != 3) fail(ErrorCode::BadFile, "coefficient rows are n,re,im");
    std::int64_t n = parse_int(f[0]);
    if (!first && n <= prev)
      fail(ErrorCode::BadFile, "frequencies must be strictly increasing (duplicate or out of order at " +
                                   std::to_string(n) + ")");
    first = false;
    prev = n;
    terms.emplace_back(n, cplx{parse_double(f[1]), parse_double(f[2])});
  }
  return TrigPoly::from_terms(std::move(terms));
}

std::string sampled_to_text(const SampledFunction& f) {
  std::ostringstream os;
  os << "G," << f.G << "\n";
  for (std::size_t j = 0; j < f.size(); ++j)
    os << j << "," << format_double(f.v[j].real()) << ","
       << format_double(f.v[j].imag()) << "\n";
  return os.str();
}

SampledFunction sampled_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) fail(ErrorCode::BadFile, "empty sampled-function file");
  auto head = split(line, ',');
  if (head.size() != 2 || head[0] != "G")
    fail(ErrorCode::BadFile, "sampled-function files start with G,<size>");
  SampledFunction f(parse_int(head[1]), {0.0, 0.0});
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto fs = split(line, ',');
    if (fs.size() != 3) fail(ErrorCode::BadFile, "sample rows are j,re,im");
    std::int64_t j = parse_int(fs[0]);
    if (j < 0 || j >= f.G) fail(ErrorCode::BadFile, "sample index out of range");
    f.v[static_cast<std::size_t>(j)] = {parse_double(fs[1]), parse_double(fs[2])};
  }
  return f;
}

std::string step_to_text(const StepFunction& s) {
  std::ostringstream os;
  for (std::size_t i = 0; i < s.arc_count(); ++i) {
    double a = s.breaks[i];
    double b = (i + 1 < s.arc_count()) ? s.breaks[i + 1] : s.breaks[0] + kTwoPi;
    os << format_double(a) << "," << format_double(b) << ","
       << format_double(s.vals[i].real()) << "," << format_double(s.vals[i].imag())
       << "\n";
  }
  return os.str();
}

StepFunction step_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  StepFunction s;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, ',');
    if (f.size() != 4) fail(ErrorCode::BadFile, "step rows are start,end,re,im");
    double a = parse_double(f[0]);
    if (!s.breaks.empty() && a <= s.breaks.back())
      fail(ErrorCode::BadFile, "step arcs must have increasing starts");
    s.breaks.push_back(a);
    s.vals.push_back({parse_double(f[2]), parse_double(f[3])});
  }
  if (s.breaks.empty()) return StepFunction::constant({0.0, 0.0});
  return s;
}

std::string factored_to_text(const ProductPoly& p) {
  std::ostringstream os;
  os << "factored v1\n";
  os << "terms," << p.terms().size() << "\n";
  for (const auto& t : p.terms()) {
    os << "term," << format_double(t.scale.real()) << ","
       << format_double(t.scale.imag()) << "," << t.factors.size() << "\n";
    for (const auto& f : t.factors) {
      os << "factor," << f.dilation << "," << f.poly.term_count() << "\n";
      os << coeffs_to_text(f.poly);
    }
  }
  return os.str();
}

ProductPoly factored_from_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "factored v1")
    fail(ErrorCode::BadFile, "not a factored-polynomial file");
  if (!std::getline(is, line)) fail(ErrorCode::BadFile, "missing terms line");
  auto head = split(line, ',');
  if (head.size() != 2 || head[0] != "terms") fail(ErrorCode::BadFile, "missing terms line");
  std::int64_t nterms = parse_int(head[1]);
  ProductPoly p;
  for (std::int64_t t = 0; t < nterms; ++t) {
    if (!std::getline(is, line)) fail(ErrorCode::BadFile, "missing term line");
    auto tf = split(line, ',');
    if (tf.size() != 4 || tf[0] != "term") fail(ErrorCode::BadFile, "bad term line");
    ProductTerm term;
    term.scale = {parse_double(tf[1]), parse_double(tf[2])};
    std::int64_t nf = parse_int(tf[3]);
    for (std::int64_t k = 0; k < nf; ++k) {
      if (!std::getline(is, line)) fail(ErrorCode::BadFile, "missing factor line");
      auto ff = split(line, ',');
      if (ff.size() != 3 || ff[0] != "factor") fail(ErrorCode::BadFile, "bad factor line");
      DilatedFactor fac;
      fac.dilation = parse_int(ff[1]);
      std::int64_t nc = parse_int(ff[2]);
      std::string block;
      for (std::int64_t i = 0; i < nc; ++i) {
        if (!std::getline(is, line)) fail(ErrorCode::BadFile, "truncated factor block");
        block += line + "\n";
      }
      fac.poly = coeffs_from_text(block);
      term.factors.push_back(std::move(fac));
    }
    p.add_term(std::move(term));
  }
  return p;
}

void write_file(const std::string& path, const std::string& content) {
  // atomic per job: write to a temp name, then rename
  std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorCode::BadFile, "cannot open " + tmp);
    os << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    fail(ErrorCode::BadFile, "cannot rename into " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::BadFile, "cannot open " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

}  // namespace triglab::io
