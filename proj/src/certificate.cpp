#include "triglab/certificate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "triglab/common.hpp"

namespace triglab {

CertClause& Certificate::add(const std::string& name, double bound,
                             double measured, const std::string& note) {
  CertClause c;
  c.name = name;
  c.bound = bound;
  c.measured = measured;
  c.pass = measured <= bound * (1.0 + slack) ||
           (bound == 0.0 && measured <= slack * 0.0);  // bound 0: exact only
  if (bound == 0.0) c.pass = (measured <= 0.0);
  c.note = note;
  clauses.push_back(c);
  return clauses.back();
}

bool Certificate::pass() const {
  for (const auto& c : clauses)
    if (!c.pass) return false;
  return true;
}

const CertClause* Certificate::find(const std::string& name) const {
  for (const auto& c : clauses)
    if (c.name == name) return &c;
  return nullptr;
}

double Certificate::worst_consumption() const {
  double w = 0.0;
  for (const auto& c : clauses)
    if (c.bound > 0.0) w = std::max(w, c.measured / c.bound);
  return w;
}

namespace {
std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace

std::string Certificate::to_text() const {
  std::ostringstream os;
  os << "certificate v1\n";
  os << "subject," << subject << "\n";
  os << "grid," << grid_size << "\n";
  os << "slack," << fmt(slack) << "\n";
  os << "clauses," << clauses.size() << "\n";
  for (const auto& c : clauses) {
    os << c.name << "," << fmt(c.bound) << "," << fmt(c.measured) << ","
       << (c.pass ? "pass" : "FAIL") << "," << c.note << "\n";
  }
  os << "verdict," << (pass() ? "pass" : "FAIL") << "\n";
  return os.str();
}

Certificate parse_certificate_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line != "certificate v1")
    fail(ErrorCode::BadFile, "not a certificate file");
  Certificate cert;
  auto field = [](const std::string& s, std::size_t from, std::size_t* next) {
    std::size_t p = s.find(',', from);
    if (p == std::string::npos) {
      *next = s.size();
      return s.substr(from);
    }
    *next = p + 1;
    return s.substr(from, p - from);
  };
  std::size_t nclauses = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::size_t next = 0;
    std::string key = field(line, 0, &next);
    if (key == "subject") {
      cert.subject = line.substr(next);
    } else if (key == "grid") {
      cert.grid_size = std::stoll(line.substr(next));
    } else if (key == "slack") {
      cert.slack = std::stod(line.substr(next));
    } else if (key == "clauses") {
      nclauses = static_cast<std::size_t>(std::stoull(line.substr(next)));
      for (std::size_t i = 0; i < nclauses && std::getline(is, line); ++i) {
        std::size_t q = 0;
        CertClause c;
        c.name = field(line, 0, &q);
        c.bound = std::stod(field(line, q, &q));
        c.measured = std::stod(field(line, q, &q));
        c.pass = field(line, q, &q) == "pass";
        c.note = (q <= line.size()) ? line.substr(q) : "";
        cert.clauses.push_back(c);
      }
    } else if (key == "verdict") {
      // recomputed by pass(); stored line kept for readability only
    }
  }
  return cert;
}

}  // namespace triglab
