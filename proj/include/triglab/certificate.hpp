#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace triglab {

/// One checked inequality: pass iff measured <= bound * (1 + slack).
struct CertClause {
  std::string name;
  double bound = 0.0;
  double measured = 0.0;
  bool pass = false;
  std::string note;  // how the value was obtained (grid, method, ...)
};

/// Machine-checkable record of a construction's contract.
struct Certificate {
  std::string subject;
  std::int64_t grid_size = 0;
  double slack = 1e-9;
  std::vector<CertClause> clauses;

  CertClause& add(const std::string& name, double bound, double measured,
                  const std::string& note = "");
  bool pass() const;
  const CertClause* find(const std::string& name) const;
  /// Largest measured/bound ratio over clauses with bound > 0.
  double worst_consumption() const;
  std::string to_text() const;
};

Certificate parse_certificate_text(const std::string& text);

}  // namespace triglab
