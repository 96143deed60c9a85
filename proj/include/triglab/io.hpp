#pragma once

#include <string>

#include "triglab/product_poly.hpp"
#include "triglab/sampled.hpp"
#include "triglab/trigpoly.hpp"

namespace triglab::io {

/// Coefficient files: one `n,re,im` row per frequency, lo to hi. Readers
/// reject duplicate or decreasing frequencies.
std::string coeffs_to_text(const TrigPoly& p);
TrigPoly coeffs_from_text(const std::string& text);

/// Sampled functions: header line `G,<size>`, then `j,re,im` rows.
std::string sampled_to_text(const SampledFunction& f);
SampledFunction sampled_from_text(const std::string& text);

/// Step functions: `start_angle,end_angle,re,im` rows.
std::string step_to_text(const StepFunction& s);
StepFunction step_from_text(const std::string& text);

/// Factored polynomials: header `factored v1`, then per term
/// `term,<re>,<im>,<nfactors>` followed by factor blocks
/// `factor,<dilation>,<ncoeffs>` and coefficient rows.
std::string factored_to_text(const ProductPoly& p);
ProductPoly factored_from_text(const std::string& text);

std::string format_double(double x);  // round-trip exact, deterministic

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace triglab::io
