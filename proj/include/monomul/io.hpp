#pragma once

#include <span>
#include <string>
#include <vector>

#include "monomul/measures.hpp"
#include "monomul/semigroup.hpp"
#include "monomul/series.hpp"

// JSON schemas for measures and generators, CSV emission for numeric
// results. All floating-point output is printed with 17 significant digits
// so that identical runs produce byte-identical files.

namespace monomul::io {

// {"domain": "half_line"|"circle", "atoms": [{"position": .., "weight": ..}]}
// or {"domain": "circle", "haar": true}.
AtomicMeasure measure_from_json_text(const std::string& text);
std::string measure_to_json_text(const AtomicMeasure& mu);

// {"domain": "half_line", "a": .., "nu": [{"position": .., "weight": ..}]}
// {"domain": "circle", "beta": .., "rho": [{"angle": .., "weight": ..}]}
// {"domain": "circle", "builtin": "z^n-1", "n": ..}
Generator generator_from_json_text(const std::string& text);
std::string generator_to_json_text(const Generator& g);

AtomicMeasure load_measure(const std::string& path);
Generator load_generator(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// "n,re,im" rows for m_1..m_N.
std::string csv_moments(const MomentSequence& m);
// "n,re,im" rows for c_0..c_N.
std::string csv_series(const TruncatedSeries& s);
// "<xlabel>,density" rows.
std::string csv_density(std::span<const double> grid, std::span<const double> density,
                        const std::string& xlabel);
// "n,oracle_re,oracle_im,predicted_re,predicted_im,abs_error" rows.
std::string csv_oracle_comparison(std::span<const cplx> oracle,
                                  std::span<const cplx> predicted);
// "tau,n,re,im" rows: the moment sequence at every flow checkpoint.
std::string csv_flow(std::span<const SemigroupPoint> points);
// "level,n,re,im" rows: one moment sequence per divisibility level.
std::string csv_levels(std::span<const MomentSequence> levels);

} // namespace monomul::io
