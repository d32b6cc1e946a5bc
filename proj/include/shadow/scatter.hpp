#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace shadow {

enum class Highlight { none, leader, outsider };

struct ScatterPoint {
    std::string label;
    double x = 0.0;
    double y = 0.0;
    Highlight highlight = Highlight::none;
};

struct ScatterSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ScatterPoint> points;
};

/// Round tick positions (1, 2 or 5 times a power of ten) covering [lo, hi].
std::vector<double> nice_ticks(double lo, double hi, int target_count = 6);

/// Self-contained SVG document. One <circle> per point; leaders and
/// outsiders carry the "leader" / "outsider" classes. Output depends only
/// on the spec. Throws DomainError on an empty spec or non-finite coordinate.
std::string render_scatter(const ScatterSpec& spec);

/// Throws IoError when `out` cannot be written.
void emit_scatter(const ScatterSpec& spec, const std::filesystem::path& out);

}  // namespace shadow
