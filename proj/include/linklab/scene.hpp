#pragma once
// Scene files: reproducible experiment descriptions for the batch front end.
//
// A scene is a single json document naming loops, mollifiers, a spectral
// model, a momentum grid, one experiment, and the tolerance checks the run
// must satisfy.  Reductions are fixed-order, so the same scene, refine level,
// and seed produce byte-identical reports and tables at any worker count.
//
// Schema sketch (full examples under scenes/):
//   {
//     "experiment": "link | commute | sweep-linking | sweep-mass |
//                    invariance | positivity | identities",
//     "loops":      { "g1": {"kind": "circle", ...}, ... },
//     "mollifiers": { "m":  {"kind": "gaussian", "width": 0.1}, ... },
//     "model":      { "components": [ {"c1": 0, "c2": 1,
//                       "mass": {"kind": "atom", "value": 0, "weight": 1}} ] },
//     "grid":       {"kind": "suggest", "min_width": 0.1,
//                    "extent": 6.2, "transverse": 3.2},
//     "params":     { experiment-specific settings and tolerances },
//     "output":     {"report": "report.txt", "table": "table.csv"}
//   }
//
// Loop kinds: circle {center, e1, e2, radius}, fourier {a0, cos, sin},
// polyline {vertices}, torus-first {lambda}, torus-second {lambda}.
// Mollifier kinds: gaussian {width}, bump {radius}.
// Mass kinds: atom {value, weight}, continuum {lo, hi, density, nodes}.
// Grid kinds: suggest {min_width, extent, transverse, scale} where the
// optional scale multiplies the suggested node counts, explicit
// {radial_nodes, radial_scale, polar_nodes, azimuthal_nodes}.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "linklab/commutator.hpp"
#include "linklab/linking.hpp"

namespace linklab {

struct RunOptions {
    int refine = 0;
    int workers = 1;
    std::uint64_t seed = 7;
    std::string experiment_override;  // empty keeps the scene's experiment
    std::uint64_t scene_hash = 0;     // echoed in the report header
    std::string scene_label;          // file name echoed in the header
};

struct SceneOutcome {
    // 0 all checks pass, 1 tolerance failure, 2 validation failure,
    // 3 numeric failure (unresolved grid or runtime precondition).
    int exit_code = 0;
    std::string report;
    std::string table;        // csv "parameter,value_re,value_im,error"; may be empty
    std::string report_path;  // from the scene's output block
    std::string table_path;   // empty when the scene requests no table
};

std::uint64_t fnv1a_hash(std::string_view bytes);

/// Parse scene text to json; std::invalid_argument carries the parse
/// diagnostic on malformed input.
nlohmann::json parse_scene_text(const std::string& text);

/// Schema-level validation: reference resolution, kinds, ranges.  Never
/// evaluates quadrature.  Empty result means the scene is runnable.
std::vector<std::string> validate_scene(const nlohmann::json& scene);

SceneOutcome run_scene(const nlohmann::json& scene, const RunOptions& opt);

}  // namespace linklab
