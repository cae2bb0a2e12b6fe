#pragma once

#include <cstddef>
#include <string>

namespace pid {

enum class MeasureTag { OutputDeficiency, InputDeficiency, Broja };

const char* measure_name(MeasureTag tag);

// The universal output record: the four decomposition components in bits.
// Reported values are clamped to zero when solver tolerance leaves them a
// hair negative; the raw values are kept alongside.
struct Decomposition {
    double ui_y = 0.0;  // UI(S;Y\Z)
    double ui_z = 0.0;  // UI(S;Z\Y)
    double si = 0.0;
    double ci = 0.0;
    MeasureTag measure_tag = MeasureTag::Broja;

    double raw_ui_y = 0.0;
    double raw_ui_z = 0.0;
    double raw_si = 0.0;
    double raw_ci = 0.0;

    bool converged = true;
    std::size_t iterations = 0;
};

// Clamps tiny negative solver noise on the reported fields.
Decomposition make_decomposition(double ui_y, double ui_z, double si, double ci, MeasureTag tag,
                                 bool converged, std::size_t iterations);

}  // namespace pid
