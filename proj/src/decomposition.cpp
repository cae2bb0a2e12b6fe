#include "pid/decomposition.hpp"

namespace pid {

const char* measure_name(MeasureTag tag) {
    switch (tag) {
        case MeasureTag::OutputDeficiency: return "output_deficiency";
        case MeasureTag::InputDeficiency: return "input_deficiency";
        case MeasureTag::Broja: return "broja";
    }
    return "?";
}

namespace {
inline double clamp_tiny(double v) { return (v < 0.0 && v >= -1e-9) ? 0.0 : v; }
}  // namespace

Decomposition make_decomposition(double ui_y, double ui_z, double si, double ci, MeasureTag tag,
                                 bool converged, std::size_t iterations) {
    Decomposition d;
    d.raw_ui_y = ui_y;
    d.raw_ui_z = ui_z;
    d.raw_si = si;
    d.raw_ci = ci;
    d.ui_y = clamp_tiny(ui_y);
    d.ui_z = clamp_tiny(ui_z);
    d.si = clamp_tiny(si);
    d.ci = clamp_tiny(ci);
    d.measure_tag = tag;
    d.converged = converged;
    d.iterations = iterations;
    return d;
}

}  // namespace pid
