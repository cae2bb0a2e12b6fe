#pragma once

#include <string>

#include "pid/types.hpp"

namespace pid {

// Distribution file formats.
//
// JSON: {"s": [labels], "y": [labels], "z": [labels],
//        "atoms": [{"s": "...", "y": "...", "z": "...", "p": number}, ...]}
// Unlisted atoms have mass zero.
//
// TSV: header "s<TAB>y<TAB>z<TAB>p", one atom per line, '#' comments allowed.
//
// Both round-trip losslessly at 17 significant decimal digits.

JointDist load_joint(const std::string& path, double tolerance = kMassTol,
                     bool renormalize = false);

JointDist parse_joint_json(const std::string& text, double tolerance = kMassTol,
                           bool renormalize = false);
JointDist parse_joint_tsv(const std::string& text, double tolerance = kMassTol,
                          bool renormalize = false);

std::string to_json(const JointDist& j);
std::string to_tsv(const JointDist& j);

void save_joint(const JointDist& j, const std::string& path);

// FNV-1a 64-bit hash of a file's bytes, as "fnv1a64:<hex>"; used as the
// input digest in reports.
std::string file_digest(const std::string& path);

}  // namespace pid
