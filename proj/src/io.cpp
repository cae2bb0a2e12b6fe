#include "pid/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pid {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return c == '{';
    }
    return false;
}

std::vector<std::string> labels_from_json(const nlohmann::json& arr, const char* key) {
    if (!arr.is_array() || arr.empty())
        throw ParseError(std::string("field '") + key + "' must be a nonempty array");
    std::vector<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw ParseError(std::string("labels in '") + key + "' must be strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

JointDist parse_joint_json(const std::string& text, double tolerance, bool renormalize) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(e.what());
    }
    if (!doc.is_object()) throw ParseError("top level must be an object");
    for (const char* key : {"s", "y", "z", "atoms"})
        if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");

    Alphabet as(labels_from_json(doc["s"], "s"));
    Alphabet ay(labels_from_json(doc["y"], "y"));
    Alphabet az(labels_from_json(doc["z"], "z"));

    std::vector<double> table(as.size() * ay.size() * az.size(), 0.0);
    std::vector<bool> seen(table.size(), false);
    if (!doc["atoms"].is_array()) throw ParseError("'atoms' must be an array");
    for (const auto& atom : doc["atoms"]) {
        if (!atom.is_object() || !atom.contains("s") || !atom.contains("y") ||
            !atom.contains("z") || !atom.contains("p"))
            throw ParseError("each atom needs fields s, y, z, p");
        std::size_t i = as.index_of(atom["s"].get<std::string>());
        std::size_t j = ay.index_of(atom["y"].get<std::string>());
        std::size_t k = az.index_of(atom["z"].get<std::string>());
        if (!atom["p"].is_number()) throw ParseError("atom mass 'p' must be a number");
        std::size_t idx = (i * ay.size() + j) * az.size() + k;
        if (seen[idx])
            throw ParseError("duplicate atom (" + atom["s"].get<std::string>() + "," +
                             atom["y"].get<std::string>() + "," + atom["z"].get<std::string>() + ")");
        seen[idx] = true;
        table[idx] = atom["p"].get<double>();
    }
    return validate_joint(as, ay, az, std::move(table), tolerance, renormalize);
}

JointDist parse_joint_tsv(const std::string& text, double tolerance, bool renormalize) {
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    struct Atom {
        std::string s, y, z;
        double p;
    };
    std::vector<Atom> atoms;
    std::vector<std::string> ls, ly, lz;
    auto add_label = [](std::vector<std::string>& v, const std::string& x) {
        for (const auto& e : v)
            if (e == x) return;
        v.push_back(x);
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        bool blank = line.find_first_not_of(" \t") == std::string::npos;
        if (blank) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            std::size_t tab = line.find('\t', start);
            cells.push_back(line.substr(start, tab == std::string::npos ? tab : tab - start));
            if (tab == std::string::npos) break;
            start = tab + 1;
        }
        if (cells.size() != 4) throw ParseError("expected 4 tab-separated columns: " + line);
        if (!header_seen) {
            if (cells[0] != "s" || cells[1] != "y" || cells[2] != "z" || cells[3] != "p")
                throw ParseError("header must be s<TAB>y<TAB>z<TAB>p");
            header_seen = true;
            continue;
        }
        double p;
        auto res = std::from_chars(cells[3].data(), cells[3].data() + cells[3].size(), p);
        if (res.ec != std::errc() || res.ptr != cells[3].data() + cells[3].size())
            throw ParseError("bad probability value '" + cells[3] + "'");
        add_label(ls, cells[0]);
        add_label(ly, cells[1]);
        add_label(lz, cells[2]);
        atoms.push_back({cells[0], cells[1], cells[2], p});
    }
    if (!header_seen) throw ParseError("missing TSV header");
    if (atoms.empty()) throw ParseError("no atoms");
    Alphabet as(ls), ay(ly), az(lz);
    std::vector<double> table(as.size() * ay.size() * az.size(), 0.0);
    std::vector<bool> seen(table.size(), false);
    for (const auto& a : atoms) {
        std::size_t idx =
            (as.index_of(a.s) * ay.size() + ay.index_of(a.y)) * az.size() + az.index_of(a.z);
        if (seen[idx]) throw ParseError("duplicate atom (" + a.s + "," + a.y + "," + a.z + ")");
        seen[idx] = true;
        table[idx] = a.p;
    }
    return validate_joint(as, ay, az, std::move(table), tolerance, renormalize);
}

JointDist load_joint(const std::string& path, double tolerance, bool renormalize) {
    std::string text = read_file(path);
    if (looks_like_json(text)) return parse_joint_json(text, tolerance, renormalize);
    return parse_joint_tsv(text, tolerance, renormalize);
}

std::string to_json(const JointDist& j) {
    nlohmann::json doc;
    doc["s"] = j.s_alphabet().symbols();
    doc["y"] = j.y_alphabet().symbols();
    doc["z"] = j.z_alphabet().symbols();
    nlohmann::json atoms = nlohmann::json::array();
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                double p = j.at(s, y, z);
                if (p == 0.0) continue;
                nlohmann::json atom;
                atom["s"] = j.s_alphabet().symbol(s);
                atom["y"] = j.y_alphabet().symbol(y);
                atom["z"] = j.z_alphabet().symbol(z);
                atom["p"] = p;
                atoms.push_back(atom);
            }
    doc["atoms"] = atoms;
    return doc.dump(2);
}

std::string to_tsv(const JointDist& j) {
    std::ostringstream out;
    out << "s\ty\tz\tp\n";
    for (std::size_t s = 0; s < j.ns(); ++s)
        for (std::size_t y = 0; y < j.ny(); ++y)
            for (std::size_t z = 0; z < j.nz(); ++z) {
                double p = j.at(s, y, z);
                if (p == 0.0) continue;
                for (const std::string& label :
                     {j.s_alphabet().symbol(s), j.y_alphabet().symbol(y), j.z_alphabet().symbol(z)})
                    if (label.find('\t') != std::string::npos ||
                        label.find('\n') != std::string::npos)
                        throw ParseError("label '" + label + "' cannot be written as TSV");
                out << j.s_alphabet().symbol(s) << '\t' << j.y_alphabet().symbol(y) << '\t'
                    << j.z_alphabet().symbol(z) << '\t' << format_double(p) << '\n';
            }
    return out.str();
}

void save_joint(const JointDist& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FileNotFound(path);
    bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
    out << (json ? to_json(j) : to_tsv(j));
}

std::string file_digest(const std::string& path) {
    std::string bytes = read_file(path);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace pid
