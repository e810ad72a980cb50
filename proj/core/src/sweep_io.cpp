#include "lipkin/sweep.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lipkin::sweep {

using nlohmann::json;

std::string tool_version() { return "lipkin 0.1.0"; }

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[40];
    // shortest representation that round-trips
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string RunManifest::to_json() const {
    json j;
    j["tool_version"] = tool_version;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                  static_cast<unsigned long long>(config_hash));
    j["config_hash"] = hash_hex;
    j["config"] = json::parse(config_json);
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["point_seeds"] = point_seeds;
    j["outputs"] = json::array();
    for (const auto& [file, h] : outputs) {
        char ohex[32];
        std::snprintf(ohex, sizeof ohex, "%016llx", static_cast<unsigned long long>(h));
        j["outputs"].push_back({{"file", file}, {"fnv1a64", ohex}});
    }
    j["failures"] = failures;
    return j.dump(2);
}

std::string points_to_csv(const std::vector<SweepPoint>& points) {
    std::string out = "epsilon,lambda,jz,jz2,jpm2,energy,degenerate,source,shots,seed\n";
    for (const auto& p : points) {
        if (p.failed) continue;
        out += format_double(p.epsilon) + "," + format_double(p.lambda) + "," +
               format_double(p.rdm.jz) + "," + format_double(p.rdm.jz2) + "," +
               format_double(p.rdm.jpm2) + "," + format_double(p.energy) + "," +
               (p.rdm.degenerate ? "1" : "0") + "," + lmg::to_string(p.rdm.source) + ",";
        if (p.rdm.shots) out += std::to_string(*p.rdm.shots);
        out += ",";
        if (p.rdm.seed) out += std::to_string(*p.rdm.seed);
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

std::vector<SweepPoint> points_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("points_from_csv: empty input");
    const auto header = split_csv_line(line);
    const std::vector<std::string> expect{"epsilon", "lambda", "jz",     "jz2",   "jpm2",
                                          "energy",  "degenerate", "source", "shots", "seed"};
    if (header != expect) throw IoError("points_from_csv: unexpected header");
    std::vector<SweepPoint> points;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 10) throw IoError("points_from_csv: bad row");
        SweepPoint p;
        p.epsilon = std::strtod(f[0].c_str(), nullptr);
        p.lambda = std::strtod(f[1].c_str(), nullptr);
        p.rdm.jz = std::strtod(f[2].c_str(), nullptr);
        p.rdm.jz2 = std::strtod(f[3].c_str(), nullptr);
        p.rdm.jpm2 = std::strtod(f[4].c_str(), nullptr);
        p.energy = std::strtod(f[5].c_str(), nullptr);
        p.rdm.degenerate = f[6] == "1";
        p.rdm.source = lmg::source_from_string(f[7]);
        if (!f[8].empty()) p.rdm.shots = std::strtoll(f[8].c_str(), nullptr, 10);
        if (!f[9].empty()) p.rdm.seed = std::strtoull(f[9].c_str(), nullptr, 10);
        p.rdm.params.epsilon = p.epsilon;
        p.rdm.params.lambda = p.lambda;  // sweep-level value; manifest records the scale
        points.push_back(std::move(p));
    }
    return points;
}

std::string errors_to_csv(const std::vector<SweepPoint>& points, int n_qubits) {
    std::string out = "epsilon,lambda,jz_err,jz2_err,jpm2_err";
    for (int q = 0; q < n_qubits; ++q) out += ",sigma_z" + std::to_string(q);
    out += "\n";
    for (const auto& p : points) {
        if (p.failed) continue;
        out += format_double(p.epsilon) + "," + format_double(p.lambda) + "," +
               format_double(p.jz_err) + "," + format_double(p.jz2_err) + "," +
               format_double(p.jpm2_err);
        for (int q = 0; q < n_qubits; ++q)
            out += "," + (q < static_cast<int>(p.sigma_z.size())
                              ? format_double(p.sigma_z[static_cast<std::size_t>(q)])
                              : std::string("0"));
        out += "\n";
    }
    return out;
}

void errors_from_csv(const std::string& text, std::vector<SweepPoint>& points) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("errors_from_csv: empty input");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= points.size()) throw IoError("errors_from_csv: more rows than points");
        const auto f = split_csv_line(line);
        if (f.size() < 5) throw IoError("errors_from_csv: bad row");
        points[row].jz_err = std::strtod(f[2].c_str(), nullptr);
        points[row].jz2_err = std::strtod(f[3].c_str(), nullptr);
        points[row].jpm2_err = std::strtod(f[4].c_str(), nullptr);
        points[row].sigma_z.clear();
        for (std::size_t k = 5; k < f.size(); ++k)
            points[row].sigma_z.push_back(std::strtod(f[k].c_str(), nullptr));
        ++row;
    }
}

std::string gradient_to_csv(const std::vector<GradientRow>& rows) {
    std::string out = "lambda,djz_dlambda,arc_speed,std_error\n";
    for (const auto& r : rows) {
        out += format_double(r.lambda) + "," + format_double(r.djz_dlambda) + "," +
               format_double(r.arc_speed) + "," + format_double(r.std_error) + "\n";
    }
    return out;
}

std::string gradient_to_svg(const std::vector<GradientRow>& rows, const std::string& title) {
    const double w = 720.0, h = 420.0, ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& r : rows) {
        xmin = std::min(xmin, r.lambda);
        xmax = std::max(xmax, r.lambda);
        ymin = std::min(ymin, r.djz_dlambda - r.std_error);
        ymax = std::max(ymax, r.djz_dlambda + r.std_error);
    }
    if (xmax <= xmin) xmax = xmin + 1.0;
    if (ymax <= ymin) ymax = ymin + 1.0;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto sy = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    // one-standard-deviation band
    std::ostringstream band;
    band << "M";
    for (const auto& r : rows) band << " " << sx(r.lambda) << " " << sy(r.djz_dlambda + r.std_error);
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        band << " L " << sx(it->lambda) << " " << sy(it->djz_dlambda - it->std_error);
    band << " Z";
    svg << "<path d=\"" << band.str() << "\" fill=\"#bbbbbb\" fill-opacity=\"0.6\" "
        << "stroke=\"none\"/>\n";

    std::ostringstream poly;
    for (const auto& r : rows) poly << sx(r.lambda) << "," << sy(r.djz_dlambda) << " ";
    svg << "<polyline points=\"" << poly.str()
        << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    // axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        const double y = ymin + (ymax - ymin) * i / 5.0;
        svg << "<text x=\"" << sx(x) << "\" y=\"" << h - mb + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(x * 1e6) / 1e6) << "</text>\n";
        svg << "<text x=\"" << ml - 6 << "\" y=\"" << sy(y) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << format_double(std::round(y * 1e6) / 1e6) << "</text>\n";
        svg << "<line x1=\"" << sx(x) << "\" y1=\"" << h - mb << "\" x2=\"" << sx(x) << "\" y2=\""
            << h - mb + 4 << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << ml - 4 << "\" y1=\"" << sy(y) << "\" x2=\"" << ml << "\" y2=\""
            << sy(y) << "\" stroke=\"black\"/>\n";
    }
    svg << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">lambda</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

namespace {

hull::Vec3 to_vec(const SweepPoint& p) { return {p.rdm.jz, p.rdm.jz2, p.rdm.jpm2}; }

// Degenerate mirror pairs in the data: (eps, lambda) vs (-eps, lambda)
// share (jz2, jpm2) and differ in jz (spin flip); (eps, lambda) vs
// (eps, -lambda) share (jz, jz2) and differ in jpm2 (parity).
std::vector<hull::Segment> mirror_pairs(const std::vector<SweepPoint>& pts, bool flip_epsilon) {
    std::map<std::pair<double, double>, int> index;
    for (std::size_t i = 0; i < pts.size(); ++i)
        index[{pts[i].epsilon, pts[i].lambda}] = static_cast<int>(i);
    std::vector<hull::Segment> segs;
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double me = flip_epsilon ? -pts[i].epsilon : pts[i].epsilon;
        const double ml = flip_epsilon ? pts[i].lambda : -pts[i].lambda;
        const auto it = index.find({me, ml});
        if (it == index.end() || it->second == static_cast<int>(i)) continue;
        const auto key = std::minmax(static_cast<int>(i), it->second);
        if (!seen.insert({key.first, key.second}).second) continue;
        segs.push_back({key.first, key.second});
    }
    return segs;
}

}  // namespace

HullAnalysis analyze_hull(const std::vector<SweepPoint>& points, const HullOptionsEx& opts,
                          const std::vector<SweepPoint>* inner) {
    std::vector<hull::Vec3> cloud;
    cloud.reserve(points.size());
    for (const auto& p : points) cloud.push_back(to_vec(p));

    HullAnalysis an;
    hull::HullOptions hopts;
    hopts.eps = opts.eps;
    hopts.merge_angle_tol = opts.angle_tol;
    an.hull = hull::quickhull3(cloud, hopts);

    const auto spin_pairs = mirror_pairs(points, true);
    const auto parity_pairs = mirror_pairs(points, false);
    an.ruled_jz = hull::detect_ruled_surfaces(an.hull, hull::Coord::Jz, opts.angle_tol,
                                              opts.min_ruling_lines, spin_pairs);
    an.ruled_jpm2 = hull::detect_ruled_surfaces(an.hull, hull::Coord::Jpm2, opts.angle_tol,
                                                opts.min_ruling_lines, parity_pairs);
    an.first_order_planes = hull::detect_first_order_plane(an.hull, hull::Coord::Jz2, opts.angle_tol);
    for (int f : an.first_order_planes) {
        int degenerate_vertices = 0;
        for (int v : an.hull.facets[static_cast<std::size_t>(f)].loop)
            if (points[static_cast<std::size_t>(v)].rdm.degenerate ||
                points[static_cast<std::size_t>(v)].label)
                ++degenerate_vertices;
        if (degenerate_vertices >= 4) an.degenerate_planes.push_back(f);
    }

    if (inner) {
        bool contained = true;
        for (const auto& p : *inner)
            if (!an.hull.contains(to_vec(p), opts.containment_tol)) contained = false;
        an.containment = contained;
        std::vector<hull::Vec3> inner_cloud;
        for (const auto& p : *inner) inner_cloud.push_back(to_vec(p));
        try {
            const auto inner_hull = hull::quickhull3(inner_cloud, hopts);
            an.volume_ratio = inner_hull.volume() / an.hull.volume();
        } catch (const hull::DegeneracyError&) {
            an.volume_ratio = 0.0;
        }
    }
    return an;
}

std::string hull_report_to_json(const HullAnalysis& an, const std::vector<SweepPoint>& points) {
    json j;
    j["n_points"] = points.size();
    j["n_hull_vertices"] = an.hull.vertex_ids.size();
    j["n_facets"] = an.hull.facets.size();
    j["volume"] = an.hull.volume();
    auto ruled = [&](const hull::RuledSurfaceReport& r) {
        json jr;
        jr["axis"] = r.axis == hull::Coord::Jz ? "jz" : (r.axis == hull::Coord::Jpm2 ? "jpm2" : "jz2");
        jr["interpretation"] = r.interpretation;
        jr["facet_ids"] = r.facet_ids;
        jr["n_segments"] = r.segments.size();
        jr["segments"] = json::array();
        for (const auto& s : r.segments) {
            const auto& a = an.hull.points[static_cast<std::size_t>(s.a)];
            const auto& b = an.hull.points[static_cast<std::size_t>(s.b)];
            jr["segments"].push_back({{"a", {a.x, a.y, a.z}}, {"b", {b.x, b.y, b.z}}});
        }
        return jr;
    };
    j["ruled_surfaces"] = json::array({ruled(an.ruled_jz), ruled(an.ruled_jpm2)});
    j["first_order_planes"] = json::array();
    for (int f : an.first_order_planes) {
        const auto& facet = an.hull.facets[static_cast<std::size_t>(f)];
        json jf;
        jf["facet_id"] = f;
        jf["n_vertices"] = facet.loop.size();
        int degenerate_vertices = 0;
        json verts = json::array();
        for (int v : facet.loop) {
            const auto& p = points[static_cast<std::size_t>(v)];
            const bool deg = p.rdm.degenerate || p.label.has_value();
            if (deg) ++degenerate_vertices;
            json jv = {{"jz", p.rdm.jz},
                       {"jz2", p.rdm.jz2},
                       {"jpm2", p.rdm.jpm2},
                       {"degenerate", deg}};
            if (p.label) jv["label"] = *p.label;
            verts.push_back(jv);
        }
        jf["n_degenerate_vertices"] = degenerate_vertices;
        jf["vertices"] = verts;
        j["first_order_planes"].push_back(jf);
    }
    j["n_first_order_planes"] = an.first_order_planes.size();
    j["n_degenerate_first_order_planes"] = an.degenerate_planes.size();
    if (an.containment) j["containment"] = *an.containment;
    if (an.volume_ratio) j["volume_ratio"] = *an.volume_ratio;
    return j.dump(2);
}

}  // namespace lipkin::sweep
