#include "hypent/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace hypent::io {

namespace {

std::ifstream open(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open " + path, 0);
    return f;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

bool parse_number(const std::string& field, double& out) {
    const std::string t = trim(field);
    if (t.empty()) return false;
    const char* end = t.data() + t.size();
    auto [p, ec] = std::from_chars(t.data(), end, out);
    return ec == std::errc() && p == end && std::isfinite(out);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, sep)) out.push_back(f);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

// Calls row(fields, line_no) for each data row of a CSV stream.
template <class F>
void for_rows(std::istream& in, F&& row) {
    std::string line;
    std::size_t no = 0;
    bool first_data = true;
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto fields = split(t, ',');
        if (first_data) {
            first_data = false;
            double probe;
            if (!parse_number(fields[0], probe)) continue;  // header
        }
        row(fields, no);
    }
}

double field(const std::vector<std::string>& f, std::size_t i, std::size_t line) {
    double v;
    if (i >= f.size() || !parse_number(f[i], v)) throw ParseError("expected a number in column " + std::to_string(i + 1), line);
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

PointCloud read_cloud_csv(std::istream& in) {
    PointCloud c;
    c.n = 0;
    for_rows(in, [&](const std::vector<std::string>& f, std::size_t line) {
        if (c.n == 0) {
            if (f.size() > 2) throw ParseError("expected 1 or 2 columns", line);
            c.n = static_cast<int>(f.size());
        }
        if (static_cast<int>(f.size()) != c.n) throw ParseError("expected " + std::to_string(c.n) + " columns", line);
        c.points.push_back({field(f, 0, line), c.n == 2 ? field(f, 1, line) : 0.0});
    });
    if (c.points.empty()) throw ParseError("no points", 0);
    c.generator = "csv";
    return c;
}

PointCloud read_cloud_csv(const std::string& path) {
    auto f = open(path);
    return read_cloud_csv(f);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
    out << (cloud.n == 2 ? "x,y\n" : "x\n");
    for (const auto& p : cloud.points) {
        out << format_double(p[0]);
        if (cloud.n == 2) out << ',' << format_double(p[1]);
        out << '\n';
    }
}

UDSet read_uds_csv(std::istream& in, int n) {
    if (n != 1 && n != 2) throw DomainError("dimension must be 1 or 2");
    UDSet u;
    u.n = n;
    const std::size_t cols = static_cast<std::size_t>(n) + 1;
    for_rows(in, [&](const std::vector<std::string>& f, std::size_t line) {
        if (f.size() != cols) throw ParseError("expected " + std::to_string(cols) + " columns", line);
        const double x = field(f, 0, line);
        const double y = n == 2 ? field(f, 1, line) : 0.0;
        const double t = field(f, cols - 1, line);
        if (!(t > 0)) throw ParseError("height must be positive", line);
        u.points.emplace_back(Complex(x, y), t);
    });
    if (u.points.empty()) throw ParseError("no points", 0);
    return u;
}

UDSet read_uds_csv(const std::string& path, int n) {
    auto f = open(path);
    return read_uds_csv(f, n);
}

void write_uds_csv(std::ostream& out, const UDSet& uds) {
    out << (uds.n == 2 ? "x,y,t\n" : "x,t\n");
    auto row = [&](const HalfSpacePoint& p) {
        out << format_double(p.base.real()) << ',';
        if (uds.n == 2) out << format_double(p.base.imag()) << ',';
        out << format_double(p.height) << '\n';
    };
    row(uds.origin());
    for (std::size_t i = 0; i < uds.points.size(); ++i)
        if (i != uds.origin_index) row(uds.points[i]);
}

void write_measure_csv(std::ostream& out, const UDSet& uds, const AtomicMeasure& m) {
    out << (uds.n == 2 ? "x,y,t,weight\n" : "x,t,weight\n");
    for (std::size_t i = 0; i < uds.points.size(); ++i) {
        const auto& p = uds.points[i];
        out << format_double(p.base.real()) << ',';
        if (uds.n == 2) out << format_double(p.base.imag()) << ',';
        out << format_double(p.height) << ',' << format_double(m.weights[i]) << '\n';
    }
}

void write_orbit_csv(std::ostream& out, const std::vector<OrbitRecord>& records) {
    out << "word,x,y,t,distance\n";
    for (const auto& r : records)
        out << word_to_string(r.word) << ',' << format_double(r.image.base.real()) << ','
            << format_double(r.image.base.imag()) << ',' << format_double(r.image.height) << ','
            << format_double(r.distance) << '\n';
}

SchottkySpec read_group_json(std::istream& in) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    auto complex_of = [](const nlohmann::json& v, const std::string& key) {
        if (v.is_number()) return Complex(v.get<double>(), 0);
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
            return Complex(v[0].get<double>(), v[1].get<double>());
        throw InvalidSpecError("field '" + key + "' must be a number or [re, im]");
    };
    try {
        SchottkySpec s;
        s.n = j.at("n").get<int>();
        for (const auto& p : j.at("pairs")) {
            DiskPair d;
            d.center = complex_of(p.at("center"), "center");
            d.radius = p.at("radius").get<double>();
            d.center2 = complex_of(p.at("center2"), "center2");
            d.radius2 = p.at("radius2").get<double>();
            s.pairs.push_back(d);
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidSpecError(std::string("malformed group spec: ") + e.what());
    }
}

SchottkySpec read_group_json(const std::string& path) {
    auto f = open(path);
    return read_group_json(f);
}

PantsGraph read_graph(std::istream& in, double ell, int max_valency) {
    std::vector<std::pair<PantsGraph::Vertex, PantsGraph::Vertex>> edges;
    std::vector<PantsGraph::Vertex> funnels;
    PantsGraph::Vertex top = 0;
    std::string line;
    std::size_t no = 0;
    auto vertex = [&](const std::string& tok) {
        PantsGraph::Vertex v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size()) throw ParseError("bad vertex id '" + tok + "'", no);
        if (v > 100'000'000) throw ParseError("vertex id too large", no);
        top = std::max(top, v);
        return v;
    };
    while (std::getline(in, line)) {
        ++no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::vector<std::string> tok;
        for (std::string w; ss >> w;) tok.push_back(w);
        if (tok.size() == 2 && tok[0] == "funnel")
            funnels.push_back(vertex(tok[1]));
        else if (tok.size() == 2)
            edges.emplace_back(vertex(tok[0]), vertex(tok[1]));
        else
            throw ParseError("expected 'u v' or 'funnel u'", no);
    }
    if (edges.empty() && funnels.empty()) throw ParseError("empty graph", no);
    return PantsGraph::from_edges(static_cast<std::size_t>(top) + 1, edges, funnels, ell, max_valency);
}

PantsGraph read_graph(const std::string& path, double ell, int max_valency) {
    auto f = open(path);
    return read_graph(f, ell, max_valency);
}

}  // namespace hypent::io
