// Command-line front end: validation, Upsilon evaluation, profile export,
// complex dumps, and the verification checks. All outputs are byte-stable
// for fixed inputs and flags; exit codes are 0 ok, 1 invalid input,
// 2 inadmissible parameter, 3 internal invariant violation.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gridups/complex.hpp"
#include "gridups/diagram.hpp"
#include "gridups/homology.hpp"
#include "gridups/upsilon.hpp"
#include "gridups/verify.hpp"

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gridups::invalid_input_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gridups::invalid_input_error("cannot write " + path);
    out << text;
}

gridups::GridDiagram load_diagram(const std::string& path) {
    gridups::GridDiagram g = gridups::parse_diagram(read_file(path));
    gridups::validate(g);
    return g;
}

int vertex_count(const gridups::GridDiagram& g) {
    int v = 0;
    for (int r = 0; r < g.n; ++r)
        for (int c = 0; c < g.n; ++c)
            if (g.has_ostar(r, c)) ++v;
    return v;
}

int cmd_validate(const std::string& path) {
    gridups::GridDiagram g = load_diagram(path);
    std::string why;
    if (!gridups::is_balanced(g, &why))
        throw gridups::invalid_input_error("diagram not balanced: " + why);
    std::string l = gridups::is_link_shaped(g) ? std::to_string(gridups::link_components(g)) : "n/a";
    std::cout << "valid: n=" << g.n << " mode=" << gridups::mode_name(g.mode)
              << " V=" << vertex_count(g) << " l=" << l << "\n";
    return 0;
}

std::string profile_csv(const gridups::UpsilonProfile& prof) {
    std::ostringstream os;
    os << "t,value\n";
    for (const auto& [t, v] : prof.samples) os << t.str() << "," << v.str() << "\n";
    return os.str();
}

std::string profile_json(const gridups::UpsilonProfile& prof) {
    ordered_json j;
    j["q"] = prof.q;
    j["samples"] = ordered_json::array();
    for (const auto& [t, v] : prof.samples)
        j["samples"].push_back(ordered_json{{"t", t.str()}, {"value", v.str()}});
    j["breakpoints"] = ordered_json::array();
    for (const gridups::Rational& b : prof.breakpoints()) j["breakpoints"].push_back(b.str());
    return j.dump(2) + "\n";
}

// Static SVG of the piecewise-linear profile: samples joined by segments,
// slope-change samples circled.
std::string profile_svg(const gridups::UpsilonProfile& prof) {
    const double W = 720, H = 420, L = 70, R = 20, T = 20, B = 50;
    double ymin = 0, ymax = 0;
    for (const auto& [t, v] : prof.samples) {
        double y = static_cast<double>(v.num) / static_cast<double>(v.den);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    double pad = std::max((ymax - ymin) / 10.0, 0.1);
    ymin -= pad;
    ymax += pad;
    auto px = [&](const gridups::Rational& t) {
        double x = static_cast<double>(t.num) / static_cast<double>(t.den);
        return L + x * (W - L - R);
    };
    auto py = [&](const gridups::Rational& v) {
        double y = static_cast<double>(v.num) / static_cast<double>(v.den);
        return T + (ymax - y) / (ymax - ymin) * (H - T - B);
    };
    auto num = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", x);
        return std::string(buf);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << " " << H
       << "\" font-family=\"monospace\" font-size=\"12\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    if (ymin < 0 && 0 < ymax)
        os << "<line x1=\"" << num(L) << "\" y1=\"" << num(py(gridups::Rational(0))) << "\" x2=\""
           << num(W - R) << "\" y2=\"" << num(py(gridups::Rational(0)))
           << "\" stroke=\"#bbbbbb\"/>\n";
    os << "<line x1=\"" << num(L) << "\" y1=\"" << num(T) << "\" x2=\"" << num(L) << "\" y2=\""
       << num(H - B) << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << num(L) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(W - R)
       << "\" y2=\"" << num(H - B) << "\" stroke=\"black\"/>\n";
    for (const auto& [t, v] : prof.samples) {
        os << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(H - B) << "\" x2=\"" << num(px(t))
           << "\" y2=\"" << num(H - B + 5) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << num(px(t)) << "\" y=\"" << num(H - B + 20)
           << "\" text-anchor=\"middle\">" << t.str() << "</text>\n";
    }
    for (const auto& [t, v] : prof.samples)
        os << "<text x=\"" << num(L - 8) << "\" y=\"" << num(py(v) + 4)
           << "\" text-anchor=\"end\">" << v.str() << "</text>\n";
    os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"2\" points=\"";
    for (size_t i = 0; i < prof.samples.size(); ++i)
        os << (i ? " " : "") << num(px(prof.samples[i].first)) << ","
           << num(py(prof.samples[i].second));
    os << "\"/>\n";
    for (const gridups::Rational& b : prof.breakpoints())
        os << "<circle cx=\"" << num(px(b)) << "\" cy=\"" << num(py(prof.value_at(b)))
           << "\" r=\"4\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num((L + W - R) / 2) << "\" y=\"" << num(H - 10)
       << "\" text-anchor=\"middle\">t</text>\n";
    os << "</svg>\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Upsilon invariant of links and balanced spatial graphs from grid diagrams"};
    app.require_subcommand(1);

    std::string path, t_arg, format = "plain", plot_path, dump_path;
    long long profile_q = 0;

    CLI::App* validate = app.add_subcommand("validate", "parse a diagram file and check the grid conditions");
    validate->add_option("path", path, "diagram file")->required();

    CLI::App* upsilon = app.add_subcommand("upsilon", "evaluate Upsilon at one t or over a profile lattice");
    upsilon->add_option("path", path, "diagram file")->required();
    CLI::Option* opt_t = upsilon->add_option("--t", t_arg, "parameter t as p/q in [0,2]");
    CLI::Option* opt_prof = upsilon->add_option("--profile", profile_q, "sample t = 0, 1/q, ..., 1");
    opt_t->excludes(opt_prof);
    upsilon->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"plain", "csv", "json"}));
    upsilon->add_option("--plot", plot_path, "write an SVG plot of the profile to this path")
        ->needs(opt_prof);
    upsilon->add_option("--dump-complex", dump_path, "write the t-complex in sparse text form")
        ->needs(opt_t);

    long long tq = 6, births = 0, saddles = 0, deaths = 0, genus = -1;
    std::string path2, moves_path;

    CLI::App* verify = app.add_subcommand("verify", "run an executable-theorem check, printing a JSON report");
    verify->require_subcommand(1);
    CLI::App* inv = verify->add_subcommand("invariance", "replay moves, compare homologies mod W_t factors");
    inv->add_option("diagram1", path, "starting diagram")->required();
    inv->add_option("diagram2", path2, "ending diagram")->required();
    inv->add_option("moves", moves_path, "move sequence file")->required();
    inv->add_option("--tq", tq, "sample denominator");
    CLI::App* cob = verify->add_subcommand("cobordism", "two-sided genus bound between two tight links");
    cob->add_option("diagram1", path, "source link")->required();
    cob->add_option("diagram2", path2, "target link")->required();
    cob->add_option("--births", births, "birth move count");
    cob->add_option("--saddles", saddles, "saddle move count");
    cob->add_option("--deaths", deaths, "death move count");
    cob->add_option("--genus", genus, "override the derived genus (default: derive from counts)");
    cob->add_option("--tq", tq, "sample denominator");
    CLI::App* cro = verify->add_subcommand("crossing", "crossing-change bound between asserted L+ and L-");
    cro->add_option("diagram-plus", path, "L+ diagram")->required();
    cro->add_option("diagram-minus", path2, "L- diagram")->required();
    cro->add_option("--tq", tq, "sample denominator");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) return cmd_validate(path);

        if (upsilon->parsed()) {
            gridups::GridDiagram g = load_diagram(path);
            if (!opt_t->empty()) {
                gridups::TParameter t = gridups::parse_t(t_arg);
                gridups::Rational v = gridups::upsilon_at(g, t);
                if (!dump_path.empty())
                    write_file(dump_path,
                               gridups::export_complex(gridups::build_t_complex(g, t)));
                if (format == "csv")
                    std::cout << "t,value\n" << t.as_rational().str() << "," << v.str() << "\n";
                else if (format == "json")
                    std::cout << ordered_json{{"t", t.as_rational().str()}, {"value", v.str()}}.dump(2)
                              << "\n";
                else
                    std::cout << v.str() << "\n";
                return 0;
            }
            if (!opt_prof->empty()) {
                gridups::UpsilonProfile prof = gridups::upsilon_profile(g, profile_q);
                if (!plot_path.empty()) write_file(plot_path, profile_svg(prof));
                if (format == "json")
                    std::cout << profile_json(prof);
                else
                    std::cout << profile_csv(prof);
                return 0;
            }
            throw gridups::invalid_input_error("upsilon needs --t p/q or --profile q");
        }

        gridups::VerifyReport rep;
        if (inv->parsed()) {
            rep = gridups::verify_invariance(load_diagram(path), load_diagram(path2),
                                             gridups::parse_moves(read_file(moves_path)), tq);
        } else if (cob->parsed()) {
            rep = gridups::cobordism_bound_check(load_diagram(path), load_diagram(path2), births,
                                                 saddles, deaths, tq, genus);
        } else {
            rep = gridups::crossing_change_check(load_diagram(path), load_diagram(path2), tq);
        }
        std::cout << gridups::report_json(rep);
        return 0;
    } catch (const gridups::invalid_input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const gridups::inadmissible_parameter_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const gridups::invariant_violation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
