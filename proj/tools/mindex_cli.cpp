#include "mindex/io.hpp"
#include "mindex/laws.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace mindex;

namespace {

struct Options {
    std::string mode = "ode";
    unsigned dim = 0;
    bool dim_set = false;
    std::vector<std::string> labels;
    int max_grade = -1;
    unsigned max_norm = 4;
    std::string format = "text";
    std::uint64_t seed = 20240901;
    std::string formula = "primal";
    std::string out;
    std::vector<std::string> args;
};

Format format_of(const std::string& f) {
    if (f == "text")
        return Format::text;
    if (f == "latex")
        return Format::latex;
    if (f == "json")
        return Format::json;
    throw std::invalid_argument("unknown format: " + f);
}

IoSession session_of(const Options& o) {
    IoSession io;
    io.dims = o.dim + 1;
    io.labels = o.labels.empty() ? std::vector<std::string>{"l"} : o.labels;
    return io;
}

void require_spde_session(const Options& o) {
    if (!o.dim_set || o.labels.empty())
        throw std::invalid_argument("spde mode requires --dim and --labels");
}

GradeBound grade_of(const Options& o) {
    if (o.max_grade < 0)
        throw std::invalid_argument("grade bound required");
    return GradeBound{static_cast<unsigned>(o.max_grade)};
}

const std::string& arg(const Options& o, std::size_t i, const char* what) {
    if (i >= o.args.size())
        throw std::invalid_argument(std::string("missing argument: ") + what);
    return o.args[i];
}

NVec parse_vector(const std::string& s, std::size_t dims) {
    NVec v;
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t next = s.find(',', pos);
        if (next == std::string::npos)
            next = s.size();
        v.push_back(static_cast<unsigned>(std::stoul(s.substr(pos, next - pos))));
        pos = next + 1;
    }
    if (v.size() != dims)
        throw std::invalid_argument("expected a vector of length " +
                                    std::to_string(dims));
    return v;
}

std::string run_command(const std::string& cmd, const Options& o) {
    Format fmt = format_of(o.format);
    bool spde = o.mode == "spde";
    if (spde)
        require_spde_session(o);
    else if (o.mode != "ode")
        throw std::invalid_argument("unknown mode: " + o.mode);
    IoSession io = session_of(o);
    bool adjoint = o.formula == "adjoint";
    if (!adjoint && o.formula != "primal")
        throw std::invalid_argument("unknown formula: " + o.formula);

    if (cmd == "delta") {
        if (spde) {
            SpdeMultiIndex m = parse_spde_multiindex(arg(o, 0, "multi-index"), io);
            GradeBound g = grade_of(o);
            return render(adjoint ? delta_spde_adjoint(m, g) : delta_spde_primal(m, g),
                          fmt, io);
        }
        OdeMultiIndex m = parse_ode_multiindex(arg(o, 0, "multi-index"));
        return render(adjoint ? delta_adjoint(m) : delta_primal(m), fmt);
    }
    if (cmd == "delta-minus") {
        if (spde) {
            SpdeMultiIndex m = parse_spde_multiindex(arg(o, 0, "multi-index"), io);
            GradeBound g = grade_of(o);
            return render(adjoint ? delta_minus_spde_adjoint(m, g)
                                  : delta_minus_spde_primal(m, g),
                          fmt, io);
        }
        OdeMultiIndex m = parse_ode_multiindex(arg(o, 0, "multi-index"));
        return render(adjoint ? delta_minus_adjoint(m) : delta_minus_primal(m), fmt);
    }
    if (cmd == "star2") {
        if (spde) {
            SpdeForest f = parse_spde_forest(arg(o, 0, "forest"), io);
            SpdeMultiIndex m = parse_spde_multiindex(arg(o, 1, "multi-index"), io);
            return render(star2_spde(f, m), fmt, io);
        }
        OdeForest f = parse_ode_forest(arg(o, 0, "forest"));
        OdeMultiIndex m = parse_ode_multiindex(arg(o, 1, "multi-index"));
        return render(star2(f, m), fmt);
    }
    if (cmd == "star1") {
        if (spde) {
            SpdeForest f = parse_spde_forest(arg(o, 0, "forest"), io);
            if (!f.has_trivial_markers())
                throw std::invalid_argument("star1: forest must carry no markers");
            SpdeTrunk t = parse_spde_multiindex(arg(o, 1, "trunk"), io);
            std::vector<SpdeMultiIndex> members;
            for (const auto& it : f.flattened())
                members.push_back(it.first);
            return render(star1_spde(members, t), fmt, io);
        }
        OdeForest f = parse_ode_forest(arg(o, 0, "forest"));
        OdeTrunk t = parse_ode_multiindex(arg(o, 1, "trunk"));
        return render(star1(f, t), fmt);
    }
    if (cmd == "insert") {
        if (spde) {
            SpdeMultiIndex a = parse_spde_multiindex(arg(o, 0, "multi-index"), io);
            SpdeTrunk t = parse_spde_multiindex(arg(o, 1, "trunk"), io);
            return render(insert_spde(a, t), fmt, io);
        }
        OdeMultiIndex a = parse_ode_multiindex(arg(o, 0, "multi-index"));
        OdeTrunk t = parse_ode_multiindex(arg(o, 1, "trunk"));
        return render(insert(a, t), fmt);
    }
    if (cmd == "adjoint-d") {
        if (spde) {
            SpdeMultiIndex m = parse_spde_multiindex(arg(o, 0, "multi-index"), io);
            NVec n = parse_vector(arg(o, 1, "derivative vector"), io.dims);
            return render(adjoint_Dn(m, n), fmt, io);
        }
        OdeMultiIndex m = parse_ode_multiindex(arg(o, 0, "multi-index"));
        return render(adjoint_Dbar(m), fmt);
    }
    if (cmd == "adjoint-partial") {
        if (!spde)
            throw std::invalid_argument("adjoint-partial is an spde-mode command");
        SpdeMultiIndex m = parse_spde_multiindex(arg(o, 0, "multi-index"), io);
        NVec k = parse_vector(arg(o, 1, "derivative vector"), io.dims);
        return render(adjoint_partial_k(m, k), fmt, io);
    }
    if (cmd == "pair") {
        Rational p = spde
                         ? inner_product_spde(
                               parse_spde_multiindex(arg(o, 0, "multi-index"), io),
                               parse_spde_multiindex(arg(o, 1, "multi-index"), io))
                         : inner_product(parse_ode_multiindex(arg(o, 0, "multi-index")),
                                         parse_ode_multiindex(arg(o, 1, "multi-index")));
        return render(p, fmt);
    }
    if (cmd == "symmetry") {
        const std::string& s = arg(o, 0, "multi-index or forest");
        Integer v;
        if (s.find('{') != std::string::npos)
            v = spde ? forest_symmetry_spde(parse_spde_forest(s, io))
                     : forest_symmetry(parse_ode_forest(s));
        else
            v = spde ? symmetry_spde(parse_spde_multiindex(s, io))
                     : symmetry(parse_ode_multiindex(s));
        return render(Rational(v), fmt);
    }
    if (cmd == "enumerate") {
        unsigned bound = static_cast<unsigned>(std::stoul(arg(o, 0, "bound")));
        std::string out;
        if (spde) {
            for (const auto& m :
                 enumerate_populated_spde(io.dims, 1, bound, bound + 1, bound))
                out += render(m, fmt, io) + "\n";
        } else {
            for (unsigned n = 1; n <= bound; ++n)
                for (const auto& m : enumerate_populated(n))
                    out += render(m, fmt) + "\n";
        }
        return out;
    }
    if (cmd == "laws") {
        LawReport r = run_law_suite(arg(o, 0, "law name"), o.max_norm, o.seed);
        std::string text =
            fmt == Format::json ? render_report_json(r) : render_report_text(r);
        if (!r.passed())
            throw std::runtime_error(text);
        return text;
    }
    throw std::invalid_argument("unknown command: " + cmd);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact calculus for multi-index Hopf algebras"};
    app.require_subcommand(1);

    Options o;
    std::string cmd;
    for (const char* name : {"delta", "delta-minus", "star1", "star2", "insert",
                             "adjoint-d", "adjoint-partial", "pair", "symmetry",
                             "enumerate", "laws"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("args", o.args, "positional arguments");
        sub->add_option("--mode", o.mode, "ode | spde");
        sub->add_option("--dim", o.dim, "spatial dimension d (spde mode)")
            ->each([&](const std::string&) { o.dim_set = true; });
        sub->add_option("--labels", o.labels, "label names (spde mode)")
            ->delimiter(',');
        sub->add_option("--max-grade", o.max_grade, "first-grade truncation bound");
        sub->add_option("--max-norm", o.max_norm, "law-suite sweep bound");
        sub->add_option("--format", o.format, "text | latex | json");
        sub->add_option("--seed", o.seed, "seed for randomized law suites");
        sub->add_option("--formula", o.formula, "primal | adjoint");
        sub->add_option("--out", o.out, "write output to a file");
        sub->callback([&, name] { cmd = name; });
    }

    CLI11_PARSE(app, argc, argv);

    try {
        std::string result = run_command(cmd, o);
        if (!o.out.empty()) {
            std::ofstream f(o.out);
            if (!f)
                throw std::runtime_error("cannot open output file: " + o.out);
            f << result << "\n";
        } else {
            std::cout << result << "\n";
        }
        return 0;
    } catch (const std::exception& e) {
        if (o.format == "json")
            std::cerr << "{\"error\": \"" << e.what() << "\", \"code\": 1}"
                      << std::endl;
        else
            std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
