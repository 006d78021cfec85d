#include "mindex/io.hpp"

#include <json.hpp>

#include <sstream>

namespace mindex {

using nlohmann::json;

std::string IoSession::name_of(unsigned label) const {
    if (label == 0)
        return "0";
    if (label - 1 < labels.size())
        return labels[label - 1];
    return std::to_string(label);
}

unsigned IoSession::label_of(const std::string& name) const {
    if (!name.empty() && name.find_first_not_of("0123456789") == std::string::npos)
        return static_cast<unsigned>(std::stoul(name));
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == name)
            return static_cast<unsigned>(i + 1);
    throw std::invalid_argument("unknown label: " + name);
}

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

std::string nvec_text(const NVec& v) {
    std::vector<std::string> parts;
    for (unsigned x : v)
        parts.push_back(std::to_string(x));
    return "(" + join(parts, ",") + ")";
}

// --- text / latex for basis elements ---------------------------------------

std::string ode_mi_text(const OdeMultiIndex& m, bool latex) {
    if (m.is_unit())
        return "1";
    std::vector<std::string> parts;
    for (const auto& [k, e] : m.exponents()) {
        std::string p = latex ? "z_{" + std::to_string(k) + "}" : "z" + std::to_string(k);
        if (e > 1)
            p += latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
        parts.push_back(p);
    }
    return join(parts, " ");
}

std::string ode_forest_text(const OdeForest& f, bool latex) {
    std::vector<std::string> parts;
    for (const auto& m : f.flattened())
        parts.push_back(ode_mi_text(m, latex));
    if (latex)
        return "\\{ " + join(parts, " \\odot ") + " \\}";
    return "{ " + join(parts, " ; ") + " }";
}

std::string word_text(const CanonicalWord& w, bool latex) {
    std::vector<std::string> bs, ls;
    for (std::size_t i = 0; i < w.u().size(); ++i) {
        if (!w.u()[i])
            continue;
        std::string p = latex ? "b_{" + std::to_string(i) + "}" : "b" + std::to_string(i);
        if (w.u()[i] > 1)
            p += latex ? "^{" + std::to_string(w.u()[i]) + "}"
                       : "^" + std::to_string(w.u()[i]);
        bs.push_back(p);
    }
    for (const auto& [l, r] : w.v()) {
        std::string p = nvec_text(l);
        if (r > 1)
            p += latex ? "^{" + std::to_string(r) + "}" : "^" + std::to_string(r);
        ls.push_back(p);
    }
    if (latex) {
        std::string body = join(bs, " ") + (bs.empty() || ls.empty() ? "" : " ") +
                           join(ls, " ");
        return body.empty() ? "\\emptyset" : body;
    }
    std::string ub = bs.empty() ? "-" : join(bs, " ");
    std::string vb = ls.empty() ? "-" : join(ls, " ");
    return ub + "; " + vb;
}

std::string spde_var_text(const SpdeVariable& v, bool latex, const IoSession& io) {
    if (latex)
        return "z_{(" + io.name_of(v.label) + ", " + word_text(v.word, true) + ")}";
    return "z[" + io.name_of(v.label) + "; " + word_text(v.word, false) + "]";
}

std::string spde_mi_text(const SpdeMultiIndex& m, bool latex, const IoSession& io) {
    if (m.is_unit())
        return "1";
    std::vector<std::string> parts;
    for (const auto& [v, e] : m.exponents()) {
        std::string p = spde_var_text(v, latex, io);
        if (e > 1)
            p += latex ? "^{" + std::to_string(e) + "}" : "^" + std::to_string(e);
        parts.push_back(p);
    }
    return join(parts, " ");
}

std::string spde_forest_text(const SpdeForest& f, bool latex, const IoSession& io) {
    std::vector<std::string> parts;
    for (const auto& it : f.flattened()) {
        std::string p = spde_mi_text(it.first, latex, io);
        p += latex ? " D^{" + nvec_text(it.second) + "}" : " D" + nvec_text(it.second);
        parts.push_back(p);
    }
    std::string k = nvec_text(f.k());
    if (latex)
        return "\\partial^{" + k + "} \\{ " + join(parts, " \\odot ") + " \\}";
    return "d^" + k + "{ " + join(parts, " ; ") + " }";
}

// --- json keys --------------------------------------------------------------

json nvec_json(const NVec& v) { return json(v); }

json ode_mi_json(const OdeMultiIndex& m) {
    json o = json::object();
    for (const auto& [k, e] : m.exponents())
        o[std::to_string(k)] = e;
    return o;
}

json ode_forest_json(const OdeForest& f) {
    json a = json::array();
    for (const auto& m : f.flattened())
        a.push_back(ode_mi_json(m));
    return a;
}

json spde_var_json(const SpdeVariable& v) {
    json letters = json::array();
    for (const auto& [l, r] : v.word.v())
        letters.push_back(json{{"n", nvec_json(l)}, {"m", r}});
    return json{{"label", v.label}, {"u", nvec_json(v.word.u())}, {"v", letters}};
}

json spde_mi_json(const SpdeMultiIndex& m) {
    json a = json::array();
    for (const auto& [v, e] : m.exponents())
        a.push_back(json{{"var", spde_var_json(v)}, {"e", e}});
    return a;
}

json spde_forest_json(const SpdeForest& f) {
    json items = json::array();
    for (const auto& [it, r] : f.items())
        items.push_back(json{{"m", spde_mi_json(it.first)},
                             {"n", nvec_json(it.second)},
                             {"r", r}});
    return json{{"k", nvec_json(f.k())}, {"items", items}};
}

json coeff_json(const Rational& c) {
    return json{{"num", c.num().str()}, {"den", c.den().str()}};
}

template <class B, class KeyFn>
std::string comb_json(const LinComb<B>& c, const std::string& basis, KeyFn key) {
    json terms = json::array();
    for (const auto& [k, v] : c)
        terms.push_back(json{{"coeff", coeff_json(v)}, {"key", key(k)}});
    return json{{"basis", basis}, {"terms", terms}}.dump();
}

std::string coeff_prefix(const Rational& c, bool latex) {
    if (c == Rational(1))
        return "";
    if (latex)
        return (c.is_integer() ? c.str() : "\\frac{" + c.num().str() + "}{" +
                                               c.den().str() + "}") +
               "\\, ";
    return c.str() + " ";
}

template <class B, class TermFn>
std::string comb_text(const LinComb<B>& c, bool latex, TermFn term) {
    if (c.is_zero())
        return "0";
    std::vector<std::string> parts;
    for (const auto& [k, v] : c)
        parts.push_back(coeff_prefix(v, latex) + term(k));
    return join(parts, " + ");
}

} // namespace

// --- public entry points -----------------------------------------------------

std::string render(const Rational& r, Format f) {
    switch (f) {
    case Format::text:
        return r.str();
    case Format::latex:
        return r.is_integer()
                   ? r.str()
                   : "\\frac{" + r.num().str() + "}{" + r.den().str() + "}";
    case Format::json:
        return coeff_json(r).dump();
    }
    throw std::logic_error("render: bad format");
}

std::string render(const OdeMultiIndex& m, Format f) {
    if (f == Format::json)
        return ode_mi_json(m).dump();
    return ode_mi_text(m, f == Format::latex);
}

std::string render(const OdeForest& fo, Format f) {
    if (f == Format::json)
        return ode_forest_json(fo).dump();
    return ode_forest_text(fo, f == Format::latex);
}

std::string render(const SpdeMultiIndex& m, Format f, const IoSession& io) {
    if (f == Format::json)
        return spde_mi_json(m).dump();
    return spde_mi_text(m, f == Format::latex, io);
}

std::string render(const SpdeForest& fo, Format f, const IoSession& io) {
    if (f == Format::json)
        return spde_forest_json(fo).dump();
    return spde_forest_text(fo, f == Format::latex, io);
}

std::string render(const LinComb<OdeMultiIndex>& c, Format f) {
    if (f == Format::json)
        return comb_json(c, "ode-multiindex", ode_mi_json);
    bool latex = f == Format::latex;
    return comb_text(c, latex,
                     [&](const OdeMultiIndex& m) { return ode_mi_text(m, latex); });
}

std::string render(const LinComb<OdeTensor>& c, Format f) {
    if (f == Format::json)
        return comb_json(c, "ode-tensor", [](const OdeTensor& t) {
            return json{{"forest", ode_forest_json(t.left)},
                        {"right", ode_mi_json(t.right)}};
        });
    bool latex = f == Format::latex;
    return comb_text(c, latex, [&](const OdeTensor& t) {
        return ode_forest_text(t.left, latex) + (latex ? " \\otimes " : " (x) ") +
               ode_mi_text(t.right, latex);
    });
}

std::string render(const LinComb<SpdeMultiIndex>& c, Format f, const IoSession& io) {
    if (f == Format::json)
        return comb_json(c, "spde-multiindex", spde_mi_json);
    bool latex = f == Format::latex;
    return comb_text(c, latex, [&](const SpdeMultiIndex& m) {
        return spde_mi_text(m, latex, io);
    });
}

std::string render(const LinComb<SpdeTensor>& c, Format f, const IoSession& io) {
    if (f == Format::json)
        return comb_json(c, "spde-tensor", [](const SpdeTensor& t) {
            return json{{"forest", spde_forest_json(t.left)},
                        {"right", spde_mi_json(t.right)}};
        });
    bool latex = f == Format::latex;
    return comb_text(c, latex, [&](const SpdeTensor& t) {
        return spde_forest_text(t.left, latex, io) + (latex ? " \\otimes " : " (x) ") +
               spde_mi_text(t.right, latex, io);
    });
}

} // namespace mindex
