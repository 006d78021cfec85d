#include "mindex/io.hpp"

#include <json.hpp>

#include <cctype>

namespace mindex {

using nlohmann::json;

namespace {

/// Character cursor with position-carrying errors.
struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
    }

    bool done() {
        skip_ws();
        return i >= s.size();
    }

    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }

    bool eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!eat(c))
            fail(std::string("expected '") + c + "'");
    }

    unsigned number() {
        skip_ws();
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
            fail("expected a number");
        unsigned long v = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            v = v * 10 + static_cast<unsigned long>(s[i++] - '0');
        return static_cast<unsigned>(v);
    }

    std::string word() {
        skip_ws();
        std::size_t b = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
            ++i;
        if (b == i)
            fail("expected a name");
        return s.substr(b, i - b);
    }

    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("syntax error at position " + std::to_string(i) +
                                    ": " + what);
    }
};

unsigned exponent_suffix(Cursor& c) {
    if (c.eat('^'))
        return c.number();
    return 1;
}

OdeMultiIndex ode_mi(Cursor& c) {
    if (c.eat('1'))
        return OdeMultiIndex::unit();
    OdeMultiIndex m;
    bool any = false;
    while (c.peek() == 'z') {
        c.expect('z');
        unsigned k = c.number();
        m = m.with_raised(k, static_cast<int>(exponent_suffix(c)));
        any = true;
    }
    if (!any)
        c.fail("expected a multi-index");
    return m;
}

NVec vector_body(Cursor& c, std::size_t dims) {
    NVec v;
    v.push_back(c.number());
    while (c.eat(','))
        v.push_back(c.number());
    if (v.size() != dims)
        c.fail("expected a vector of length " + std::to_string(dims));
    return v;
}

SpdeVariable spde_var(Cursor& c, const IoSession& io) {
    c.expect('z');
    c.expect('[');
    unsigned label = io.label_of(c.word());
    c.expect(';');
    NVec u = nvec_zero(io.dims);
    if (!c.eat('-')) {
        while (c.peek() == 'b') {
            c.expect('b');
            unsigned dir = c.number();
            if (dir >= io.dims)
                c.fail("direction out of range");
            u[dir] += exponent_suffix(c);
        }
    }
    c.expect(';');
    CanonicalWord::letter_map v;
    if (!c.eat('-')) {
        while (c.peek() == '(') {
            c.expect('(');
            NVec n = vector_body(c, io.dims);
            c.expect(')');
            v[n] += exponent_suffix(c);
        }
    }
    c.expect(']');
    return SpdeVariable{label, CanonicalWord(std::move(u), std::move(v))};
}

SpdeMultiIndex spde_mi(Cursor& c, const IoSession& io) {
    if (c.eat('1'))
        return SpdeMultiIndex::unit();
    SpdeMultiIndex m;
    bool any = false;
    while (c.peek() == 'z') {
        SpdeVariable v = spde_var(c, io);
        m = m.with_raised(v, static_cast<int>(exponent_suffix(c)));
        any = true;
    }
    if (!any)
        c.fail("expected a multi-index");
    return m;
}

void expect_end(Cursor& c) {
    if (!c.done())
        c.fail("unexpected trailing input");
}

// --- json key readers --------------------------------------------------------

NVec nvec_from(const json& j) { return j.get<NVec>(); }

OdeMultiIndex ode_mi_from(const json& j) {
    OdeMultiIndex::exp_map e;
    for (const auto& [k, v] : j.items())
        e[static_cast<unsigned>(std::stoul(k))] = v.get<unsigned>();
    return OdeMultiIndex(std::move(e));
}

OdeForest ode_forest_from(const json& j) {
    OdeForest f;
    for (const auto& m : j)
        f.insert(ode_mi_from(m));
    return f;
}

SpdeVariable spde_var_from(const json& j) {
    CanonicalWord::letter_map v;
    for (const auto& l : j.at("v"))
        v[nvec_from(l.at("n"))] += l.at("m").get<unsigned>();
    return SpdeVariable{j.at("label").get<unsigned>(),
                        CanonicalWord(nvec_from(j.at("u")), std::move(v))};
}

SpdeMultiIndex spde_mi_from(const json& j) {
    SpdeMultiIndex m;
    for (const auto& t : j)
        m = m.with_raised(spde_var_from(t.at("var")),
                          static_cast<int>(t.at("e").get<unsigned>()));
    return m;
}

SpdeForest spde_forest_from(const json& j) {
    SpdeForest f(nvec_from(j.at("k")));
    for (const auto& it : j.at("items"))
        f.insert(spde_mi_from(it.at("m")), nvec_from(it.at("n")),
                 it.at("r").get<unsigned>());
    return f;
}

Rational coeff_from(const json& j) {
    return Rational(Integer(j.at("num").get<std::string>()),
                    Integer(j.at("den").get<std::string>()));
}

template <class B, class KeyFn>
LinComb<B> comb_from(const std::string& s, const std::string& basis, KeyFn key) {
    json j = json::parse(s);
    if (j.at("basis").get<std::string>() != basis)
        throw std::invalid_argument("expected basis \"" + basis + "\"");
    LinComb<B> out;
    for (const auto& t : j.at("terms"))
        out.add_term(key(t.at("key")), coeff_from(t.at("coeff")));
    return out;
}

} // namespace

OdeMultiIndex parse_ode_multiindex(const std::string& s) {
    Cursor c{s};
    OdeMultiIndex m = ode_mi(c);
    expect_end(c);
    return m;
}

OdeForest parse_ode_forest(const std::string& s) {
    Cursor c{s};
    c.expect('{');
    OdeForest f;
    if (c.peek() != '}') {
        f.insert(ode_mi(c));
        while (c.eat(';'))
            f.insert(ode_mi(c));
    }
    c.expect('}');
    expect_end(c);
    return f;
}

SpdeMultiIndex parse_spde_multiindex(const std::string& s, const IoSession& io) {
    Cursor c{s};
    SpdeMultiIndex m = spde_mi(c, io);
    expect_end(c);
    return m;
}

SpdeForest parse_spde_forest(const std::string& s, const IoSession& io) {
    Cursor c{s};
    NVec k = nvec_zero(io.dims);
    if (c.peek() == 'd') {
        c.expect('d');
        c.expect('^');
        c.expect('(');
        k = vector_body(c, io.dims);
        c.expect(')');
    }
    SpdeForest f(std::move(k));
    c.expect('{');
    if (c.peek() != '}') {
        do {
            SpdeMultiIndex m = spde_mi(c, io);
            NVec n = nvec_zero(io.dims);
            if (c.peek() == 'D') {
                c.expect('D');
                c.expect('(');
                n = vector_body(c, io.dims);
                c.expect(')');
            }
            f.insert(m, n);
        } while (c.eat(';'));
    }
    c.expect('}');
    expect_end(c);
    return f;
}

LinComb<OdeMultiIndex> parse_json_ode_comb(const std::string& s) {
    return comb_from<OdeMultiIndex>(s, "ode-multiindex", ode_mi_from);
}

LinComb<OdeTensor> parse_json_ode_tensor_comb(const std::string& s) {
    return comb_from<OdeTensor>(s, "ode-tensor", [](const json& k) {
        return OdeTensor{ode_forest_from(k.at("forest")), ode_mi_from(k.at("right"))};
    });
}

LinComb<SpdeMultiIndex> parse_json_spde_comb(const std::string& s) {
    return comb_from<SpdeMultiIndex>(s, "spde-multiindex", spde_mi_from);
}

LinComb<SpdeTensor> parse_json_spde_tensor_comb(const std::string& s) {
    return comb_from<SpdeTensor>(s, "spde-tensor", [](const json& k) {
        return SpdeTensor{spde_forest_from(k.at("forest")),
                          spde_mi_from(k.at("right"))};
    });
}

} // namespace mindex
