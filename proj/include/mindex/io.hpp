#ifndef MINDEX_IO_HPP
#define MINDEX_IO_HPP

#include "mindex/ode_calculus.hpp"
#include "mindex/spde_calculus.hpp"

#include <string>
#include <vector>

namespace mindex {

enum class Format { text, latex, json };

/// Parsing/rendering context: the word dimension and the optional names for
/// the nonzero labels (labels[i] names label i+1; label 0 is the trunk label).
struct IoSession {
    std::size_t dims = 1;
    std::vector<std::string> labels;

    std::string name_of(unsigned label) const;
    unsigned label_of(const std::string& name) const;
};

// --- text grammar ---------------------------------------------------------

OdeMultiIndex parse_ode_multiindex(const std::string& s);
OdeForest parse_ode_forest(const std::string& s);
SpdeMultiIndex parse_spde_multiindex(const std::string& s, const IoSession& io);
SpdeForest parse_spde_forest(const std::string& s, const IoSession& io);

// --- rendering -------------------------------------------------------------

std::string render(const Rational& r, Format f);
std::string render(const OdeMultiIndex& m, Format f);
std::string render(const OdeForest& fo, Format f);
std::string render(const SpdeMultiIndex& m, Format f, const IoSession& io);
std::string render(const SpdeForest& fo, Format f, const IoSession& io);

std::string render(const LinComb<OdeMultiIndex>& c, Format f);
std::string render(const LinComb<OdeTensor>& c, Format f);
std::string render(const LinComb<SpdeMultiIndex>& c, Format f, const IoSession& io);
std::string render(const LinComb<SpdeTensor>& c, Format f, const IoSession& io);

// --- json round-trip -------------------------------------------------------

LinComb<OdeMultiIndex> parse_json_ode_comb(const std::string& s);
LinComb<OdeTensor> parse_json_ode_tensor_comb(const std::string& s);
LinComb<SpdeMultiIndex> parse_json_spde_comb(const std::string& s);
LinComb<SpdeTensor> parse_json_spde_tensor_comb(const std::string& s);

} // namespace mindex

#endif
