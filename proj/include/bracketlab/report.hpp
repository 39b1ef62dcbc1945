// JSON and CSV emission for CLI reports.  Every JSON document carries an
// integer schema version and the RunConfig that produced it, so a report can
// be replayed byte-for-byte (wall-clock fields excepted) from its own
// metadata.  CSV output always starts with a header row.

#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "bracketlab/gowers.hpp"

namespace bracketlab {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const GowersReport& rep) {
    Json j{
        {"schema", kSchemaVersion},
        {"k", rep.k},
        {"N", rep.N},
        {"Ntilde", rep.Ntilde},
        {"norm", rep.norm},
        {"normalizer", rep.normalizer},
        {"method", method_name(rep.method)},
    };
    if (rep.mc_stderr) j["mc_stderr"] = *rep.mc_stderr;
    if (rep.mc_lower99) j["mc_lower99"] = *rep.mc_lower99;
    if (rep.seed) j["seed"] = *rep.seed;
    if (rep.mc_samples > 0) j["mc_samples"] = rep.mc_samples;
    return j;
}

inline void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << body;
}

// index,value rows for a real sequence; index,re,im for a complex one.
template <class R>
std::string csv_from_seq(const RealSeq<R>& s) {
    std::ostringstream out;
    out.precision(17);
    out << "index,value\n";
    for (long long n = s.lo; n <= s.hi(); ++n) {
        if constexpr (std::is_same_v<R, double>) {
            out << n << "," << s.at(n) << "\n";
        } else {
            out << n << "," << to_string(s.at(n)) << "\n";
        }
    }
    return out.str();
}

inline std::string csv_from_seq(const ComplexSeq& s) {
    std::ostringstream out;
    out.precision(17);
    out << "index,re,im\n";
    long long lo = s.domain == ComplexSeq::Domain::Cyclic ? 0 : s.lo;
    for (long long i = 0; i < s.size(); ++i) {
        const auto& z = s.values[static_cast<std::size_t>(i)];
        out << (lo + i) << "," << z.real() << "," << z.imag() << "\n";
    }
    return out.str();
}

}  // namespace bracketlab
