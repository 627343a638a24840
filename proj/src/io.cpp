#include "bouss/io.hpp"

#include <cstdio>
#include <fstream>

namespace bouss {

namespace {

// non-finite doubles serialize as JSON null
Json num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

void write_profile_csv(const std::filesystem::path& path, const WaveProfile& p) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_profile_csv: cannot open " + path.string());
    std::fputs("x,u,eta\n", f);
    for (int j = 0; j < p.grid.n; ++j)
        std::fprintf(f, "%.17g,%.17g,%.17g\n", p.grid.point(j), p.u[j], p.eta[j]);
    std::fclose(f);
}

void write_profile_dat(const std::filesystem::path& path, const WaveProfile& p) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_profile_dat: cannot open " + path.string());
    std::fputs("# x u eta\n", f);
    for (int j = 0; j < p.grid.n; ++j)
        std::fprintf(f, "%.17g %.17g %.17g\n", p.grid.point(j), p.u[j], p.eta[j]);
    std::fclose(f);
}

void write_json(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json: cannot open " + path.string());
    out << j.dump(2) << "\n";
}

Json nodal_to_json(const NodalFlags& f, NodalPattern pattern) {
    Json j;
    j["u_positive"] = f.u_positive;
    j[pattern == NodalPattern::Slow ? "eta_negative" : "eta_positive"] = f.eta_signed;
    j["u_decreasing"] = f.u_decreasing;
    j[pattern == NodalPattern::Slow ? "eta_increasing" : "eta_decreasing"] = f.eta_monotone;
    j["all"] = f.all();
    return j;
}

Json diagnostics_to_json(const DiagnosticsReport& d, FamilyKind kind) {
    Json j;
    j["residual"] = num(d.residual_sup);
    j["ellipticity_gap"] = num(d.ellipticity_gap);
    j["stagnation_gap"] = num(d.stagnation_gap);
    j["nodal"] = nodal_to_json(d.nodal, kind == FamilyKind::Slow ? NodalPattern::Slow
                                                                 : NodalPattern::Fast);
    j["N"] = num(d.blowup_quantity);
    j["u0"] = num(d.u_crest);
    j["eta0"] = num(d.eta_crest);
    j["decay_rate"] = num(d.decay_rate);
    j["eta_bound_slack"] = num(d.eta_bound_slack);
    j["sigma_min"] = num(d.sigma_min);
    return j;
}

Json branch_to_json(const Branch& b) {
    Json j;
    j["schema"] = 1;
    j["family"] = b.kind == FamilyKind::Slow ? "slow" : "fast";
    if (b.kind == FamilyKind::Slow) {
        j["beta"] = b.beta;
    } else {
        j["k"] = b.k;
        j["lambda"] = b.lambda;
    }
    Json pts = Json::array();
    for (const auto& bp : b.points) {
        Json p;
        p["param"] = num(bp.param);
        p["u0"] = num(bp.diagnostics.u_crest);
        p["eta0"] = num(bp.diagnostics.eta_crest);
        p["residual"] = num(bp.diagnostics.residual_sup);
        p["ellipticity_gap"] = num(bp.diagnostics.ellipticity_gap);
        p["stagnation_gap"] = num(bp.diagnostics.stagnation_gap);
        p["nodal"] = nodal_to_json(bp.diagnostics.nodal,
                                   b.kind == FamilyKind::Slow ? NodalPattern::Slow
                                                              : NodalPattern::Fast);
        p["N"] = num(bp.diagnostics.blowup_quantity);
        pts.push_back(std::move(p));
    }
    j["points"] = std::move(pts);
    j["termination"] = Json{{"reason", to_string(b.reason)}, {"detail", b.detail}};
    return j;
}

Json profile_summary_json(const WaveProfile& p) {
    Json j;
    j["schema"] = 1;
    j["lambda"] = num(p.lambda);
    j["params"] = Json{{"a", p.params.a}, {"b", p.params.b}, {"c", p.params.c},
                       {"d", p.params.d}, {"tau", p.params.tau}};
    j["grid"] = Json{{"L", p.grid.half_length},
                     {"n", p.grid.n},
                     {"symmetry", p.grid.symmetry == Symmetry::EvenHalfLine
                                      ? "even-half-line"
                                      : "full-line"}};
    j["u0"] = num(p.u.empty() ? 0.0 : p.u[0]);
    j["eta0"] = num(p.eta.empty() ? 0.0 : p.eta[0]);
    j["tail_sup"] = num(p.tail_sup());
    return j;
}

}  // namespace bouss
