// csv.cpp

#include "snse/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace snse {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_or_throw(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

void close_or_throw(std::ofstream& out, const std::string& path) {
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const std::vector<PathRecord>& records) {
    auto out = open_or_throw(path);
    out << "path,n,t,mass,energy,h1,h2,linf,Utilde,diverged\n";
    for (const auto& rec : records)
        for (const auto& row : rec.rows)
            out << rec.path << ',' << row.n << ',' << format_double(row.t) << ','
                << format_double(row.mass) << ',' << format_double(row.energy) << ','
                << format_double(row.h1) << ',' << format_double(row.h2) << ','
                << format_double(row.linf) << ',' << format_double(row.utilde) << ','
                << (row.overflow ? 1 : 0) << '\n';
    close_or_throw(out, path);
}

void write_tails_csv(const std::string& path, const TailCurve& curve) {
    auto out = open_or_throw(path);
    out << "R,p_hat,wilson_lo,wilson_hi\n";
    for (const auto& pt : curve.points)
        out << format_double(pt.R) << ',' << format_double(pt.p_hat) << ','
            << format_double(pt.wilson_lo) << ',' << format_double(pt.wilson_hi) << '\n';
    if (curve.fitted)
        out << "# fit shape=" << curve.shape << " eta_hat=" << format_double(curve.eta_hat)
            << " r2=" << format_double(curve.r2) << '\n';
    close_or_throw(out, path);
}

void write_diverge_csv(const std::string& path, const DivergenceReport& report) {
    auto out = open_or_throw(path);
    out << "N,overflow_frac,cond_moment2,max_norm,certificates_checked,"
           "certificates_passed\n";
    for (const auto& row : report.rows)
        out << row.N << ',' << format_double(row.overflow_fraction) << ','
            << format_double(row.cond_moment2) << ',' << format_double(row.max_norm) << ','
            << row.certificates_checked << ',' << row.certificates_passed << '\n';
    close_or_throw(out, path);
}

void write_converge_csv(const std::string& path, const ErrorTable& table) {
    auto out = open_or_throw(path);
    out << "level,dt,M,lambda_M,rms_error,n_paths,cfl_violation\n";
    for (size_t i = 0; i < table.levels.size(); ++i) {
        const auto& lvl = table.levels[i];
        out << i << ',' << format_double(lvl.dt) << ',' << lvl.M << ','
            << format_double(lvl.lambda_M) << ',' << format_double(lvl.rms_error) << ','
            << table.n_paths << ',' << (lvl.cfl_violation ? 1 : 0) << '\n';
    }
    out << "fit," << format_double(table.fit.slope) << ','
        << format_double(table.fit.intercept) << ','
        << format_double(table.fit.ci_halfwidth) << ',' << format_double(table.fit.r2)
        << ',' << table.n_paths << ",0\n";
    close_or_throw(out, path);
}

void write_bounds_csv(const std::string& path, const std::vector<BoundRow>& rows) {
    auto out = open_or_throw(path);
    out << "tail_type,epsilon_N,bound\n";
    for (const auto& row : rows)
        out << tail_type_name(row.tail_type) << ',' << format_double(row.epsilon_N) << ','
            << format_double(row.bound) << '\n';
    close_or_throw(out, path);
}

}  // namespace snse
