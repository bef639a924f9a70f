#include "awr/run.hpp"

#include "awr/error.hpp"
#include "awr/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace awr {

namespace fs = std::filesystem;

namespace {

std::ofstream open_csv(const fs::path& path, const char* version, const char* header) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out.precision(std::numeric_limits<double>::max_digits10);
    out << "# " << version << '\n' << header << '\n';
    return out;
}

std::string level_name(const char* field, long level, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%06ld.%s", field, level, ext);
    return buf;
}

class Writer {
public:
    Writer(const RunConfig& cfg, std::ostream& log) : cfg_(cfg), dir_(cfg.directory), log_(log) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw ConfigError("cannot create output directory '" + cfg.directory + "': " + ec.message());
        iterations_ = open_csv(dir_ / "iterations.csv", "awr-diagnostics v1",
                               "iter,delta_w,delta_rho,kappa,bound_M,min_rho,max_rho,mass,converged");
        levels_ = open_csv(dir_ / "levels.csv", "awr-levels v1",
                           "time,min_rho,max_rho,mass,maxmin_lower,maxmin_upper,violated,cfl_advisory");
        audit_ = open_csv(dir_ / "audit.csv", "awr-audit v1",
                          "slab,t_start,mass_drift,min_rho,max_rho,positive,envelopes_ok,theta,barrier_ok,"
                          "jacobian_min,grad_x_minus_identity,potential_residual,passed");
    }

    void slab(const SlabResult& r) {
        const SlabState& st = r.state;
        iterations_ << "# slab " << index_ << " t=" << st.rho.start() << '\n';
        for (const auto& it : r.reports) {
            iterations_ << it.iter << ',' << it.delta_w << ',' << it.delta_rho << ',' << it.kappa << ','
                        << it.bound_M << ',' << it.min_rho << ',' << it.max_rho << ',' << it.mass << ','
                        << (it.converged ? 1 : 0) << '\n';
        }
        for (std::size_t k = index_ == 0 ? 0 : 1; k < st.parabolic_reports.size(); ++k) {
            const auto& s = st.parabolic_reports[k];
            levels_ << s.time << ',' << s.min_rho << ',' << s.max_rho << ',' << s.mass << ','
                    << s.maxmin_lower_bound << ',' << s.maxmin_upper_bound << ',' << (s.violated ? 1 : 0) << ','
                    << (s.cfl_advisory ? 1 : 0) << '\n';
        }
        const SlabAudit& a = r.audit;
        audit_ << index_ << ',' << st.rho.start() << ',' << a.mass_drift << ',' << a.min_rho << ',' << a.max_rho
               << ',' << a.positive << ',' << a.envelopes_ok << ',' << a.theta << ',' << a.barrier_ok << ','
               << a.jacobian_min << ',' << a.grad_x_minus_identity << ',' << a.potential_residual << ','
               << a.passed() << '\n';
        iterations_.flush();
        levels_.flush();
        audit_.flush();

        const long per_slab = static_cast<long>(st.rho.levels()) - 1;
        const bool last_slab = index_ + 1 == slab_count();
        for (std::size_t k = index_ == 0 ? 0 : 1; k < st.rho.levels(); ++k) {
            const long level = index_ * per_slab + static_cast<long>(k);
            const bool final_level = last_slab && k + 1 == st.rho.levels();
            const bool on_stride = cfg_.snapshot_stride > 0 && level % cfg_.snapshot_stride == 0;
            if (on_stride || final_level) snapshot(level, st.rho.times[k], st.rho[k], st.w[k]);
        }

        log_ << "slab " << index_ << " [" << st.rho.start() << ", " << st.rho.end() << "]: " << r.reports.size()
             << " iterations, last delta " << st.last_delta << ", audit " << (a.passed() ? "ok" : "FAILED") << '\n';
        ++index_;
    }

private:
    int slab_count() const { return static_cast<int>(std::lround(cfg_.T_total / cfg_.slab_T)); }

    void snapshot(long level, double time, const Field& rho, const Field& w) {
        write_snapshot((dir_ / level_name("rho", level, "awrs")).string(), rho, time);
        write_snapshot((dir_ / level_name("w", level, "awrs")).string(), w, time);
        if (rho.torus().dim() >= 2) {
            write_heatmap((dir_ / level_name("rho", level, "pgm")).string(), rho, 0, cfg_.heatmap_axis,
                          cfg_.heatmap_slice);
        }
    }

    const RunConfig& cfg_;
    fs::path dir_;
    std::ostream& log_;
    std::ofstream iterations_, levels_, audit_;
    long index_ = 0;
};

} // namespace

RunOutcome run(const RunConfig& config, std::ostream& log, std::ostream& err) {
    RunOutcome out;
    std::optional<Writer> writer;
    std::optional<std::pair<Field, Field>> data;
    OffsetModel model = OffsetModel::power_law(2.0);
    PicardOptions options;
    try {
        validate(config);
        data = initial_data(config);
        model = make_model(config);
        options = make_options(config);
        writer.emplace(config, log);
    } catch (const ConfigError& e) {
        out.status = kExitConfigError;
        out.message = std::string("config error: ") + e.what();
        err << out.message << '\n';
        return out;
    }

    log << "run: " << model.name() << ", dim " << config.dim << ", T_total " << config.T_total << ", slab_T "
        << config.slab_T << ", " << config.M_levels << " levels per slab\n";
    try {
        const MarchResult m = march(data->first, data->second, model, config.T_total, config.slab_T, options,
                                    [&](const SlabResult& r) { writer->slab(r); });
        out.slabs = m.slabs;
    } catch (const Error& e) {
        out.status = kExitSolverAbort;
        out.message = std::string("solver abort: ") + e.what();
        if (const auto* cf = dynamic_cast<const ConvergenceFailure*>(&e)) {
            out.message += "\nkappa history:";
            for (double k : cf->kappa_history) out.message += " " + std::to_string(k);
        }
        err << out.message << '\n';
        return out;
    }

    for (std::size_t i = 0; i < out.slabs.size(); ++i) {
        if (!out.slabs[i].audit.passed()) {
            out.status = kExitAuditFailure;
            out.message = "audit failed on slab " + std::to_string(i);
            err << out.message << " (see audit.csv)\n";
            return out;
        }
    }
    out.message = "ok";
    log << "run complete: " << out.slabs.size() << " slabs, all audits passed\n";
    return out;
}

RunOutcome run_file(const std::string& path, std::ostream& log, std::ostream& err) {
    try {
        return run(load_config(path), log, err);
    } catch (const ConfigError& e) {
        RunOutcome out;
        out.status = kExitConfigError;
        out.message = std::string("config error: ") + e.what();
        err << out.message << '\n';
        return out;
    }
}

} // namespace awr
