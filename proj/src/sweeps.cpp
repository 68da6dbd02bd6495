#include "cascade/sweeps.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cascade/csv.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cascade {

const char* const kEngineVersion = "cascade 0.1.0";

const char* sweep_output_name(SweepOutput o)
{
    switch (o) {
    case SweepOutput::intensity: return "intensity";
    case SweepOutput::visibility: return "visibility";
    case SweepOutput::g2zero: return "g2zero";
    case SweepOutput::hom: return "hom";
    case SweepOutput::occupation: return "occupation";
    case SweepOutput::spectrum: return "spectrum";
    case SweepOutput::g2map: return "g2map";
    }
    return "?";
}

SweepOutput parse_sweep_output(const std::string& name)
{
    for (SweepOutput o : {SweepOutput::intensity, SweepOutput::visibility,
                          SweepOutput::g2zero, SweepOutput::hom,
                          SweepOutput::occupation, SweepOutput::spectrum,
                          SweepOutput::g2map})
        if (name == sweep_output_name(o))
            return o;
    throw std::invalid_argument("unknown sweep output: " + name);
}

void validate(const SweepSpec& spec)
{
    validate(spec.base);
    if (spec.areas.empty() || spec.lengths.empty() || spec.chi2_values.empty())
        throw std::invalid_argument("sweep grids must be non-empty");
    for (double a : spec.areas)
        if (!(a >= 0.0))
            throw std::invalid_argument("sweep areas must be >= 0");
    for (double w : spec.lengths)
        if (!(w > 0.0))
            throw std::invalid_argument("sweep lengths must be > 0");
    for (double c : spec.chi2_values)
        if (c < 0.0 || c > 1.0)
            throw std::invalid_argument("sweep chi2 values must lie in [0, 1]");
    if (spec.outputs.empty())
        throw std::invalid_argument("sweep requests no outputs");
}

namespace {

constexpr Emitter kEmitters[] = {Emitter::source, Emitter::target, Emitter::flux};

bool is_heavy(SweepOutput o)
{
    return o == SweepOutput::occupation || o == SweepOutput::spectrum
        || o == SweepOutput::g2map;
}

std::string point_tag(int ia, int iw, int ic)
{
    std::ostringstream ss;
    ss << "a" << ia << "_w" << iw << "_c" << ic;
    return ss.str();
}

void echo_point(CsvFile& f, const SystemParams& sp, const PulseParams& pulse)
{
    f.comment("engine = " + std::string(kEngineVersion));
    f.comment("area = " + csv_num(pulse.area));
    f.comment("fwhm = " + csv_num(pulse.fwhm));
    f.comment("chi1 = " + csv_num(sp.chi1));
    f.comment("chi2 = " + csv_num(sp.chi2));
    f.comment("gamma_sigma = " + csv_num(sp.gamma_sigma));
    f.comment("gamma_xi = " + csv_num(sp.gamma_xi));
}

struct PointContext {
    SystemParams sp;
    LiouvillianParts parts;
    PulseParams pulse;
};

std::vector<SweepRecord> evaluate_point(const SweepSpec& spec, int ia, int iw, int ic,
                                        const std::string& artifact_dir)
{
    const double area = spec.areas[ia];
    const double length = spec.lengths[iw];
    const double chi2 = spec.chi2_values[ic];

    auto make = [&](SweepOutput obs, Emitter e) {
        SweepRecord r;
        r.area = area;
        r.length = length;
        r.chi2 = chi2;
        r.emitter = e;
        r.observable = obs;
        return r;
    };

    std::vector<SweepRecord> records;
    for (SweepOutput obs : spec.outputs) {
        if (obs == SweepOutput::visibility)
            continue; // per-(length, chi2), handled by the caller
        for (Emitter e : kEmitters)
            records.push_back(make(obs, e));
    }

    try {
        SystemParams sp = spec.base;
        sp.chi2 = chi2;
        const LiouvillianParts parts = build_cascaded(sp);
        const PulseParams pulse{area, 0.0, length};

        const double t_start = -5.0 * pulse.stddev();
        TimeGrid map_grid;
        map_grid.t_start = t_start;
        map_grid.t_end = spec.map_t_end;
        map_grid.n_points =
            static_cast<int>(std::ceil((map_grid.t_end - t_start) / spec.map_dt)) + 1;

        MapOptions mopts;
        mopts.tol = spec.tol;

        for (SweepRecord& r : records) {
            const Mat4 c = emitter_operator(r.emitter, parts);
            switch (r.observable) {
            case SweepOutput::intensity: {
                const TimeGrid grid = default_grid(parts, sp, pulse, spec.traj_dt);
                IntegratorOptions iopts;
                iopts.tol = spec.tol;
                const Trajectory traj = evolve(ground_state(), parts, pulse, grid, iopts);
                r.value = integrate_intensity(traj, c);
                break;
            }
            case SweepOutput::g2zero: {
                IntegratorOptions iopts;
                iopts.tol = spec.tol;
                const Trajectory traj = evolve(ground_state(), parts, pulse, map_grid, iopts);
                const CorrelationMap map =
                    g2_map_serial(parts, pulse, map_grid, r.emitter, mopts);
                r.value = pulsed_g2_zero(map, traj, c);
                break;
            }
            case SweepOutput::hom: {
                IntegratorOptions iopts;
                iopts.tol = spec.tol;
                const Trajectory traj = evolve(ground_state(), parts, pulse, map_grid, iopts);
                const CorrelationMap map =
                    g1_map_serial(parts, pulse, map_grid, r.emitter, mopts);
                r.value = hom_indistinguishability(map, traj, c).value;
                break;
            }
            case SweepOutput::occupation: {
                if (r.emitter != Emitter::source) {
                    // one file per point covers all three channels
                    r.handle = "occupation_" + point_tag(ia, iw, ic) + ".csv";
                    break;
                }
                const TimeGrid grid = default_grid(parts, sp, pulse, spec.traj_dt);
                IntegratorOptions iopts;
                iopts.tol = spec.tol;
                const Trajectory traj = evolve(ground_state(), parts, pulse, grid, iopts);
                const std::string name = "occupation_" + point_tag(ia, iw, ic) + ".csv";
                CsvFile f(artifact_dir + "/" + name);
                echo_point(f, sp, pulse);
                f.header({"t", "n_source", "n_target", "n_flux"});
                const auto ns = population_series(traj, emitter_operator(Emitter::source, parts));
                const auto nt = population_series(traj, emitter_operator(Emitter::target, parts));
                const auto nf = population_series(traj, emitter_operator(Emitter::flux, parts));
                for (int i = 0; i < grid.n_points; ++i)
                    f.row({csv_num(grid.time(i)), csv_num(ns[i]), csv_num(nt[i]),
                           csv_num(nf[i])});
                r.handle = name;
                break;
            }
            case SweepOutput::spectrum: {
                const CorrelationMap map =
                    g1_map_serial(parts, pulse, map_grid, r.emitter, mopts);
                const Spectrum s = spectrum(map);
                const std::string name = std::string("spectrum_") + emitter_name(r.emitter)
                                       + "_" + point_tag(ia, iw, ic) + ".csv";
                CsvFile f(artifact_dir + "/" + name);
                echo_point(f, sp, pulse);
                f.header({"omega", "intensity"});
                for (size_t i = 0; i < s.omega.size(); ++i)
                    f.row({csv_num(s.omega[i]), csv_num(s.values[i])});
                r.handle = name;
                break;
            }
            case SweepOutput::g2map: {
                const CorrelationMap map =
                    g2_map_serial(parts, pulse, map_grid, r.emitter, mopts);
                const std::string name = std::string("g2map_") + emitter_name(r.emitter)
                                       + "_" + point_tag(ia, iw, ic) + ".csv";
                CsvFile f(artifact_dir + "/" + name);
                echo_point(f, sp, pulse);
                f.header({"t1", "t2", "value"});
                for (int i = 0; i < map.grid.n_points; ++i)
                    for (int j = 0; j < map.grid.n_points; ++j)
                        f.row({csv_num(map.grid.time(i)), csv_num(map.grid.time(j)),
                               csv_num(std::real(map.values(i, j)))});
                r.handle = name;
                break;
            }
            default:
                break;
            }
        }
    } catch (const std::exception& e) {
        for (SweepRecord& r : records)
            if (r.error.empty() && std::isnan(r.value) && r.handle.empty())
                r.error = e.what();
    }
    return records;
}

} // namespace

SweepResult run_sweep(const SweepSpec& spec, int workers, const std::string& artifact_dir)
{
    validate(spec);
    bool heavy = false;
    for (SweepOutput o : spec.outputs)
        heavy = heavy || is_heavy(o);
    if (heavy && artifact_dir.empty())
        throw std::invalid_argument("heavy sweep outputs require an artifact directory");

    const int na = static_cast<int>(spec.areas.size());
    const int nw = static_cast<int>(spec.lengths.size());
    const int nc = static_cast<int>(spec.chi2_values.size());
    const int n_points = na * nw * nc;

    std::vector<std::vector<SweepRecord>> per_point(n_points);

#ifdef _OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int p = 0; p < n_points; ++p) {
        const int ia = p / (nw * nc);
        const int iw = (p / nc) % nw;
        const int ic = p % nc;
        per_point[p] = evaluate_point(spec, ia, iw, ic, artifact_dir);
    }

    SweepResult result;
    result.engine_version = kEngineVersion;
    for (int p = 0; p < n_points; ++p)
        result.records.insert(result.records.end(), per_point[p].begin(),
                              per_point[p].end());

    if (spec.outputs.count(SweepOutput::visibility)) {
        for (int iw = 0; iw < nw; ++iw) {
            for (int ic = 0; ic < nc; ++ic) {
                SweepRecord base;
                base.area = std::numeric_limits<double>::quiet_NaN();
                base.length = spec.lengths[iw];
                base.chi2 = spec.chi2_values[ic];
                base.observable = SweepOutput::visibility;
                try {
                    SystemParams sp = spec.base;
                    sp.chi2 = spec.chi2_values[ic];
                    RabiOptions ropts;
                    ropts.tol = spec.tol;
                    const std::vector<RabiPoint> points =
                        rabi_curves(sp, spec.lengths[iw], spec.areas, ropts);
                    for (Emitter e : kEmitters) {
                        Curve curve;
                        for (const RabiPoint& pt : points) {
                            curve.x.push_back(pt.area);
                            curve.y.push_back(e == Emitter::source ? pt.i_source
                                              : e == Emitter::target ? pt.i_target
                                                                     : pt.i_flux);
                        }
                        SweepRecord r = base;
                        r.emitter = e;
                        r.value = visibility(curve);
                        result.records.push_back(r);
                    }
                } catch (const std::exception& e) {
                    for (Emitter em : kEmitters) {
                        SweepRecord r = base;
                        r.emitter = em;
                        r.error = e.what();
                        result.records.push_back(r);
                    }
                }
            }
        }
    }
    return result;
}

} // namespace cascade
