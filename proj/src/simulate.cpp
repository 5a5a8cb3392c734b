#include "rbm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "rbm/rng.hpp"

namespace rbm {

void CounterRng::normal_pair(double& n1, double& n2) {
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    n1 = r * std::cos(2.0 * kPi * u2);
    n2 = r * std::sin(2.0 * kPi * u2);
}

namespace {

bool in_S(double z1, double z2) { return z1 >= 0.0 || z2 >= 0.0; }

}  // namespace

bool step(const ModelParams& m, PathState& st, double dt, double g1, double g2,
          CornerPolicy policy) {
    return step_bridge(m, st, dt, g1, g2, -1.0, policy);
}

bool step_bridge(const ModelParams& m, PathState& st, double dt, double g1, double g2,
                 double bridge_u, CornerPolicy policy) {
    // Cholesky factor of Sigma: (l11 0; l21 l22)
    const double l11 = std::sqrt(m.sigma1);
    const double l21 = m.rho / l11;
    const double l22 = std::sqrt(m.sigma2 - l21 * l21);
    const double sdt = std::sqrt(dt);
    const double n1 = st.z1 + m.mu1 * dt + sdt * l11 * g1;
    const double n2 = st.z2 + m.mu2 * dt + sdt * (l21 * g1 + l22 * g2);

    // Away from the corner the binding constraint is one half-plane; there
    // the one-step reflection is sampled exactly through the minimum of the
    // Brownian bridge of the normal coordinate, which removes the O(sqrt dt)
    // downward bias of plain projection in the local time.
    if (bridge_u > 0.0) {
        if (st.z1 < 0.0 && !(n1 >= 0.0 && n2 >= 0.0)) {
            // face 1 regime: constraint z2 >= 0
            const double v = m.sigma2 * dt;
            const double d = st.z2 - n2;
            const double mn = 0.5 * (st.z2 + n2 - std::sqrt(d * d - 2.0 * v * std::log(bridge_u)));
            const double push = std::max(0.0, -mn);
            if (push > 0.0 || n2 < 0.0) {
                const double dl = std::max(push, -n2);
                st.z1 = n1 + m.r1 * dl;
                st.z2 = n2 + dl;
                st.l1 += dl;
                if (!in_S(st.z1, st.z2))
                    throw SimulationError("bridge pushback failed on face 1");
                return true;
            }
            st.z1 = n1;
            st.z2 = n2;
            return true;
        }
        if (st.z2 < 0.0 && !(n1 >= 0.0 && n2 >= 0.0)) {
            const double v = m.sigma1 * dt;
            const double d = st.z1 - n1;
            const double mn = 0.5 * (st.z1 + n1 - std::sqrt(d * d - 2.0 * v * std::log(bridge_u)));
            const double push = std::max(0.0, -mn);
            if (push > 0.0 || n1 < 0.0) {
                const double dl = std::max(push, -n1);
                st.z1 = n1 + dl;
                st.z2 = n2 + m.r2 * dl;
                st.l2 += dl;
                if (!in_S(st.z1, st.z2))
                    throw SimulationError("bridge pushback failed on face 2");
                return true;
            }
            st.z1 = n1;
            st.z2 = n2;
            return true;
        }
    }

    if (in_S(n1, n2)) {
        st.z1 = n1;
        st.z2 = n2;
        return true;
    }

    // Free move lands in the forbidden quadrant {z1 < 0, z2 < 0}. Attribute
    // the exit to the face whose boundary segment the straight path crosses
    // first; near the corner the attribution is ambiguous and the default
    // policy rejects the increment.
    if (policy == CornerPolicy::Resample) {
        const double corner = std::sqrt(dt);
        if (std::abs(st.z1) <= corner && std::abs(st.z2) <= corner) return false;
    }

    double t_face1 = 2.0, t_face2 = 2.0;  // > 1: no valid crossing of that face
    if (n2 < 0.0 && st.z2 >= 0.0) {
        const double t = (st.z2 == 0.0) ? 0.0 : st.z2 / (st.z2 - n2);
        const double x_at = st.z1 + t * (n1 - st.z1);
        if (x_at <= 0.0) t_face1 = t;
    }
    if (n1 < 0.0 && st.z1 >= 0.0) {
        const double t = (st.z1 == 0.0) ? 0.0 : st.z1 / (st.z1 - n1);
        const double y_at = st.z2 + t * (n2 - st.z2);
        if (y_at <= 0.0) t_face2 = t;
    }

    if (t_face1 > 1.0 && t_face2 > 1.0) {
        if (policy == CornerPolicy::Resample) return false;
        // FirstFace fallback: raw line-crossing order regardless of segment
        const double r1 = (n2 < 0.0 && st.z2 > 0.0) ? st.z2 / (st.z2 - n2) : 2.0;
        const double r2 = (n1 < 0.0 && st.z1 > 0.0) ? st.z1 / (st.z1 - n1) : 2.0;
        if (r1 <= r2)
            t_face1 = 0.0;
        else
            t_face2 = 0.0;
    }

    if (t_face1 <= t_face2) {
        // push back along R1 = (r1, 1) until z2 returns to 0
        const double push = -n2;
        if (push < 0.0) throw SimulationError("negative pushback on face 1");
        st.z1 = n1 + m.r1 * push;
        st.z2 = 0.0;
        st.l1 += push;
    } else {
        const double push = -n1;
        if (push < 0.0) throw SimulationError("negative pushback on face 2");
        st.z1 = 0.0;
        st.z2 = n2 + m.r2 * push;
        st.l2 += push;
    }
    if (!in_S(st.z1, st.z2)) throw SimulationError("pushback failed to re-enter S");
    return true;
}

std::vector<std::pair<double, double>> transform_panel() {
    std::vector<std::pair<double, double>> pts;
    const double vals[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
    for (double x : vals)
        for (double y : vals) pts.emplace_back(x, y);
    return pts;
}

double EmpiricalMeasures::bin_area() const {
    const auto& h = config.hist;
    return (h.x_max - h.x_min) / h.nx * (h.y_max - h.y_min) / h.ny;
}

double EmpiricalMeasures::coarse_bin_area() const {
    const auto& h = config.hist;
    return (h.x_max - h.x_min) / coarse_nx * (h.y_max - h.y_min) / coarse_ny;
}

namespace {

constexpr int kCoarseNx = 24, kCoarseNy = 24;

struct PathAccumulator {
    std::vector<double> hist, hist_s1, boundary1, boundary2;
    std::vector<EmpiricalMeasures::BatchCell> cells;
    double mass_in_range = 0.0, mass_s1 = 0.0, mass_s2 = 0.0;
    double time_effective = 0.0;
    long long corner_resamples = 0;
};

void run_path(const ModelParams& m, const SimConfig& cfg, int path_index,
              PathAccumulator& acc) {
    const HistSpec& hs = cfg.hist;
    const double burn = (cfg.burn_in < 0.0) ? 0.1 * cfg.horizon : cfg.burn_in;
    const long long n_steps = static_cast<long long>(std::llround(cfg.horizon / cfg.dt));
    const long long burn_steps = static_cast<long long>(std::llround(burn / cfg.dt));
    const long long batch_len =
        std::max<long long>(1, (n_steps - burn_steps) / cfg.batches_per_path);

    const auto panel = transform_panel();
    acc.hist.assign(static_cast<size_t>(hs.nx) * hs.ny, 0.0);
    acc.hist_s1.assign(static_cast<size_t>(hs.nx) * hs.ny, 0.0);
    acc.boundary1.assign(hs.n_boundary_bins, 0.0);
    acc.boundary2.assign(hs.n_boundary_bins, 0.0);

    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(path_index));
    PathState st{0.5, 0.5, 0.0, 0.0};

    const double dxb = hs.boundary_extent / hs.n_boundary_bins;
    const double xs[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};

    EmpiricalMeasures::BatchCell cell;
    auto reset_cell = [&]() {
        cell.weight = 0.0;
        cell.time = 0.0;
        cell.l1_sum = 0.0;
        cell.l2_sum = 0.0;
        cell.lhat.assign(panel.size(), Complex(0.0));
        cell.lhat_s1.assign(panel.size(), Complex(0.0));
        cell.ahat.assign(5, Complex(0.0));
        cell.bhat.assign(5, Complex(0.0));
        cell.coarse.assign(static_cast<size_t>(kCoarseNx) * kCoarseNy, 0.0);
    };
    reset_cell();
    double l1_mark = 0.0, l2_mark = 0.0;

    for (long long k = 0; k < n_steps; ++k) {
        double g1, g2;
        int tries = 0;
        for (;;) {
            rng.normal_pair(g1, g2);
            const double u = rng.uniform();
            if (step_bridge(m, st, cfg.dt, g1, g2, u, cfg.corner_policy)) break;
            ++acc.corner_resamples;
            if (++tries > 1000)
                throw SimulationError("stuck at the corner: dt too large for the "
                                      "reflection geometry");
        }
        if (k < burn_steps) {
            l1_mark = st.l1;
            l2_mark = st.l2;
            continue;
        }

        const bool s1_part = (st.z1 <= st.z2 && st.z2 >= 0.0);
        const int ix = static_cast<int>(
            std::floor((st.z1 - hs.x_min) / (hs.x_max - hs.x_min) * hs.nx));
        const int iy = static_cast<int>(
            std::floor((st.z2 - hs.y_min) / (hs.y_max - hs.y_min) * hs.ny));
        if (ix >= 0 && ix < hs.nx && iy >= 0 && iy < hs.ny) {
            acc.hist[static_cast<size_t>(ix) * hs.ny + iy] += cfg.dt;
            if (s1_part) acc.hist_s1[static_cast<size_t>(ix) * hs.ny + iy] += cfg.dt;
            acc.mass_in_range += cfg.dt;
            const int cx = ix * kCoarseNx / hs.nx, cy = iy * kCoarseNy / hs.ny;
            cell.coarse[static_cast<size_t>(cx) * kCoarseNy + cy] += cfg.dt;
        }
        (s1_part ? acc.mass_s1 : acc.mass_s2) += cfg.dt;

        // boundary measures weighted by the local-time increments
        const double dl1 = st.l1 - l1_mark;
        const double dl2 = st.l2 - l2_mark;
        if (dl1 > 0.0) {
            const int b = static_cast<int>(std::floor(-st.z1 / dxb));
            if (st.z1 <= 0.0 && b >= 0 && b < hs.n_boundary_bins) acc.boundary1[b] += dl1;
            for (int j = 0; j < 5; ++j)
                cell.ahat[j] += dl1 * std::polar(1.0, xs[j] * st.z1);
            cell.l1_sum += dl1;
        }
        if (dl2 > 0.0) {
            const int b = static_cast<int>(std::floor(-st.z2 / dxb));
            if (st.z2 <= 0.0 && b >= 0 && b < hs.n_boundary_bins) acc.boundary2[b] += dl2;
            for (int j = 0; j < 5; ++j)
                cell.bhat[j] += dl2 * std::polar(1.0, xs[j] * st.z2);
            cell.l2_sum += dl2;
        }
        l1_mark = st.l1;
        l2_mark = st.l2;

        // interior transforms: thinned time average of e^{i(x z1 + y z2)}
        if (k % cfg.transform_thinning == 0) {
            const double wdt = cfg.dt * cfg.transform_thinning;
            Complex ex[5], ey[5];
            const Complex e1 = std::polar(1.0, st.z1);
            const Complex e2 = std::polar(1.0, st.z2);
            ex[2] = 1.0, ex[3] = e1, ex[4] = e1 * e1;
            ex[1] = std::conj(e1), ex[0] = std::conj(ex[4]);
            ey[2] = 1.0, ey[3] = e2, ey[4] = e2 * e2;
            ey[1] = std::conj(e2), ey[0] = std::conj(ey[4]);
            size_t idx = 0;
            for (int jx = 0; jx < 5; ++jx)
                for (int jy = 0; jy < 5; ++jy, ++idx) {
                    const Complex e = ex[jx] * ey[jy] * wdt;
                    cell.lhat[idx] += e;
                    if (s1_part) cell.lhat_s1[idx] += e;
                }
            cell.weight += wdt;
        }

        cell.time += cfg.dt;
        acc.time_effective += cfg.dt;
        if ((k - burn_steps + 1) % batch_len == 0 &&
            static_cast<int>(acc.cells.size()) < cfg.batches_per_path) {
            acc.cells.push_back(cell);
            reset_cell();
        }
    }
}

}  // namespace

EmpiricalMeasures run(const ModelParams& m, const SimConfig& cfg) {
    if (cfg.dt <= 0.0) throw SimulationError("dt must be positive");
    const double burn = (cfg.burn_in < 0.0) ? 0.1 * cfg.horizon : cfg.burn_in;
    if (burn >= cfg.horizon) throw SimulationError("burn_in must be below horizon");
    if (cfg.n_paths < 1) throw SimulationError("need at least one path");

    int n_threads = cfg.n_threads;
    if (n_threads <= 0) {
        if (const char* env = std::getenv("RBM_THREADS")) n_threads = std::atoi(env);
        if (n_threads <= 0)
            n_threads = static_cast<int>(std::thread::hardware_concurrency());
        if (n_threads <= 0) n_threads = 1;
    }
    n_threads = std::min(n_threads, cfg.n_paths);

    std::vector<PathAccumulator> per_path(cfg.n_paths);
    auto worker = [&](int first, int stride) {
        for (int i = first; i < cfg.n_paths; i += stride) run_path(m, cfg, i, per_path[i]);
    };
    if (n_threads == 1) {
        worker(0, 1);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker, t, n_threads);
        for (auto& th : pool) th.join();
    }

    // deterministic merge in path order
    EmpiricalMeasures out;
    out.config = cfg;
    out.params = m;
    const HistSpec& hs = cfg.hist;
    out.hist.assign(static_cast<size_t>(hs.nx) * hs.ny, 0.0);
    out.hist_s1.assign(static_cast<size_t>(hs.nx) * hs.ny, 0.0);
    out.boundary1.assign(hs.n_boundary_bins, 0.0);
    out.boundary2.assign(hs.n_boundary_bins, 0.0);
    out.coarse_nx = kCoarseNx;
    out.coarse_ny = kCoarseNy;
    for (const auto& pa : per_path) {
        for (size_t i = 0; i < out.hist.size(); ++i) {
            out.hist[i] += pa.hist[i];
            out.hist_s1[i] += pa.hist_s1[i];
        }
        for (size_t i = 0; i < out.boundary1.size(); ++i) {
            out.boundary1[i] += pa.boundary1[i];
            out.boundary2[i] += pa.boundary2[i];
        }
        out.mass_in_range += pa.mass_in_range;
        out.mass_s1 += pa.mass_s1;
        out.mass_s2 += pa.mass_s2;
        out.time_effective += pa.time_effective;
        out.corner_resamples += pa.corner_resamples;
        out.cells.insert(out.cells.end(), pa.cells.begin(), pa.cells.end());
    }
    const double t_eff = out.time_effective;
    const double area = out.bin_area();
    for (auto& v : out.hist) v /= t_eff * area;  // density per unit area
    for (auto& v : out.hist_s1) v /= t_eff * area;
    const double dxb = hs.boundary_extent / hs.n_boundary_bins;
    for (auto& v : out.boundary1) v /= t_eff * dxb;  // density per unit length
    for (auto& v : out.boundary2) v /= t_eff * dxb;
    out.mass_in_range /= t_eff;
    out.mass_s1 /= t_eff;
    out.mass_s2 /= t_eff;

    // local-time rates with batch-means SE
    double s1 = 0.0, s2 = 0.0;
    for (const auto& c : out.cells) {
        s1 += c.l1_sum / c.time;
        s2 += c.l2_sum / c.time;
    }
    const double n_cells = static_cast<double>(out.cells.size());
    out.l1_rate = s1 / n_cells;
    out.l2_rate = s2 / n_cells;
    double ss1 = 0.0, ss2 = 0.0;
    for (const auto& c : out.cells) {
        ss1 += (c.l1_sum / c.time - out.l1_rate) * (c.l1_sum / c.time - out.l1_rate);
        ss2 += (c.l2_sum / c.time - out.l2_rate) * (c.l2_sum / c.time - out.l2_rate);
    }
    out.l1_rate_se = std::sqrt(ss1 / (n_cells - 1.0) / n_cells);
    out.l2_rate_se = std::sqrt(ss2 / (n_cells - 1.0) / n_cells);
    return out;
}

namespace {

int panel_index(double x, double y) {
    const auto panel = transform_panel();
    for (size_t i = 0; i < panel.size(); ++i)
        if (panel[i].first == x && panel[i].second == y) return static_cast<int>(i);
    return -1;
}

int axis_index(double x) {
    const double xs[5] = {-2.0, -1.0, 0.0, 1.0, 2.0};
    for (int i = 0; i < 5; ++i)
        if (xs[i] == x) return i;
    return -1;
}

struct MeanSe {
    Complex mean;
    double se;
};

template <typename Get>
MeanSe cell_stat(const std::vector<EmpiricalMeasures::BatchCell>& cells, Get get) {
    Complex sum = 0.0;
    for (const auto& c : cells) sum += get(c);
    const double n = static_cast<double>(cells.size());
    const Complex mean = sum / n;
    double var = 0.0;
    for (const auto& c : cells) var += std::norm(get(c) - mean);
    return MeanSe{mean, std::sqrt(var / (n - 1.0) / n)};
}

}  // namespace

EmpiricalTransform empirical_transform(const EmpiricalMeasures& meas, double x, double y) {
    const int ip = panel_index(x, y);
    if (ip < 0)
        throw SimulationError("empirical_transform: (x, y) not on the fixed panel");
    const int jx = axis_index(x), jy = axis_index(y);

    EmpiricalTransform out;
    out.x = x;
    out.y = y;
    auto Lf = cell_stat(meas.cells, [&](const auto& c) { return c.lhat[ip] / c.weight; });
    auto L1 = cell_stat(meas.cells, [&](const auto& c) { return c.lhat_s1[ip] / c.weight; });
    auto A = cell_stat(meas.cells, [&](const auto& c) { return c.ahat[jx] / c.time; });
    auto B = cell_stat(meas.cells, [&](const auto& c) { return c.bhat[jy] / c.time; });
    out.L = Lf.mean;
    out.se_L = Lf.se;
    out.L1 = L1.mean;
    out.se_L1 = L1.se;
    out.L2 = Lf.mean - L1.mean;
    out.se_L2 = std::sqrt(Lf.se * Lf.se + L1.se * L1.se);
    out.A = A.mean;
    out.se_A = A.se;
    out.B = B.mean;
    out.se_B = B.se;
    return out;
}

ValidationReport validation_report(const Transforms& tr, const EmpiricalMeasures& meas,
                                   const EmpiricalMeasures* coarse_dt) {
    const ModelParams& m = tr.side_A().params();
    ValidationReport rep;
    for (const auto& [x, y] : transform_panel()) {
        const Complex p(0.0, x), q(0.0, y);
        EmpiricalTransform et = empirical_transform(meas, x, y);
        Complex L = et.L, L1 = et.L1, L2 = et.L2;
        double se_L = et.se_L, se_L1 = et.se_L1, se_L2 = et.se_L2;
        if (coarse_dt) {
            // Richardson in dt: eliminates the O(dt) weak bias of the scheme
            EmpiricalTransform ec = empirical_transform(*coarse_dt, x, y);
            L = 2.0 * et.L - ec.L;
            L1 = 2.0 * et.L1 - ec.L1;
            L2 = 2.0 * et.L2 - ec.L2;
            se_L = std::sqrt(4.0 * et.se_L * et.se_L + ec.se_L * ec.se_L);
            se_L1 = std::sqrt(4.0 * et.se_L1 * et.se_L1 + ec.se_L1 * ec.se_L1);
            se_L2 = std::sqrt(4.0 * et.se_L2 * et.se_L2 + ec.se_L2 * ec.se_L2);
        }
        const Complex K = kernel_K(m, p, q);
        const Complex u = reflection_u(m, p, q);
        const Complex v = reflection_v(m, p, q);
        const Complex A =
            (x == 0.0) ? Complex(tr.side_A().prefactor()) : tr.eval_A(p).value;
        const Complex B =
            (y == 0.0) ? Complex(tr.side_B().prefactor()) : tr.eval_B(q).value;

        ValidationRow row;
        row.x = x;
        row.y = y;
        row.residual = K * L + u * A + v * B;
        row.se = std::abs(K) * se_L + 1e-12;
        row.pass = std::abs(row.residual) <= 3.0 * row.se;
        row.F1 = K * L1 + u * A;
        row.F2 = -K * L2 - v * B;
        row.se_F = std::abs(K) * (se_L1 + se_L2) + 1e-12;
        row.pass_F = std::abs(row.F1 - row.F2) <= 3.0 * row.se_F;
        rep.rows.push_back(row);
        rep.n_pass += row.pass ? 1 : 0;
        rep.n_pass_F += row.pass_F ? 1 : 0;
        rep.max_residual_over_se =
            std::max(rep.max_residual_over_se, std::abs(row.residual) / row.se);
    }
    return rep;
}

}  // namespace rbm
