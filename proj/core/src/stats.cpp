#include "scimatch/stats.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace scimatch {

// ---------------------------------------------------------------------------
// order statistics

double percentile_nearest_rank(std::vector<double> v, double p) {
    if (v.empty()) throw std::invalid_argument("percentile of empty sample");
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("percentile fraction out of (0,1]");
    size_t rank = static_cast<size_t>(std::ceil(p * static_cast<double>(v.size())));
    if (rank == 0) rank = 1;
    std::nth_element(v.begin(), v.begin() + (rank - 1), v.end());
    return v[rank - 1];
}

double median_upper(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample");
    size_t idx = v.size() / 2;  // upper middle for even n, middle for odd
    std::nth_element(v.begin(), v.begin() + idx, v.end());
    return v[idx];
}

// ---------------------------------------------------------------------------
// moments

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_var(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double population_var(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size());
}

// ---------------------------------------------------------------------------
// special functions: regularized incomplete beta, for Student-t p-values

namespace {

double betacf(double a, double b, double x) {
    // Lentz's continued fraction
    const double tiny = 1e-300;
    const double eps = 1e-14;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) break;
    }
    return h;
}

double incbeta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                b * std::log(1.0 - x);
    double front = std::exp(ln);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
    return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_two_sided_p(double t, double df) {
    if (!(df > 0)) return 1.0;
    if (std::isinf(t)) return 0.0;
    double x = df / (df + t * t);
    double p = incbeta(df / 2.0, 0.5, x);
    return std::clamp(p, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// balance and agreement

std::optional<double> smd(const std::vector<double>& a, const std::vector<double>& b) {
    double pooled = (sample_var(a) + sample_var(b)) / 2.0;
    double diff = mean_of(a) - mean_of(b);
    if (pooled <= 0.0) {
        if (diff == 0.0) return 0.0;
        return std::nullopt;
    }
    return diff / std::sqrt(pooled);
}

WelchResult welch_t(const std::vector<double>& a, const std::vector<double>& b) {
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double va = sample_var(a) / na, vb = sample_var(b) / nb;
    const double diff = mean_of(a) - mean_of(b);
    WelchResult r;
    if (va + vb <= 0.0) {
        r.df = na + nb - 2.0;
        if (diff == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
        } else {
            r.t = diff > 0 ? std::numeric_limits<double>::infinity()
                           : -std::numeric_limits<double>::infinity();
            r.p = 0.0;
        }
        return r;
    }
    r.t = diff / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
    r.p = student_t_two_sided_p(r.t, r.df);
    return r;
}

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    double mx = mean_of(x), my = mean_of(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

double ccc(const std::vector<double>& x, const std::vector<double>& y) {
    // computed through the covariance form 2*cov / (vx + vy + bias^2) so
    // that ccc(x, x) comes out exactly 1
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("ccc: length mismatch");
    const double n = static_cast<double>(x.size());
    double mx = mean_of(x), my = mean_of(y);
    double cov = 0, vx = 0, vy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        cov += (x[i] - mx) * (y[i] - my);
        vx += (x[i] - mx) * (x[i] - mx);
        vy += (y[i] - my) * (y[i] - my);
    }
    cov /= n;
    vx /= n;
    vy /= n;
    double den = vx + vy + (mx - my) * (mx - my);
    if (den == 0.0) return 1.0;  // both constant and equal
    return 2.0 * cov / den;
}

// ---------------------------------------------------------------------------
// PCA

Pca3Result pca3(const std::vector<std::array<double, 3>>& rows,
                const std::array<std::string, 3>& column_names) {
    if (rows.size() < 3) throw std::invalid_argument("pca3 needs at least 3 rows");
    const size_t n = rows.size();
    std::array<double, 3> mean{}, sd{};
    for (const auto& r : rows)
        for (int j = 0; j < 3; ++j) mean[j] += r[j];
    for (int j = 0; j < 3; ++j) mean[j] /= static_cast<double>(n);
    for (const auto& r : rows)
        for (int j = 0; j < 3; ++j) sd[j] += (r[j] - mean[j]) * (r[j] - mean[j]);
    for (int j = 0; j < 3; ++j) {
        sd[j] = std::sqrt(sd[j] / static_cast<double>(n - 1));
        if (sd[j] <= 0.0)
            throw std::runtime_error("pca3: column '" + column_names[j] + "' is constant");
    }
    Eigen::Matrix3d corr = Eigen::Matrix3d::Zero();
    for (const auto& r : rows) {
        Eigen::Vector3d z((r[0] - mean[0]) / sd[0], (r[1] - mean[1]) / sd[1],
                          (r[2] - mean[2]) / sd[2]);
        corr += z * z.transpose();
    }
    corr /= static_cast<double>(n - 1);

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(corr);
    if (es.info() != Eigen::Success) throw std::runtime_error("pca3: eigensolver failed");

    Pca3Result out;
    // Eigen sorts ascending; report descending, sign fixed so the largest
    // component of each loading vector is positive
    for (int k = 0; k < 3; ++k) {
        int src = 2 - k;
        out.eigenvalues[k] = es.eigenvalues()(src);
        Eigen::Vector3d v = es.eigenvectors().col(src);
        int arg = 0;
        for (int j = 1; j < 3; ++j)
            if (std::fabs(v(j)) > std::fabs(v(arg))) arg = j;
        if (v(arg) < 0) v = -v;
        for (int j = 0; j < 3; ++j) out.loadings[k][j] = v(j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// fixed-effects OLS

const char* preset_name(ModelPreset m) {
    switch (m) {
        case ModelPreset::event_study: return "event_study";
        case ModelPreset::coevolution: return "coevolution";
        case ModelPreset::time_interaction: return "time_interaction";
        case ModelPreset::did_basic: return "did_basic";
        case ModelPreset::multi_prize: return "multi_prize";
        case ModelPreset::embeddedness: return "embeddedness";
        case ModelPreset::embed_innovation: return "embed_innovation";
    }
    return "?";
}

std::optional<ModelPreset> preset_from_name(const std::string& s) {
    for (ModelPreset m :
         {ModelPreset::event_study, ModelPreset::coevolution, ModelPreset::time_interaction,
          ModelPreset::did_basic, ModelPreset::multi_prize, ModelPreset::embeddedness,
          ModelPreset::embed_innovation})
        if (s == preset_name(m)) return m;
    return std::nullopt;
}

std::string significance_stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    return "";
}

namespace {

struct Design {
    std::vector<std::string> names;
    Eigen::MatrixXd X;
    Eigen::VectorXd y;
};

const char* position_name(AuthorPosition p) {
    switch (p) {
        case AuthorPosition::first: return "first";
        case AuthorPosition::middle: return "middle";
        case AuthorPosition::last: return "last";
    }
    return "?";
}

std::string team_label(int bin) { return bin > 5 ? ">5" : std::to_string(bin); }

// which blocks a preset uses
struct PresetShape {
    bool w = false, w_post = false, w_multi = false, post = false;
    bool covariates = false;
    bool fe_prize = false, fe_team = false, fe_group = false, fe_position = false;
    bool fe_year = false, fe_scientist = false;
    bool w_year = false;  // prizewinner x year-bin dummies, bin 0 omitted
};

PresetShape shape_of(ModelPreset m) {
    PresetShape s;
    switch (m) {
        case ModelPreset::event_study:
            s.covariates = s.w_year = s.fe_team = s.fe_scientist = s.fe_year = true;
            break;
        case ModelPreset::coevolution:
            s.covariates = s.w = s.w_post = true;
            s.fe_prize = s.fe_team = s.fe_group = s.fe_position = s.fe_year = true;
            break;
        case ModelPreset::time_interaction:
            s.covariates = s.w = s.w_year = true;
            s.fe_prize = s.fe_team = s.fe_group = s.fe_position = true;
            break;
        case ModelPreset::did_basic:
            s.w = s.w_post = true;
            s.fe_prize = s.fe_team = s.fe_group = s.fe_position = s.fe_year = true;
            break;
        case ModelPreset::multi_prize:
            s.covariates = s.w_multi = s.w_post = true;
            s.fe_prize = s.fe_team = s.fe_group = s.fe_position = s.fe_year = true;
            break;
        case ModelPreset::embeddedness:
            s.w = s.w_post = s.post = true;
            s.fe_prize = s.fe_team = s.fe_group = true;
            break;
        case ModelPreset::embed_innovation:
            s.covariates = s.w = s.w_post = true;
            s.fe_prize = s.fe_team = s.fe_group = s.fe_position = s.fe_year = true;
            break;
    }
    return s;
}

Design build_design(const std::vector<RegressionRow>& rows, ModelPreset preset) {
    if (rows.empty()) throw std::invalid_argument("fe_ols: no rows");
    const PresetShape shape = shape_of(preset);
    const size_t n = rows.size();

    for (const auto& r : rows)
        if (r.covariates.size() != rows.front().covariates.size())
            throw std::invalid_argument("fe_ols: rows disagree on covariate list");
    for (size_t j = 0; j < rows.front().covariates.size(); ++j)
        for (const auto& r : rows)
            if (r.covariates[j].first != rows.front().covariates[j].first)
                throw std::invalid_argument("fe_ols: rows disagree on covariate names");

    std::set<std::string> prizes, groups, scientists;
    std::set<int> teams, years;
    std::set<int> positions;
    for (const auto& r : rows) {
        prizes.insert(r.prize);
        groups.insert(r.group);
        scientists.insert(r.scientist);
        teams.insert(r.team_bin);
        years.insert(r.py_bin);
        positions.insert(static_cast<int>(r.position));
    }

    struct Col {
        std::string name;
        std::function<double(const RegressionRow&)> f;
    };
    std::vector<Col> cols;
    cols.push_back({"(Intercept)", [](const RegressionRow&) { return 1.0; }});
    if (shape.w)
        cols.push_back({"prizewinner", [](const RegressionRow& r) { return r.w ? 1.0 : 0.0; }});
    if (shape.w_post)
        cols.push_back({"prizewinner_x_post",
                        [](const RegressionRow& r) { return (r.w && r.post) ? 1.0 : 0.0; }});
    if (shape.w_multi)
        cols.push_back({"prizewinner_x_multi",
                        [](const RegressionRow& r) { return (r.w && r.multi) ? 1.0 : 0.0; }});
    if (shape.post)
        cols.push_back({"post", [](const RegressionRow& r) { return r.post ? 1.0 : 0.0; }});
    if (shape.covariates)
        for (size_t j = 0; j < rows.front().covariates.size(); ++j)
            cols.push_back({rows.front().covariates[j].first,
                            [j](const RegressionRow& r) { return r.covariates[j].second; }});
    if (shape.w_year)
        for (int y : years) {
            if (y == 0) continue;  // reference: the prizewinning-year bin
            cols.push_back({"prizewinner_x_year_bin=" + std::to_string(y),
                            [y](const RegressionRow& r) {
                                return (r.w && r.py_bin == y) ? 1.0 : 0.0;
                            }});
        }

    auto add_dummies = [&cols](const auto& levels, const std::string& prefix, auto key_of,
                               auto label_of) {
        bool first = true;
        for (const auto& lv : levels) {
            if (first) {  // reference level
                first = false;
                continue;
            }
            cols.push_back({prefix + "=" + label_of(lv), [lv, key_of](const RegressionRow& r) {
                                return key_of(r) == lv ? 1.0 : 0.0;
                            }});
        }
    };
    if (shape.fe_prize)
        add_dummies(prizes, "prize", [](const RegressionRow& r) { return r.prize; },
                    [](const std::string& s) { return s; });
    if (shape.fe_team)
        add_dummies(teams, "team", [](const RegressionRow& r) { return r.team_bin; },
                    [](int t) { return team_label(t); });
    if (shape.fe_group)
        add_dummies(groups, "group", [](const RegressionRow& r) { return r.group; },
                    [](const std::string& s) { return s; });
    if (shape.fe_position)
        add_dummies(positions, "position",
                    [](const RegressionRow& r) { return static_cast<int>(r.position); },
                    [](int p) { return std::string(position_name(static_cast<AuthorPosition>(p))); });
    if (shape.fe_scientist)
        add_dummies(scientists, "scientist", [](const RegressionRow& r) { return r.scientist; },
                    [](const std::string& s) { return s; });
    if (shape.fe_year)
        add_dummies(years, "year_bin", [](const RegressionRow& r) { return r.py_bin; },
                    [](int y) { return std::to_string(y); });

    Design d;
    d.names.reserve(cols.size());
    for (const auto& c : cols) d.names.push_back(c.name);
    d.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
    d.y.resize(static_cast<Eigen::Index>(n));
    for (size_t i = 0; i < n; ++i) {
        d.y(static_cast<Eigen::Index>(i)) = rows[i].outcome;
        for (size_t j = 0; j < cols.size(); ++j)
            d.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j].f(rows[i]);
    }
    return d;
}

}  // namespace

RegressionFit fe_ols(const std::vector<RegressionRow>& rows, ModelPreset preset) {
    Design d = build_design(rows, preset);
    const Eigen::Index n = d.X.rows(), p = d.X.cols();

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d.X);
    qr.setThreshold(1e-10);
    const Eigen::Index rank = qr.rank();

    std::vector<Eigen::Index> kept(qr.colsPermutation().indices().data(),
                                   qr.colsPermutation().indices().data() + p);
    std::vector<Eigen::Index> kept_cols(kept.begin(), kept.begin() + rank);
    std::vector<Eigen::Index> dropped_cols(kept.begin() + rank, kept.end());
    std::sort(kept_cols.begin(), kept_cols.end());
    std::sort(dropped_cols.begin(), dropped_cols.end());

    if (n <= rank) {
        throw std::runtime_error("fe_ols: underdetermined system, " + std::to_string(n) +
                                 " rows for rank " + std::to_string(rank) + " design");
    }

    Eigen::MatrixXd Xk(n, rank);
    for (Eigen::Index j = 0; j < rank; ++j) Xk.col(j) = d.X.col(kept_cols[static_cast<size_t>(j)]);

    Eigen::HouseholderQR<Eigen::MatrixXd> fit(Xk);
    Eigen::VectorXd beta = fit.solve(d.y);
    Eigen::VectorXd resid = d.y - Xk * beta;

    // HC1 sandwich: (X'X)^-1 X' diag(e^2) X (X'X)^-1 * n/(n-rank)
    Eigen::MatrixXd R = fit.matrixQR().topRows(rank).triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv =
        R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(rank, rank));
    Eigen::MatrixXd XtXinv = Rinv * Rinv.transpose();
    Eigen::MatrixXd Xe = Xk.array().colwise() * resid.array();  // rows scaled by residuals
    Eigen::MatrixXd meat = Xe.transpose() * Xe;                 // X' diag(e^2) X
    double dof_scale = static_cast<double>(n) / static_cast<double>(n - rank);
    Eigen::MatrixXd cov = dof_scale * XtXinv * meat * XtXinv;

    RegressionFit out;
    out.n = static_cast<size_t>(n);
    out.rank = static_cast<size_t>(rank);
    out.residuals.assign(resid.data(), resid.data() + n);
    for (Eigen::Index j : dropped_cols) out.dropped.push_back(d.names[static_cast<size_t>(j)]);

    const double df = static_cast<double>(n - rank);
    for (Eigen::Index j = 0; j < rank; ++j) {
        RegressionTerm term;
        term.name = d.names[static_cast<size_t>(kept_cols[static_cast<size_t>(j)])];
        term.estimate = beta(j);
        term.se = std::sqrt(std::max(0.0, cov(j, j)));
        term.t = term.se > 0 ? term.estimate / term.se : 0.0;
        term.p = term.se > 0 ? student_t_two_sided_p(term.t, df) : 1.0;
        out.terms.push_back(std::move(term));
    }

    double sse = resid.squaredNorm();
    double ybar = d.y.mean();
    double sst = (d.y.array() - ybar).square().sum();
    out.r2 = sst > 0 ? std::clamp(1.0 - sse / sst, 0.0, 1.0) : 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// trajectories

std::vector<TrajectorySeries> trajectory(const std::vector<TrajectoryObs>& obs,
                                         const std::string& metric, int window_lo,
                                         int window_hi) {
    if (window_lo > window_hi) throw std::invalid_argument("trajectory: window bounds reversed");
    struct Acc {
        long long n = 0;
        double sum = 0, sumsq = 0;
    };
    std::map<std::string, std::map<int, Acc>> acc;
    for (const auto& o : obs) {
        if (o.rel_year < window_lo || o.rel_year > window_hi) continue;
        Acc& a = acc[o.group][o.rel_year];
        ++a.n;
        a.sum += o.value;
        a.sumsq += o.value * o.value;
    }
    std::vector<TrajectorySeries> out;
    for (const auto& [group, by_year] : acc) {
        TrajectorySeries series;
        series.group = group;
        series.metric = metric;
        for (const auto& [year, a] : by_year) {
            TrajectoryPoint pt;
            pt.rel_year = year;
            pt.n = a.n;
            pt.mean = a.sum / static_cast<double>(a.n);
            if (a.n >= 2) {
                double var =
                    (a.sumsq - a.sum * a.sum / static_cast<double>(a.n)) /
                    static_cast<double>(a.n - 1);
                double half = 1.96 * std::sqrt(std::max(0.0, var) / static_cast<double>(a.n));
                pt.ci_low = pt.mean - half;
                pt.ci_high = pt.mean + half;
            }
            series.points.push_back(pt);
        }
        out.push_back(std::move(series));
    }
    return out;
}

}  // namespace scimatch
