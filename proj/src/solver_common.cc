#include "solver_common.h"

#include "sego/rng.h"

#include <algorithm>

namespace sego::detail {

namespace {

std::array<MultiPoly, 9> build_quat_polys() {
    auto mono = [](int i, int j) {
        Monomial m;
        m.e[i]++;
        m.e[j]++;
        return m;
    };
    const int a = 0, b = 1, c = 2, d = 3;
    std::array<MultiPoly, 9> R;
    auto set = [&](int k, std::initializer_list<std::pair<Monomial, double>> terms) {
        for (const auto &[m, coef] : terms)
            R[k].add_term(m, coef);
        R[k].normalize();
    };
    set(0, {{mono(a, a), 1}, {mono(b, b), 1}, {mono(c, c), -1}, {mono(d, d), -1}});
    set(1, {{mono(b, c), 2}, {mono(a, d), -2}});
    set(2, {{mono(b, d), 2}, {mono(a, c), 2}});
    set(3, {{mono(b, c), 2}, {mono(a, d), 2}});
    set(4, {{mono(a, a), 1}, {mono(b, b), -1}, {mono(c, c), 1}, {mono(d, d), -1}});
    set(5, {{mono(c, d), 2}, {mono(a, b), -2}});
    set(6, {{mono(b, d), 2}, {mono(a, c), -2}});
    set(7, {{mono(c, d), 2}, {mono(a, b), 2}});
    set(8, {{mono(a, a), 1}, {mono(b, b), -1}, {mono(c, c), -1}, {mono(d, d), 1}});
    return R;
}

MultiPoly drop_first_variable(const MultiPoly &p) {
    MultiPoly q;
    for (const auto &[m, c] : p.terms)
        q.add_term(Monomial(m.e[1], m.e[2], m.e[3], 0), c);
    q.normalize();
    return q;
}

} // namespace

const std::array<MultiPoly, 9> &rotation_polys_quat() {
    static const std::array<MultiPoly, 9> R = build_quat_polys();
    return R;
}

const std::array<MultiPoly, 9> &rotation_polys_tilde() {
    static const std::array<MultiPoly, 9> R = [] {
        std::array<MultiPoly, 9> out;
        const auto &Q = rotation_polys_quat();
        for (int k = 0; k < 9; ++k)
            out[k] = drop_first_variable(Q[k]); // a = 1
        return out;
    }();
    return R;
}

MultiPoly rotation_combination(const Vec9 &w, bool tilde) {
    const auto &R = tilde ? rotation_polys_tilde() : rotation_polys_quat();
    MultiPoly p;
    for (int k = 0; k < 9; ++k)
        if (w[k] != 0.0)
            for (const auto &[m, c] : R[k].terms)
                p.add_term(m, w[k] * c);
    p.normalize();
    return p;
}

TriFeature triangulate_feature(const CanonicalFeature &f, const Eigen::Vector3d &baseline) {
    TriFeature tf;
    tf.f = f;
    StereoRig rig{baseline};
    if (f.is_point) {
        tf.X = triangulate_point(f.main_obs[0], f.main_obs[1], rig);
    } else {
        auto [P, P2] = triangulate_line(f.main_obs[0], f.main_obs[1], rig);
        tf.P = P;
        tf.V = P2 - P;
    }
    return tf;
}

Anchor make_anchor(const TriFeature &anchor_point, const Eigen::Vector3d &cam2_baseline) {
    Anchor a;
    a.S = anchor_point.X;
    a.u = anchor_point.f.third_obs;
    a.third_view = anchor_point.f.third_view;
    a.c0 = (a.third_view == 2) ? cam2_baseline : Eigen::Vector3d::Zero().eval();
    return a;
}

std::array<FeatureSpec, 3> case_pattern(CaseId id) {
    using enum FeatureKind;
    switch (id) {
    case CaseId::S3P:
        return {{{Point, 1, 1}, {Point, 1, 2}, {Point, 1, 2}}};
    case CaseId::S2P1L:
        return {{{Point, 1, 1}, {Point, 1, 2}, {Line, 1, 1}}};
    case CaseId::S1P2L:
        return {{{Point, 1, 1}, {Line, 1, 2}, {Line, 1, 2}}};
    case CaseId::S3L:
        return {{{Line, 1, 1}, {Line, 1, 1}, {Line, 1, 2}}};
    case CaseId::S2L1L:
        return {{{Line, 1, 1}, {Line, 1, 1}, {Line, 2, 2}}};
    case CaseId::S2P_1L:
        return {{{Point, 1, 1}, {Point, 1, 2}, {Line, 2, 2}}};
    case CaseId::S1P1L_1P:
        return {{{Point, 1, 1}, {Line, 1, 1}, {Point, 2, 2}}};
    case CaseId::S1P_2L:
        return {{{Point, 1, 1}, {Line, 2, 1}, {Line, 2, 2}}};
    case CaseId::S1P1L_1L:
        return {{{Point, 1, 1}, {Line, 1, 2}, {Line, 2, 1}}};
    case CaseId::S2P_1P:
        return {{{Point, 1, 1}, {Point, 1, 2}, {Point, 2, 1}}};
    }
    throw_invalid_input("unknown case id");
}

namespace {

Eigen::Vector3d sample_box_point(Rng &rng) {
    return {rng.uniform(-1.5, 2.5), rng.uniform(-1.5, 2.5), rng.uniform(12.0, 16.0)};
}

} // namespace

CannedInstance canned_instance(CaseId id, uint64_t seed) {
    Rng rng(derive_seed(seed, {0x5e60u, static_cast<uint64_t>(id)}));
    auto pattern = case_pattern(id);

    for (int attempt = 0; attempt < 64; ++attempt) {
        double angle = rng.uniform(5.0, 35.0) * M_PI / 180.0;
        Eigen::Vector3d axis = rng.unit_vector();
        Quaternion q{std::cos(angle / 2), std::sin(angle / 2) * axis.x(),
                     std::sin(angle / 2) * axis.y(), std::sin(angle / 2) * axis.z()};
        Pose gt(quat_to_rotation(q), rng.uniform(2.0, 6.0) * rng.unit_vector());

        CannedInstance inst;
        inst.gt = gt;
        bool ok = true;
        for (int i = 0; i < 3 && ok; ++i) {
            const FeatureSpec &spec = pattern[i];
            std::array<ViewId, 3> views = {ViewId{spec.main_cam, 1}, ViewId{spec.main_cam, 2},
                                           ViewId{3 - spec.main_cam, spec.third_view}};
            FeatureTriplet f;
            f.kind = spec.kind;
            try {
                if (spec.kind == FeatureKind::Point) {
                    Eigen::Vector3d X = sample_box_point(rng);
                    for (int v = 0; v < 3; ++v)
                        f.obs[v] = {project_point(gt, views[v], X), views[v]};
                } else {
                    Eigen::Vector3d E1 = sample_box_point(rng);
                    Eigen::Vector3d E2 = E1 + rng.uniform(0.5, 1.5) * rng.unit_vector();
                    for (int v = 0; v < 3; ++v) {
                        Eigen::Vector3d p1 = project_point(gt, views[v], E1);
                        Eigen::Vector3d p2 = project_point(gt, views[v], E2);
                        Eigen::Vector3d l = p1.cross(p2);
                        double n = l.head<2>().norm();
                        if (n < 1e-9)
                            throw_degenerate_triangulation("line through the view center");
                        f.obs[v] = {l / n, views[v]};
                    }
                }
            } catch (const Error &) {
                ok = false;
                break;
            }
            inst.features[i] = f;
        }
        if (ok)
            return inst;
    }
    throw_configuration_infeasible("canned_instance: could not realize the case pattern");
}

std::vector<Pose> order_candidates(std::vector<Candidate> cands) {
    std::stable_sort(cands.begin(), cands.end(), [](const Candidate &x, const Candidate &y) {
        bool px = x.alpha > 0.0, py = y.alpha > 0.0;
        if (px != py)
            return px;
        return x.residual < y.residual;
    });
    std::vector<Pose> out;
    out.reserve(cands.size());
    for (auto &c : cands)
        out.push_back(c.pose);
    return out;
}

} // namespace sego::detail
