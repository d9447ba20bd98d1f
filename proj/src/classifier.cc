#include "sego/classifier.h"

#include <algorithm>

namespace sego {

std::string case_name(CaseId id) {
    switch (id) {
    case CaseId::S3P:
        return "S3P";
    case CaseId::S2P1L:
        return "S2P1L";
    case CaseId::S1P2L:
        return "S1P2L";
    case CaseId::S3L:
        return "S3L";
    case CaseId::S2L1L:
        return "S2L-1L";
    case CaseId::S2P_1L:
        return "S2P-1L";
    case CaseId::S1P1L_1P:
        return "S1P1L-1P";
    case CaseId::S1P_2L:
        return "S1P-2L";
    case CaseId::S1P1L_1L:
        return "S1P1L-1L";
    case CaseId::S2P_1P:
        return "S2P-1P";
    }
    throw_invalid_input("unknown case id");
}

CaseId case_from_name(const std::string &name) {
    static const std::array<CaseId, kNumCases> all = {
        CaseId::S3P,      CaseId::S2P1L,   CaseId::S1P2L,    CaseId::S3L,      CaseId::S2L1L,
        CaseId::S2P_1L,   CaseId::S1P1L_1P, CaseId::S1P_2L,  CaseId::S1P1L_1L, CaseId::S2P_1P};
    for (CaseId id : all)
        if (case_name(id) == name)
            return id;
    throw_invalid_input("unknown case name: " + name);
}

Route solver_route(CaseId id) {
    switch (id) {
    case CaseId::S3L:
    case CaseId::S2L1L:
        return Route::EasyLines;
    case CaseId::S3P:
    case CaseId::S2P1L:
    case CaseId::S1P2L:
        return Route::EasyGp3p;
    default:
        return Route::Hard;
    }
}

bool is_hard(CaseId id) { return solver_route(id) == Route::Hard; }

namespace {

struct Counts {
    int p1 = 0, l1 = 0, p2 = 0, l2 = 0;
    bool operator==(const Counts &) const = default;
};

Counts count_features(const std::array<FeatureTriplet, 3> &features, bool swapped) {
    Counts c;
    for (const auto &f : features) {
        int main = f.main_camera();
        if (swapped)
            main = 3 - main;
        if (f.is_point())
            (main == 1 ? c.p1 : c.p2)++;
        else
            (main == 1 ? c.l1 : c.l2)++;
    }
    return c;
}

bool canonical_case(const Counts &c, CaseId *id) {
    static const std::pair<Counts, CaseId> table[] = {
        {{3, 0, 0, 0}, CaseId::S3P},      {{2, 1, 0, 0}, CaseId::S2P1L},
        {{1, 2, 0, 0}, CaseId::S1P2L},    {{0, 3, 0, 0}, CaseId::S3L},
        {{0, 2, 0, 1}, CaseId::S2L1L},    {{2, 0, 0, 1}, CaseId::S2P_1L},
        {{1, 1, 1, 0}, CaseId::S1P1L_1P}, {{1, 0, 0, 2}, CaseId::S1P_2L},
        {{1, 1, 0, 1}, CaseId::S1P1L_1L}, {{2, 0, 1, 0}, CaseId::S2P_1P},
    };
    for (const auto &[pattern, case_id] : table) {
        if (c == pattern) {
            *id = case_id;
            return true;
        }
    }
    return false;
}

} // namespace

CaseLabel classify(const std::array<FeatureTriplet, 3> &features) {
    for (const auto &f : features) {
        f.validate();
        f.main_camera();
    }

    CaseLabel label;
    Counts c = count_features(features, false);
    if (!canonical_case(c, &label.id)) {
        label.swap_cameras = true;
        Counts cs = count_features(features, true);
        if (!canonical_case(cs, &label.id))
            throw_invalid_input("feature combination matches no canonical case");
    }

    // Order: the anchor point (main camera 1 after swap) first where one is
    // required, then main-camera-1 features, then the rest; ties keep input
    // order.
    auto effective_main = [&](int i) {
        int m = features[i].main_camera();
        return label.swap_cameras ? 3 - m : m;
    };
    std::array<int, 3> order = {0, 1, 2};
    auto rank = [&](int i) {
        bool anchor_candidate = features[i].is_point() && effective_main(i) == 1;
        int r = 0;
        if (!anchor_candidate)
            r += 4;
        if (effective_main(i) != 1)
            r += 2;
        if (!features[i].is_point())
            r += 1;
        return r;
    };
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return rank(a) < rank(b); });
    label.feature_order = order;
    return label;
}

std::array<CanonicalFeature, 3> canonical_features(const std::array<FeatureTriplet, 3> &features,
                                                   const CaseLabel &label) {
    std::array<CanonicalFeature, 3> out;
    for (int k = 0; k < 3; ++k) {
        const FeatureTriplet &f = features[label.feature_order[k]];
        CanonicalFeature &cf = out[k];
        cf.is_point = f.is_point();
        int main = f.main_camera();
        cf.main_cam = label.swap_cameras ? 3 - main : main;
        for (const auto &o : f.obs) {
            int cam = label.swap_cameras ? 3 - o.view.camera : o.view.camera;
            if (cam == cf.main_cam) {
                cf.main_obs[o.view.view - 1] = o.v;
            } else {
                cf.third_view = o.view.view;
                cf.third_obs = o.v;
            }
        }
    }
    return out;
}

} // namespace sego
