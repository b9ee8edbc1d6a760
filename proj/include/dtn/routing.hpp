#pragma once

#include <unordered_map>

namespace dtn {

enum class RouterKind { Epidemic, Prophet, EvolvedEpidemic, EvolvedProphet };

inline bool is_prophet_kind(RouterKind k) {
    return k == RouterKind::Prophet || k == RouterKind::EvolvedProphet;
}

// Delivery-predictability update constants. secondsInTimeUnit comes from the
// settings file; the other three are The ONE's defaults for ProphetRouter.
struct ProphetParams {
    double p_init = 0.75;
    double beta = 0.25;
    double gamma = 0.98;
    double seconds_in_time_unit = 30.0;
};

// Per-host router bookkeeping. preds is only populated for Prophet kinds.
struct RouterState {
    RouterKind kind = RouterKind::Epidemic;
    std::unordered_map<int, double> preds;  // host id -> P in [0,1]
    double last_age_update = 0.0;

    double pred_for(int host) const {
        auto it = preds.find(host);
        return it == preds.end() ? 0.0 : it->second;
    }
};

// Direct-contact update: P(a,b) <- P + (1-P) * p_init.
void prophet_on_contact_direct(RouterState& a, int b_id, const ProphetParams& p);

// Transitive update through b: for every c in b's table (c != a),
// P(a,c) <- P + (1-P) * P(a,b) * P(b,c) * beta.
void prophet_on_contact_transitive(RouterState& a, int a_id, int b_id, const RouterState& b,
                                   const ProphetParams& p);

// Ages every predictability by gamma^k with k = floor(elapsed / time unit).
void prophet_age(RouterState& st, double now, const ProphetParams& p);

} // namespace dtn
