// Walks the k = 24 worked case for (p, a, s_eps) = (7, 2, 1) through the library.

#include <ghostslopes/ghostslopes.hpp>

#include <iostream>

using namespace ghost;

int main() {
    GhostContext ctx(7, 2, 1);
    auto k = ctx.weight(24);

    for (std::int64_t n = 1; n <= 4; ++n) std::cout << render_ghost(ghost_polynomial(ctx, n)) << "\n";

    auto dp = derivative_polygon(ctx, k);
    std::cout << "\nderivative polygon: " << to_json(*dp).dump() << "\n";

    for (Rational nu : {Rational(3, 2), Rational(4), Rational(10)}) {
        std::cout << "newslopes at v_p(w - w_24) = " << to_string(nu) << ":";
        for (const auto& s : k_newslopes(ctx, k, WeightPoint{k, Valuation(nu)})) std::cout << " " << to_string(s);
        std::cout << "\n";
    }

    std::cout << "thresholds: " << to_json(k_thresholds(ctx, k)).dump() << "\n";
    std::cout << "prediction: " << to_json(predict_slopes(ctx, k)).dump() << "\n";

    auto z = sample(ctx, k, SampleKind::threshold);
    std::cout << "Z_24 mean " << to_string(z.moment(1)) << ", discrepancy " << to_string(discrepancy(z)) << "\n";
}
