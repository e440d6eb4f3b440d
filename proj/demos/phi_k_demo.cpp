// Walkthrough: build nu*log|z|, lift it to the symmetrized difference tower,
// and compare the exact invariants with the numeric estimators.

#include "lelong/estimators.hpp"
#include "lelong/newton.hpp"
#include "lelong/serialize.hpp"

#include <cstdio>

using namespace lelong;

int main() {
    const int nu = 2;
    auto base = PshExpr::monomial_log(Rational(nu), {Rational(1)});
    auto lifted = symmetrized_tower(base, 1);

    std::printf("base:   %s\n", expr_to_json(base).dump().c_str());
    std::printf("lifted arity: %d\n", lifted.arity());

    const CVector zw{Complex(0.3, 0.0), Complex(0.1, 0.0)};
    std::printf("lifted(0.3, 0.1) = %.12f   (closed form %.12f)\n", eval(lifted, zw),
                nu * std::log(0.4));

    const CVector o2{Complex(0, 0), Complex(0, 0)};
    const auto nu_exact = lelong_exact(lifted, o2);
    const auto cert = lct_exact(lifted, o2);
    std::printf("nu at the origin (exact rule): %s\n", format_rational(nu_exact.rlo).c_str());
    std::printf("threshold certificate: [%s, %s]\n", format_rational(cert.rlo).c_str(),
                format_rational(cert.rhi).c_str());

    AnnulusSchedule sched;
    const auto nu_hat = lelong_numeric(lifted, o2, sched);
    const auto c_hat = lct_numeric(lifted, o2, Bracket{0.25, 4.0}, 0.02, sched);
    std::printf("nu estimate:  %.4f +- %.4f\n", nu_hat.mid(), nu_hat.halfwidth());
    std::printf("lct estimate: [%.4f, %.4f]  (true threshold %.4f)\n", c_hat.nlo, c_hat.nhi,
                2.0 / nu);
    return 0;
}
