#include "qscaled/qseries_base.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace qscaled;
using testing_support::log2_rel;

namespace {

const std::vector<Complex>& a_grid() {
    static const std::vector<Complex> g = [] {
        ScopedPrecision sp(640);
        return std::vector<Complex>{Complex(Real("0.1")), Complex(1), Complex(Real(2), Real(1)), Complex(-3)};
    }();
    return g;
}

}  // namespace

TEST(QPoint, ValidatesAndCachesLogAndTau) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_THROW(QPoint(Real(0)), DomainError);
    EXPECT_THROW(QPoint(Real(1)), DomainError);
    EXPECT_THROW(QPoint(Real(-0.5)), DomainError);
    QPoint qp(Real("0.3"));
    EXPECT_TRUE(qp.log_q() < Real(0));
    EXPECT_TRUE(qp.tau().im > Real(0));
    // e^{pi i tau} reproduces q
    Complex back = exp(Complex(Real(0), Real::pi()) * qp.tau());
    EXPECT_LE(log2_rel(back, Complex(qp.q())), -ctx.precision_bits());
    EXPECT_THROW(QPoint::from_log(Real(0.1)), DomainError);
}

TEST(QPochFinite, Examples) {
    ScopedPrecision sp(288);
    EXPECT_TRUE(qpoch_finite(Complex(0), QPoint(0.5), 7).re == Real(1));
    EXPECT_TRUE(qpoch_finite(Complex(Real(3), Real(2)), QPoint(0.7), 0).re == Real(1));
    EXPECT_TRUE(qpoch_finite(Complex(Real(0.5)), QPoint(0.5), 2).re == Real(0.375));
}

TEST(QPochInfinite, Examples) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_TRUE(qpoch_infinite(Complex(0), QPoint(0.5), ctx).re == Real(1));

    Complex lib = qpoch_infinite(Complex(Real(0.5)), QPoint(0.5), ctx);
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = oracle::qpoch_inf(Complex(Real(0.5)), Real(0.5));
    }
    EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits());
}

TEST(QPochInfinite, ScaledNomeMatchesModularMainTerm) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    // q = e^{-2 pi / 16^{0.4}}; main term sqrt(X) exp(pi/12 (1/X - X)), X = 16^{0.4}
    Real X = pow(Real(16), Real(0.4));
    QPoint qp = QPoint::from_log(-ldexp(Real::pi(), 1) / X);
    Complex direct = qpoch_infinite(Complex(qp.q()), qp, ctx);
    Real main = sqrt(X) * exp(Real::pi() / Real(12) * (Real(1) / X - X));
    Real rel = abs(direct.re / main - Real(1));
    EXPECT_LE(rel, Real(10) * exp(-ldexp(Real::pi(), 1) * X));
}

TEST(QPochInfinite, ConsistentWithFiniteSplit) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    for (double qd : {0.3, 0.5, 0.9}) {
        QPoint qp{Real(qd)};
        for (const Complex& a : a_grid()) {
            Complex full = qpoch_infinite(a, qp, ctx);
            for (long n = 0; n <= 20; ++n) {
                Complex split = qpoch_finite(a, qp, n) * qpoch_infinite(a * pow(qp.q(), n), qp, ctx);
                EXPECT_LE(log2_rel(split, full), -ctx.precision_bits() + 8) << "q=" << qd << " n=" << n;
            }
        }
    }
}

TEST(QPochInfinite, ExceedingMaxTermsIsResourceError) {
    PrecisionContext ctx(256, 32, 1024);
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_THROW(qpoch_infinite(Complex(Real(0.5)), QPoint(Real("0.999")), ctx), ResourceError);
}

TEST(QPochInfinite, DetectsExactZeroFactor) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    // a = q^{-2} with q = 1/2: factor k = 2 is exactly zero
    auto r = qpoch_infinite_ex(Complex(4), QPoint(0.5), ctx);
    EXPECT_TRUE(r.exact_zero);
    EXPECT_TRUE(r.value.is_zero());
}

TEST(RemainderR1, Examples) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    auto z = remainder_r1(Complex(0), QPoint(0.5), 3, ctx);
    EXPECT_TRUE(z.value.is_zero());
    EXPECT_TRUE(z.bound.is_zero());
    EXPECT_TRUE(z.satisfied);

    auto r = remainder_r1(Complex(1), QPoint(0.5), 4, ctx);
    EXPECT_TRUE(r.bound == Real(0.25));
    EXPECT_TRUE(r.satisfied);
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = oracle::qpoch_inf(Complex(Real(0.0625)), Real(0.5)) - Complex(1);
    }
    EXPECT_LE(log2_rel(r.value, ref), -ctx.precision_bits() + 4);

    EXPECT_THROW(remainder_r1(Complex(1), QPoint(0.5), 1, ctx), DomainError);
}

TEST(RemainderR2, Examples) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_TRUE(remainder_r2(Complex(0), QPoint(0.5), 2, ctx).value.is_zero());

    auto r = remainder_r2(Complex(1), QPoint(0.5), 4, ctx);
    EXPECT_TRUE(abs(r.value) <= Real(0.25));
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = Complex(1) / oracle::qpoch_inf(Complex(Real(0.0625)), Real(0.5)) - Complex(1);
    }
    EXPECT_LE(log2_rel(r.value, ref), -ctx.precision_bits() + 4);

    auto c = remainder_r2(Complex(Real(2), Real(1)), QPoint(Real("0.3")), 6, ctx);
    EXPECT_TRUE(c.satisfied);
}

TEST(Remainders, LemmaBoundHoldsAndMatchesProductOracle) {
    PrecisionContext ctx;
    for (double qd : {0.3, 0.5, 0.9}) {
        ScopedPrecision sp(ctx.working_bits());
        QPoint qp{Real(qd)};
        for (const Complex& a : a_grid()) {
            long n0 = 1;
            while (!(abs(a) * pow(qp.q(), n0) / (Real(1) - qp.q()) < Real(0.5))) ++n0;
            for (long n = n0; n <= n0 + 10; ++n) {
                auto r1 = remainder_r1(a, qp, n, ctx);
                auto r2 = remainder_r2(a, qp, n, ctx);
                EXPECT_TRUE(r1.satisfied) << "q=" << qd << " n=" << n;
                EXPECT_TRUE(r2.satisfied) << "q=" << qd << " n=" << n;
                Complex p;
                {
                    ScopedPrecision wide(2 * ctx.working_bits());
                    p = oracle::qpoch_inf(a * pow(Real(qd), n), Real(qd));
                }
                // relative to |r|, so the oracle must carry the cancellation
                EXPECT_LE(log2_rel(r1.value, p - Complex(1)), -ctx.precision_bits() + 8);
                EXPECT_LE(log2_rel(r2.value, Complex(1) / p - Complex(1)), -ctx.precision_bits() + 8);
            }
        }
    }
}

TEST(QBinomialSeries, Examples) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(0.5);
    Complex z(Real(0.1));
    Complex lhs = qbinomial_series(Complex(qp.q()), z, qp, ctx);
    Complex rhs = qpoch_infinite(Complex(qp.q()) * z, qp, ctx) / qpoch_infinite(z, qp, ctx);
    EXPECT_LE(log2_rel(lhs, rhs), -ctx.precision_bits() + 4);

    EXPECT_TRUE(qbinomial_series(Complex(Real(0.7)), Complex(0), qp, ctx).re == Real(1));

    Complex z2(Real(0.2));
    Complex l2 = qbinomial_series(Complex(0), z2, qp, ctx);
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = Complex(1) / oracle::qpoch_inf(z2, Real(0.5));
    }
    EXPECT_LE(log2_rel(l2, ref), -ctx.precision_bits() + 4);

    EXPECT_THROW(qbinomial_series(Complex(0), Complex(1), qp, ctx), DomainError);
}

TEST(EulerSeries, Examples) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_TRUE(euler_series(Complex(0), QPoint(0.5), ctx).re == Real(1));

    // (1;q)_inf = 0 exactly; the series lands within 2^{-precision} of it
    Complex s1 = euler_series(Complex(1), QPoint(0.5), ctx);
    EXPECT_TRUE(abs(s1) < ctx.epsilon());

    QPoint q9(Real("0.9"));
    Complex s = euler_series(Complex(-3), q9, ctx);
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = oracle::qpoch_inf(Complex(-3), Real("0.9"));
    }
    EXPECT_LE(log2_rel(s, ref), -ctx.precision_bits() + 8);
}

TEST(EulerSeries, CancellingArgumentMatchesProduct) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.7"));
    Complex z(Real(40));
    Complex s = euler_series(z, qp, ctx);
    Complex ref;
    {
        ScopedPrecision wide(2 * ctx.working_bits());
        ref = oracle::qpoch_inf(z, Real("0.7"));
    }
    EXPECT_LE(log2_rel(s, ref), -ctx.precision_bits() + 8);
}

TEST(FactorialEnvelopes, HoldForSmallK) {
    ScopedPrecision sp(288);
    for (double qd : {0.3, 0.5, 0.9}) {
        Real q(qd);
        Real qq(1), fact(1);
        for (long k = 1; k <= 50; ++k) {
            qq = qq * (Real(1) - pow(q, k));
            fact = fact * Real(k);
            Real geo = pow(Real(1) - q, k);
            EXPECT_TRUE(qq >= geo) << qd << " " << k;
            EXPECT_TRUE(qq / geo >= fact * pow(q, k * (k - 1) / 2)) << qd << " " << k;
        }
    }
}

TEST(Chi, ExamplesAndFloorRelations) {
    EXPECT_EQ(chi(8), 0);
    EXPECT_EQ(chi(5), 1);
    EXPECT_EQ(chi(1), 1);
    for (long n = 1; n <= 1000000; ++n) {
        ASSERT_EQ(chi(n) + 2 * (n / 2), n);
        ASSERT_EQ(n / 2 + (n + 1) / 2, n);
        ASSERT_EQ((n + 1) / 2 - n / 2, chi(n));
    }
}
