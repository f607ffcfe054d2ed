#include "qscaled/summation.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>
#include <thread>

using namespace qscaled;
using testing_support::log2_rel;

TEST(PrecisionContext, DefaultsAndValidation) {
    PrecisionContext ctx;
    EXPECT_EQ(ctx.precision_bits(), 256);
    EXPECT_EQ(ctx.guard_bits(), 32);
    EXPECT_EQ(ctx.max_terms(), 100000);
    EXPECT_EQ(ctx.working_bits(), 288);
    EXPECT_THROW(PrecisionContext(63), ConfigurationError);
    EXPECT_THROW(PrecisionContext(256, 15), ConfigurationError);
    EXPECT_THROW(PrecisionContext(256, 32, 1023), ConfigurationError);
    EXPECT_NO_THROW(PrecisionContext(64, 16, 1024));
    EXPECT_EQ(ctx.with_precision(512).precision_bits(), 512);
    EXPECT_EQ(ctx.with_precision(512).guard_bits(), 32);
}

TEST(ScopedPrecision, RestoresAndCopiesKeepSourcePrecision) {
    const auto before = working_precision();
    Real wide;
    {
        ScopedPrecision sp(600);
        EXPECT_EQ(working_precision(), 600);
        wide = Real::pi();
    }
    EXPECT_EQ(working_precision(), before);
    EXPECT_EQ(wide.precision(), 600);
    Real copy = wide;
    EXPECT_EQ(copy.precision(), 600);
    Real sum = wide + Real(1);
    EXPECT_EQ(sum.precision(), static_cast<long>(before));
}

TEST(ScopedPrecision, IsPerThread) {
    ScopedPrecision sp(400);
    long seen = 0;
    std::thread t([&] { seen = working_precision(); });
    t.join();
    EXPECT_NE(seen, 400);
    EXPECT_EQ(working_precision(), 400);
}

TEST(LogComplex, FromComplexExamples) {
    ScopedPrecision sp(288);
    LogComplex one = logc_from_complex(Complex(1));
    EXPECT_TRUE(one.log_mag.is_zero());
    EXPECT_TRUE(one.phase.is_zero());

    LogComplex zero = logc_from_complex(Complex(0));
    EXPECT_TRUE(zero.is_zero());
    EXPECT_TRUE(zero.phase.is_zero());

    LogComplex me = logc_from_complex(Complex(-exp(Real(1))));
    EXPECT_LE(log2_rel(me.log_mag, Real(1)), -280);
    EXPECT_TRUE(me.phase == Real::pi());
}

TEST(LogComplex, MulExamples) {
    ScopedPrecision sp(288);
    LogComplex a = logc_mul(LogComplex::one(), LogComplex::one());
    EXPECT_TRUE(a.log_mag.is_zero() && a.phase.is_zero());

    LogComplex me(Real(1), Real::pi());
    LogComplex sq = logc_mul(me, me);
    EXPECT_TRUE(sq.log_mag == Real(2));
    EXPECT_TRUE(sq.phase.is_zero());

    LogComplex x(Real(5.3), Real(0.2)), y(Real(-5.3), Real(-0.2));
    LogComplex p = logc_mul(x, y);
    EXPECT_TRUE(p.log_mag.is_zero());
    EXPECT_TRUE(p.phase.is_zero());
}

TEST(LogComplex, RelDevExamples) {
    ScopedPrecision sp(288);
    LogComplex a(Real(3.7), Real(-1.1));
    EXPECT_TRUE(logc_rel_dev(a, a).is_zero());
    EXPECT_LE(log2_rel(logc_rel_dev(LogComplex(Real::ln2(), Real(0)), LogComplex::one()), Real(1)), -280);
    // exact cancellation of the shared e^{1000}
    LogComplex big(Real(1000) + log(Real(1.5)), Real(0)), ref(Real(1000), Real(0));
    EXPECT_LE(log2_rel(logc_rel_dev(big, ref), Real(0.5)), -260);
    EXPECT_THROW(logc_rel_dev(a, LogComplex::zero()), DomainError);
}

TEST(LogComplex, RelDevOfValueWithItselfIsExactlyZero) {
    ScopedPrecision sp(288);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lm(-1e4, 1e4), ph(-3.14, 3.14);
    for (int i = 0; i < 200; ++i) {
        LogComplex a(Real(lm(rng)), Real(ph(rng)));
        EXPECT_TRUE(logc_rel_dev(a, a).is_zero());
    }
}

TEST(LogComplex, MulMatchesDirectComplexProduct) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.precision_bits());
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
        Complex a(Real(u(rng)), Real(u(rng))), b(Real(u(rng)), Real(u(rng)));
        Complex direct = a * b;
        Complex via = to_complex(logc_mul(logc_from_complex(a), logc_from_complex(b)));
        EXPECT_LE(log2_rel(via, direct), -ctx.precision_bits() + 4) << "sample " << i;
    }
}

TEST(LogComplex, RoundTripWithinWorkingPrecision) {
    // guard bits absorb the log2|log_mag| bits lost through exp
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1e6, 1e6);
    for (int i = 0; i < 100; ++i) {
        Complex z(Real(u(rng)), Real(u(rng)));
        EXPECT_LE(log2_rel(to_complex(logc_from_complex(z)), z), -ctx.precision_bits());
    }
}

TEST(LogComplex, PhaseStaysInHalfOpenInterval) {
    ScopedPrecision sp(288);
    const Real pi = Real::pi();
    for (double t : {-7.0, -3.2, 0.0, 3.2, 9.5, 100.0}) {
        Real w = wrap_phase(Real(t));
        EXPECT_TRUE(w > -pi && w <= pi) << t;
    }
    EXPECT_TRUE(wrap_phase(-pi) == pi);
    EXPECT_TRUE(logc_from_complex(Complex(Real(-2), Real(0))).phase == pi);
}

TEST(LogComplex, HugeMagnitudesSurviveArithmetic) {
    ScopedPrecision sp(288);
    // e^{7400}-scale values, beyond double range
    LogComplex a(Real(7400), Real(0.5)), b(Real(-7399), Real(-0.5));
    LogComplex p = logc_mul(a, b);
    EXPECT_LE(log2_rel(p.log_mag, Real(1)), -280);
    EXPECT_TRUE(logc_div(a, a).log_mag.is_zero());
    EXPECT_THROW(logc_inv(LogComplex::zero()), SingularityError);
}

TEST(LogComplex, UnitPiIsExactForIntegers) {
    ScopedPrecision sp(288);
    for (long n = -5; n <= 5; ++n) {
        Complex c = to_complex(logc_unit_pi(Real(n)));
        EXPECT_TRUE(c.im.is_zero());
        EXPECT_TRUE(c.re == Real(n % 2 == 0 ? 1 : -1)) << n;
    }
}

TEST(LogProduct, RealFactorsKeepExactSign) {
    ScopedPrecision sp(288);
    LogProduct p;
    for (int k = 1; k <= 7; ++k) p.mul(Complex(Real(-k)));
    LogComplex v = p.value();
    EXPECT_TRUE(v.phase == Real::pi());
    EXPECT_LE(log2_rel(exp(v.log_mag), Real(5040)), -270);
    p.mul(Complex(0));
    EXPECT_TRUE(p.value().is_zero());
}

TEST(Summation, PairwiseIsDeterministicAndMeasuresCancellation) {
    ScopedPrecision sp(288);
    std::vector<Complex> terms = {Complex(Real(1)), Complex(Real(1e-30)), Complex(Real(-1))};
    auto m = measured_sum(terms);
    EXPECT_LE(log2_rel(m.value, Complex(Real(1e-30))), -180);
    EXPECT_GT(m.loss_bits, 95.0);

    std::vector<LogTerm> lt = {{Real(1000), Complex(1)}, {Real(1000), Complex(-1)}};
    auto z = measured_log_sum(lt);
    EXPECT_TRUE(z.value.is_zero());

    std::vector<Real> a{Real(1), Real(2), Real(3), Real(4), Real(5)};
    std::vector<Real> b = a;
    EXPECT_TRUE(pairwise_sum(a) == pairwise_sum(b));
    EXPECT_TRUE(pairwise_sum(a) == Real(15));
}

TEST(Summation, CancellationControlEscalatesPrecision) {
    PrecisionContext ctx(128);
    long max_bits_seen = 0;
    auto r = with_cancellation_control(ctx, [&](const PrecisionContext& c) {
        max_bits_seen = std::max(max_bits_seen, c.precision_bits());
        ScopedPrecision sp(c.working_bits());
        // 1 + 2^-200 - 1 loses 200 bits
        std::vector<Complex> t = {Complex(1), Complex(Real::pow2(-200)), Complex(-1)};
        return measured_sum(t);
    });
    EXPECT_GT(max_bits_seen, 128 + 150);
    ScopedPrecision sp(256);
    EXPECT_TRUE(r.re == Real::pow2(-200));
}
