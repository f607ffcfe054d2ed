#include "qscaled/orthogonality.hpp"
#include "qscaled/qfunctions.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qscaled;
using testing_support::log2_rel;

namespace {

constexpr long kOracleBits = 640;

template <class F>
Complex wide(F f) {
    ScopedPrecision sp(kOracleBits);
    return f();
}

}  // namespace

TEST(EulerEq, ExamplesAndOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_TRUE(euler_Eq(Complex(0), QPoint(0.5), ctx).log_mag.is_zero());
    EXPECT_TRUE(euler_Eq(Complex(-1), QPoint(0.5), ctx).is_zero());
    // E_q(z) = (-z;q)_inf, so E_q(1) is the Euler series at -1
    EXPECT_LE(log2_rel(euler_Eq(Complex(1), QPoint(0.5), ctx), euler_series(Complex(-1), QPoint(0.5), ctx)),
              -ctx.precision_bits() + 4);
    for (const char* z : {"0.3", "-0.7", "25", "1000"}) {
        Complex zz(Real(z), Real("0.4"));
        LogComplex lib = euler_Eq(zz, QPoint(Real("0.6")), ctx);
        Complex ref = wide([&] { return oracle::euler_Eq(zz, Real("0.6")); });
        EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 8) << z;
    }
}

TEST(EulerEq, ReflectionAtShiftedArgumentThroughTheta3) {
    // E_q(q^{-n+1/2} e^{2 pi u}) = q^{-n^2/2} e^{2 pi n u} theta3(e^{2 pi u}; q^{1/2})
    //                             / ((q;q)_inf (-q^{n+1/2} e^{-2 pi u};q)_inf)
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    QPoint half = QPoint::from_log(ldexp(qp.log_q(), -1));
    for (long n : {1L, 3L, 6L}) {
        for (const char* us : {"0", "0.3", "-0.2"}) {
            Real u(us);
            Real e = exp(ldexp(Real::pi(), 1) * u);
            Complex lhs = to_complex(euler_Eq(Complex(qp.pow(Real(-n) + Real(0.5)) * e), qp, ctx));
            Complex th3 = theta_z(3, Complex(e), half, ctx);
            Complex den = qpoch_infinite(Complex(qp.q()), qp, ctx) *
                          qpoch_infinite(Complex(-qp.pow(Real(n) + Real(0.5)) / e), qp, ctx);
            Complex rhs = Complex(qp.pow(-Real(n * n) / Real(2)) * pow(e, n)) * th3 / den;
            EXPECT_LE(log2_rel(lhs, rhs), -ctx.precision_bits() + 12) << n << " " << us;

            // (q^{-n+1/2} e^{2 pi u}; q)_inf carries (-1)^n theta4 in place of theta3
            Complex lhs4 = qpoch_infinite(Complex(qp.pow(Real(-n) + Real(0.5)) * e), qp, ctx);
            Complex th4 = theta_z(4, Complex(e), half, ctx);
            Complex den4 = qpoch_infinite(Complex(qp.q()), qp, ctx) *
                           qpoch_infinite(Complex(qp.pow(Real(n) + Real(0.5)) / e), qp, ctx);
            Complex rhs4 = Complex((n % 2 ? Real(-1) : Real(1)) * qp.pow(-Real(n * n) / Real(2)) * pow(e, n)) *
                           th4 / den4;
            EXPECT_LE(log2_rel(lhs4, rhs4), -ctx.precision_bits() + 12) << n << " " << us;
        }
    }
}

TEST(QGamma, ExamplesAndPoles) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    EXPECT_LE(log2_rel(q_gamma(Real(1), qp, ctx), Complex(1)), -ctx.precision_bits());
    EXPECT_LE(log2_rel(q_gamma(Real(2), qp, ctx), Complex(1)), -ctx.precision_bits());
    // Gamma_q(x+1) = [x]_q Gamma_q(x)
    Real x("0.37");
    Complex g = to_complex(q_gamma(x, qp, ctx));
    Complex g1 = to_complex(q_gamma(x + Real(1), qp, ctx));
    Real bracket = (Real(1) - pow(qp.q(), x)) / (Real(1) - qp.q());
    EXPECT_LE(log2_rel(g1, Complex(bracket) * g), -ctx.precision_bits() + 8);
    EXPECT_THROW(q_gamma(Real(0), qp, ctx), SingularityError);
    EXPECT_THROW(q_gamma(Real(-3), qp, ctx), SingularityError);
}

TEST(QGamma, MatchesOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    for (const char* x : {"0.25", "3.5", "-1.5", "12.75"}) {
        Real xr(x);
        LogComplex lib = q_gamma(xr, QPoint(Real("0.7")), ctx);
        Complex ref = wide([&] { return oracle::q_gamma(xr, Real("0.7")); });
        EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 10) << x;
    }
}

TEST(RamanujanAq, ExamplesAndOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    EXPECT_TRUE(ramanujan_Aq(Complex(0), QPoint(0.5), ctx).log_mag.is_zero());
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> r(-40.0, 40.0), qd(0.2, 0.8);
    for (int i = 0; i < 20; ++i) {
        Complex z(Real(r(rng)), Real(r(rng)));
        Real q(qd(rng));
        LogComplex lib = ramanujan_Aq(z, QPoint(q), ctx);
        Complex ref = wide([&] { return oracle::ramanujan_Aq(z, q); });
        EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 12) << i;
    }
}

TEST(JacksonJ2, ExamplesAndOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    EXPECT_TRUE(jackson_J2(Complex(0), Real(0), qp, ctx).log_mag.is_zero());
    EXPECT_TRUE(jackson_J2(Complex(0), Real("0.5"), qp, ctx).is_zero());
    EXPECT_THROW(jackson_J2(Complex(0), Real("-0.5"), qp, ctx), SingularityError);
    EXPECT_THROW(jackson_J2(Complex(1), Real(-1), qp, ctx), DomainError);
    for (const char* nu : {"0", "0.5", "-0.5", "2.25"}) {
        for (const char* zr : {"0.3", "3", "20"}) {
            Complex z(Real(zr), Real("1.5"));
            Real nr(nu);
            LogComplex lib = jackson_J2(z, nr, qp, ctx);
            Complex ref = wide([&] { return oracle::jackson_J2(z, nr, Real("0.5")); });
            EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 12) << nu << " " << zr;
        }
    }
}

TEST(StieltjesWigert, ExamplesAndOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    EXPECT_LE(log2_rel(stieltjes_wigert(Complex(Real(3)), 0, qp, ctx), Complex(1)), -ctx.precision_bits());
    // S_1(x) = (1 - q x)/(1 - q)
    Complex s1 = to_complex(stieltjes_wigert(Complex(Real(3)), 1, qp, ctx));
    EXPECT_LE(log2_rel(s1, Complex(Real(-1))), -ctx.precision_bits() + 2);
    EXPECT_THROW(stieltjes_wigert(Complex(1), -1, qp, ctx), DomainError);
    for (long n : {2L, 7L, 20L}) {
        for (const char* x : {"0.01", "1", "7.5", "300"}) {
            Complex xc{Real(x)};
            LogComplex lib = stieltjes_wigert(xc, n, qp, ctx);
            Complex ref = wide([&] { return oracle::stieltjes_wigert(xc, n, Real("0.5")); });
            EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 12) << n << " " << x;
        }
    }
}

TEST(QLaguerre, ExamplesAndOracle) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.6"));
    EXPECT_LE(log2_rel(q_laguerre(Complex(Real(2)), PolynomialSpec(0, Real("0.5")), qp, ctx), Complex(1)),
              -ctx.precision_bits());
    EXPECT_THROW(PolynomialSpec(2, Real(-1)), DomainError);
    EXPECT_THROW(PolynomialSpec(-1), DomainError);
    for (const char* a : {"0.5", "-0.5", "2"}) {
        for (long n : {1L, 5L, 16L}) {
            for (const char* x : {"0.05", "2", "90"}) {
                Complex xc{Real(x)};
                Real ar(a);
                LogComplex lib = q_laguerre(xc, PolynomialSpec(n, ar), qp, ctx);
                Complex ref = wide([&] { return oracle::q_laguerre(xc, n, ar, Real("0.6")); });
                EXPECT_LE(log2_rel(lib, ref), -ctx.precision_bits() + 12) << a << " " << n << " " << x;
            }
        }
    }
}

TEST(Weights, ValuesAndRefusals) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    // peak of the log-normal weight sits at x = q^{1/2}
    WeightValue w = weight_sw(sqrt(qp.q()), qp);
    Real expect = sqrt(Real(-1) / (ldexp(Real::pi(), 1) * qp.log_q()));
    EXPECT_LE(log2_rel(w.value, expect), -ctx.precision_bits() + 4);
    EXPECT_THROW(weight_sw(Real(0), qp), DomainError);
    EXPECT_THROW(weight_qlaguerre(Real(1), Real(1), qp, ctx), UnsupportedParameterError);
    EXPECT_THROW(weight_qlaguerre(Real(1), Real(0), qp, ctx), UnsupportedParameterError);
    EXPECT_THROW(weight_qlaguerre(Real(-1), Real("0.5"), qp, ctx), DomainError);
    WeightValue wl = weight_qlaguerre(Real(1), Real("0.5"), qp, ctx);
    EXPECT_EQ(wl.sign, 1);
    EXPECT_TRUE(wl.value > Real(0));
}

TEST(Weights, DegreeZeroOrthonormalFunctionsAreSqrtWeight) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    for (const char* x : {"0.1", "1", "4"}) {
        Real xr(x);
        LogComplex s0 = orthonormal_sw(xr, 0, qp, ctx);
        EXPECT_LE(log2_rel(to_complex(s0), Complex(sqrt(weight_sw(xr, qp).value))), -ctx.precision_bits() + 4);
        LogComplex l0 = orthonormal_qlaguerre(xr, PolynomialSpec(0, Real("0.5")), qp, ctx);
        EXPECT_LE(log2_rel(to_complex(l0), Complex(sqrt(weight_qlaguerre(xr, Real("0.5"), qp, ctx).value))),
                  -ctx.precision_bits() + 4);
    }
}

TEST(Orthogonality, WeightsHaveUnitMass) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    auto sw = check_orthogonality(PolynomialFamily::stieltjes_wigert, qp, Real(0), 0, ctx);
    ASSERT_EQ(sw.entries.size(), 1u);
    EXPECT_TRUE(sw.pass);
    EXPECT_TRUE(abs(sw.entries[0].integral - Real(1)) < Real::pow2(-60));
    auto ql = check_orthogonality(PolynomialFamily::q_laguerre, qp, Real("0.5"), 0, ctx);
    EXPECT_TRUE(ql.pass);
    EXPECT_TRUE(abs(ql.entries[0].integral - Real(1)) < Real::pow2(-60));
}

TEST(Orthogonality, LowDegreeTablePassesAndIsThreadCountIndependent) {
    PrecisionContext ctx;
    ScopedPrecision sp(ctx.working_bits());
    QPoint qp(Real("0.5"));
    auto one = check_orthogonality(PolynomialFamily::stieltjes_wigert, qp, Real(0), 3, ctx, Real(1e-30), 1);
    auto three = check_orthogonality(PolynomialFamily::stieltjes_wigert, qp, Real(0), 3, ctx, Real(1e-30), 3);
    EXPECT_TRUE(one.pass);
    ASSERT_EQ(one.entries.size(), three.entries.size());
    for (std::size_t i = 0; i < one.entries.size(); ++i)
        EXPECT_TRUE(one.entries[i].integral == three.entries[i].integral) << i;
}
