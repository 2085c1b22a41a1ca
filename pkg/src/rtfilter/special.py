"""Scalar special functions for student-t and gamma CDFs and quantiles.

Everything here is plain double-precision Python with no dependency beyond
the standard library, so the filtering code stays importable without any
scientific stack.  Degrees of freedom and shapes may be any positive real;
nothing assumes integer parameters.
"""

import math

__all__ = [
    "log_gamma",
    "reg_lower_gamma",
    "reg_incomplete_beta",
    "student_t_pdf",
    "student_t_cdf",
    "student_t_quantile",
    "gamma_quantile",
]

_EPS = 2.220446049250313e-16
_FPMIN = 1e-300
_MAX_CF_ITER = 500

# Shape threshold above which the incomplete gamma switches from
# series/continued fraction to direct quadrature of the density.
_GAMMA_QUAD_SWITCH = 100.0

# 40-point Gauss-Legendre rule on [0, 1].
_GAUSS40_NODES = (
    8.81145144720374418e-04, 4.63688065027145768e-03,
    1.13700250081128496e-02, 2.10415903931041592e-02,
    3.35935958606617402e-02, 4.89505965155628275e-02,
    6.70202483938702187e-02, 8.76938845833441505e-02,
    1.10847174286740291e-01, 1.36340872405036451e-01,
    1.64021657692910217e-01, 1.93723055166009850e-01,
    2.25266437452435908e-01, 2.58462099156910652e-01,
    2.93110397814197510e-01, 3.29002954587120755e-01,
    3.65923907496373157e-01, 4.03651209649314446e-01,
    4.41957964662372416e-01, 4.80613791246974564e-01,
    5.19386208753025436e-01, 5.58042035337627640e-01,
    5.96348790350685554e-01, 6.34076092503626843e-01,
    6.70997045412879300e-01, 7.06889602185802435e-01,
    7.41537900843089348e-01, 7.74733562547564092e-01,
    8.06276944833990150e-01, 8.35978342307089783e-01,
    8.63659127594963549e-01, 8.89152825713259709e-01,
    9.12306115416655850e-01, 9.32979751606129781e-01,
    9.51049403484437228e-01, 9.66406404139338315e-01,
    9.78958409606895841e-01, 9.88629974991887206e-01,
    9.95363119349728542e-01, 9.99118854855279626e-01,
)
_GAUSS40_WEIGHTS = (
    2.26063854926500905e-03, 5.24914226557580445e-03,
    8.21052919095367241e-03, 1.11229245970833265e-02,
    1.39685034900117640e-02, 1.67300976412738389e-02,
    1.93910839872361886e-02, 2.19354540928366620e-02,
    2.43479038175362025e-02, 2.66139234919685573e-02,
    2.87198845496959461e-02, 3.06531212464646596e-02,
    3.24020067283007432e-02, 3.39560229076171990e-02,
    3.53058236956435845e-02, 3.64432911979022389e-02,
    3.73615845289843387e-02, 3.80551809503133706e-02,
    3.85199090821241943e-02, 3.87529739892126662e-02,
    3.87529739892126662e-02, 3.85199090821241943e-02,
    3.80551809503133706e-02, 3.73615845289843387e-02,
    3.64432911979022389e-02, 3.53058236956435845e-02,
    3.39560229076171990e-02, 3.24020067283007432e-02,
    3.06531212464646596e-02, 2.87198845496959461e-02,
    2.66139234919685573e-02, 2.43479038175362025e-02,
    2.19354540928366620e-02, 1.93910839872361886e-02,
    1.67300976412738389e-02, 1.39685034900117640e-02,
    1.11229245970833265e-02, 8.21052919095367241e-03,
    5.24914226557580445e-03, 2.26063854926500905e-03,
)


def log_gamma(x: float) -> float:
    """Natural logarithm of the gamma function, x > 0."""
    if not (x > 0.0) or math.isinf(x):
        raise ValueError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def _gamma_series(shape, x):
    # Lower-tail power series, reliable for x < shape + 1.
    ap = shape
    total = 1.0 / shape
    term = total
    for _ in range(_MAX_CF_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    log_front = shape * math.log(x) - x - math.lgamma(shape)
    return total * math.exp(log_front)


def _gamma_cont_fraction(shape, x):
    # Upper-tail Lentz continued fraction, reliable for x >= shape + 1.
    b = x + 1.0 - shape
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_CF_ITER):
        an = -i * (i - shape)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    log_front = shape * math.log(x) - x - math.lgamma(shape)
    return h * math.exp(log_front)


def _gamma_by_quadrature(shape, x):
    # Large-shape path: integrate the density between x and a point far out
    # in the tail on the other side of the mode.  The series and continued
    # fraction need O(sqrt(shape)) terms up here, the quadrature does not.
    a1 = shape - 1.0
    sqrt_a1 = math.sqrt(a1)
    if x > a1:
        upper = max(a1 + 11.5 * sqrt_a1, x + 6.0 * sqrt_a1)
    else:
        upper = max(0.0, min(a1 - 7.5 * sqrt_a1, x - 5.0 * sqrt_a1))
    total = 0.0
    for node, weight in zip(_GAUSS40_NODES, _GAUSS40_WEIGHTS):
        t = x + (upper - x) * node
        d = t - a1
        # log of the density relative to its mode, conditioned via log1p
        total += weight * math.exp(a1 * math.log1p(d / a1) - d)
    # ln[a1^a1 e^-a1 / Gamma(shape)] by a Stirling expansion: the direct
    # difference of lgamma-sized terms would round at ~shape*1e-16
    inv_a1_sq = 1.0 / (a1 * a1)
    log_front = -0.5 * math.log(2.0 * math.pi * a1) - (1.0 / (12.0 * a1)) * (
        1.0 - inv_a1_sq / 30.0 * (1.0 - inv_a1_sq * 3.0 / 14.0)
    )
    span = total * (upper - x) * math.exp(log_front)
    return 1.0 - span if x > a1 else -span


def reg_lower_gamma(shape: float, x: float) -> float:
    """Regularized lower incomplete gamma P(shape, x).

    P(shape, 0) = 0 and P(shape, x) -> 1 as x -> inf; strictly increasing
    in x.  Series/continued-fraction switchover at x = shape + 1; shapes
    above 100 integrate the density directly instead.
    """
    if not (shape > 0.0) or not math.isfinite(shape):
        raise ValueError(f"reg_lower_gamma requires shape > 0, got {shape!r}")
    if not (x >= 0.0):
        raise ValueError(f"reg_lower_gamma requires x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if shape >= _GAMMA_QUAD_SWITCH:
        return min(1.0, max(0.0, _gamma_by_quadrature(shape, x)))
    if x < shape + 1.0:
        return min(1.0, _gamma_series(shape, x))
    return max(0.0, 1.0 - _gamma_cont_fraction(shape, x))


def _beta_cont_fraction(a, b, x):
    # Lentz's algorithm for the incomplete beta continued fraction.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_CF_ITER):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h


def reg_incomplete_beta(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not (a > 0.0 and b > 0.0) or not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"reg_incomplete_beta requires finite a, b > 0, got a={a!r} b={b!r}")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"reg_incomplete_beta requires 0 <= x <= 1, got {x!r}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    # Continued fraction converges fastest on the x side of the mean.
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cont_fraction(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_cont_fraction(b, a, 1.0 - x) / b)


def student_t_pdf(x: float, n: float) -> float:
    """Density of the standard student-t with n > 0 degrees of freedom."""
    if not (n > 0.0):
        raise ValueError(f"student_t_pdf requires n > 0, got {n!r}")
    log_pdf = (
        math.lgamma((n + 1.0) / 2.0)
        - math.lgamma(n / 2.0)
        - 0.5 * math.log(n * math.pi)
        - (n + 1.0) / 2.0 * math.log1p(x * x / n)
    )
    return math.exp(log_pdf)


def student_t_cdf(x: float, n: float) -> float:
    """CDF of the standard student-t with n > 0 degrees of freedom.

    F(0) = 1/2 exactly and F(x) + F(-x) = 1 by construction.
    """
    if not (n > 0.0) or not math.isfinite(n):
        raise ValueError(f"student_t_cdf requires finite n > 0, got {n!r}")
    if math.isnan(x):
        raise ValueError("student_t_cdf requires a non-NaN x")
    if x == 0.0:
        return 0.5
    if math.isinf(x):
        return 1.0 if x > 0 else 0.0
    tail = 0.5 * reg_incomplete_beta(n / 2.0, 0.5, n / (n + x * x))
    return tail if x < 0 else 1.0 - tail


# Acklam's rational approximation to the standard normal quantile,
# used only to seed Newton iterations (~1e-9 accurate).
_NORM_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
           1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_NORM_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
           6.680131188771972e+01, -1.328068155288572e+01)
_NORM_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
           -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_NORM_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
           3.754408661907416e+00)


def _norm_quantile(p):
    if p < 0.02425:
        q = math.sqrt(-2.0 * math.log(p))
        return (((((_NORM_C[0] * q + _NORM_C[1]) * q + _NORM_C[2]) * q + _NORM_C[3]) * q
                 + _NORM_C[4]) * q + _NORM_C[5]) / \
               ((((_NORM_D[0] * q + _NORM_D[1]) * q + _NORM_D[2]) * q + _NORM_D[3]) * q + 1.0)
    if p > 0.97575:
        return -_norm_quantile(1.0 - p)
    q = p - 0.5
    r = q * q
    return (((((_NORM_A[0] * r + _NORM_A[1]) * r + _NORM_A[2]) * r + _NORM_A[3]) * r
             + _NORM_A[4]) * r + _NORM_A[5]) * q / \
           (((((_NORM_B[0] * r + _NORM_B[1]) * r + _NORM_B[2]) * r + _NORM_B[3]) * r
             + _NORM_B[4]) * r + 1.0)


def _invert_cdf(cdf, pdf, p, lo, hi, x0, tol=1e-12, max_iter=120):
    """Solve cdf(x) = p on [lo, hi] by safeguarded Newton with bisection fallback.

    cdf must be nondecreasing with cdf(lo) <= p <= cdf(hi).
    """
    x = min(max(x0, lo), hi)
    for _ in range(max_iter):
        err = cdf(x) - p
        if abs(err) <= tol:
            return x
        if err > 0.0:
            hi = x
        else:
            lo = x
        d = pdf(x)
        if d > 0.0:
            x_new = x - err / d
            if lo < x_new < hi:
                x = x_new
                continue
        x = 0.5 * (lo + hi)
    return x


def student_t_quantile(p: float, n: float) -> float:
    """Quantile of the standard student-t: the x with student_t_cdf(x, n) = p.

    Antisymmetric by construction: quantile(1 - p) == -quantile(p), and
    quantile(1/2) == 0 exactly.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"student_t_quantile requires 0 < p < 1, got {p!r}")
    if not (n > 0.0) or not math.isfinite(n):
        raise ValueError(f"student_t_quantile requires finite n > 0, got {n!r}")
    if p == 0.5:
        return 0.0
    if p < 0.5:
        return -student_t_quantile(1.0 - p, n)

    # Seed: exact closed forms at n = 1, 2, a normal-quantile expansion else.
    if n <= 1.5:
        x0 = math.tan(math.pi * (p - 0.5))
    elif n <= 3.0:
        alpha = 2.0 * p - 1.0
        x0 = alpha * math.sqrt(2.0 / ((1.0 - alpha) * (1.0 + alpha)))
    else:
        z = _norm_quantile(p)
        g1 = (z ** 3 + z) / 4.0
        g2 = (5.0 * z ** 5 + 16.0 * z ** 3 + 3.0 * z) / 96.0
        x0 = z + g1 / n + g2 / (n * n)
    x0 = max(x0, 1e-12)

    hi = max(2.0 * x0, 1.0)
    while student_t_cdf(hi, n) < p:
        if hi > 8.98e307:
            # genuinely beyond double range: at very small n the tails are
            # so heavy that even F(DBL_MAX) < p
            return math.inf
        hi *= 2.0
    return _invert_cdf(
        lambda x: student_t_cdf(x, n),
        lambda x: student_t_pdf(x, n),
        p, 0.0, hi, x0,
    )


def gamma_quantile(p: float, shape: float, rate: float) -> float:
    """Quantile of a Gamma(shape, rate) law: reg_lower_gamma(shape, q*rate) = p.

    Computed at unit rate and divided by ``rate``, so results scale exactly
    as 1/rate.
    """
    if not (0.0 < p < 1.0):
        raise ValueError(f"gamma_quantile requires 0 < p < 1, got {p!r}")
    if not (shape > 0.0) or not math.isfinite(shape):
        raise ValueError(f"gamma_quantile requires shape > 0, got {shape!r}")
    if not (rate > 0.0) or not math.isfinite(rate):
        raise ValueError(f"gamma_quantile requires rate > 0, got {rate!r}")

    # Wilson-Hilferty seed; accurate enough to put Newton in its basin.
    z = _norm_quantile(p)
    h = 1.0 / (9.0 * shape)
    x0 = shape * (1.0 - h + z * math.sqrt(h)) ** 3
    if not (x0 > 0.0):
        # small-x asymptote P(a, x) ~ x^a / Gamma(a+1)
        x0 = math.exp((math.log(p) + math.lgamma(shape + 1.0)) / shape)

    hi = max(2.0 * x0, shape + 10.0 * math.sqrt(shape) + 10.0)
    for _ in range(2100):
        if reg_lower_gamma(shape, hi) >= p:
            break
        hi *= 2.0

    def pdf(x):
        if x <= 0.0:
            return 0.0
        return math.exp((shape - 1.0) * math.log(x) - x - math.lgamma(shape))

    x = _invert_cdf(lambda t: reg_lower_gamma(shape, t), pdf, p, 0.0, hi, x0)
    return x / rate
