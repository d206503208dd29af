"""Tabulate the constants of the fractional trapezoid bound against direct quadrature.

C(alpha)    = int_0^1 |(1-t)^alpha - t^alpha| dt
A(s, alpha) = int_0^1 |(1-t)^alpha - t^alpha| t^s dt
"""

from fracineq import integrate
from fracineq.bounds import abs_kernel_difference_integral, trapezoid_sconvex_constant


def kernel(alpha, s=0.0):
    return lambda t: abs((1 - t) ** alpha - t**alpha) * t**s


if __name__ == "__main__":
    print(f"{'alpha':>6} {'s':>5} {'C closed':>14} {'C quad':>14} {'A closed':>14} {'A quad':>14}")
    for alpha in (0.25, 0.5, 1.0, 2.0, 3.0):
        c = abs_kernel_difference_integral(alpha)
        c_q = integrate(kernel(alpha), 0, 0.5).value + integrate(kernel(alpha), 0.5, 1).value
        for s in (0.25, 0.5, 1.0):
            a = trapezoid_sconvex_constant(s, alpha)
            a_q = integrate(kernel(alpha, s), 0, 0.5).value + integrate(kernel(alpha, s), 0.5, 1).value
            print(f"{alpha:6g} {s:5g} {c:14.10f} {c_q:14.10f} {a:14.10f} {a_q:14.10f}")
