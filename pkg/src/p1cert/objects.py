"""Named vector fields and forms of the first Painleve equation and its degeneration."""

from __future__ import annotations

from .exterior import FormMatrix, KForm, VectorField, column
from .expr.ratexpr import Chart, RatExpr

x = RatExpr.var("x")
y = RatExpr.var("y")
yp = RatExpr.var("yp")
alpha = RatExpr.var("alpha")
u_B = RatExpr.var("u")
s_B = RatExpr.var("s")

# u = yp^2 - 4y^3 written in chart A
u_A = yp**2 - 4 * y**3

A = Chart.A
B = Chart.B

# X1 = d/dx + yp d/dy + (6y^2 + x) d/dyp
X1 = VectorField(A, {"x": 1, "y": yp, "yp": 6 * y**2 + x})
# X_alpha: the Sigma-homogeneous family with X_1 at alpha = 1
Xalpha = VectorField(A, {"x": 1, "y": yp, "yp": 6 * y**2 + alpha**5 * x})
# X0: restriction of X_alpha to alpha = 0
X0 = VectorField(A, {"x": 1, "y": yp, "yp": 6 * y**2})
X0_B = VectorField(B, {"x": 1, "y": s_B})
Sigma = VectorField(A, {"x": x, "y": -2 * y, "yp": -3 * yp, "alpha": -alpha})
Sigma3 = VectorField(A, {"x": x, "y": -2 * y, "yp": -3 * yp})

dx = KForm.basis(A, 0)
dy = KForm.basis(A, 1)
dyp = KForm.basis(A, 2)
dalpha = KForm.basis(A, 3)

vol = KForm.volume(A)  # dx/\dy/\dyp
gamma = vol.interior(X1)

omega01 = dyp.scale(yp) - dy.scale(6 * y**2 + x)
omega02 = dy.scale(yp.inverse()) - dx
omega01_alpha = dyp.scale(yp) - dy.scale(6 * y**2 + alpha**5 * x)
omega02_alpha = omega02
omega01_0 = dyp.scale(yp) - dy.scale(6 * y**2)
omega02_0 = omega02

Omega0 = column([omega01, omega02])
Omega0_alpha = column([omega01_alpha, omega02_alpha])
Omega0_0 = column([omega01_0, omega02_0])

# frequently used expressions
w1 = x + 2 * y / yp  # X0 w1 = 3u/yp^2
w2 = 7 * x + 20 * y / yp - 24 * y**4 / yp**3  # X0 w2 = 27u^2/yp^4

FIELDS = {
    "X0": X0,
    "X1": X1,
    "Xalpha": Xalpha,
    "Sigma": Sigma,
}
FORMS = {
    "omega01": omega01,
    "omega02": omega02,
    "gamma": gamma,
    "vol": vol,
}


def orientation_sign() -> int:
    """epsilon with omega01 /\\ omega02 = epsilon * i_{X1} vol."""
    lhs = omega01.wedge(omega02)
    if lhs == gamma:
        return 1
    if lhs == -gamma:
        return -1
    raise AssertionError("omega01 /\\ omega02 is not proportional to gamma by +-1")


EPSILON = orientation_sign()


__all__ = [
    "x",
    "y",
    "yp",
    "alpha",
    "dx",
    "dy",
    "dyp",
    "dalpha",
    "X0",
    "X0_B",
    "X1",
    "Xalpha",
    "Sigma",
    "Sigma3",
    "vol",
    "gamma",
    "omega01",
    "omega02",
    "omega01_alpha",
    "omega02_alpha",
    "omega01_0",
    "omega02_0",
    "Omega0",
    "Omega0_alpha",
    "Omega0_0",
    "FIELDS",
    "FORMS",
    "EPSILON",
    "orientation_sign",
    "u_A",
    "w1",
    "w2",
    "FormMatrix",
]
