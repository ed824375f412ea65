"""Dormand-Prince 5(4) step for the two-component system (x, v).

Coefficients and the continuous extension follow Hairer, Norsett & Wanner,
Solving Ordinary Differential Equations I, and the DOPRI5 reference code.
"""

from __future__ import annotations

C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9

A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
A71, A73, A74, A75, A76 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84

# fifth-order weights minus embedded fourth-order weights
E1, E3, E4, E5, E6, E7 = 71 / 57600, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40

D1 = -12715105075 / 11282082432
D3 = 87487479700 / 32700410799
D4 = -10690763975 / 1880347072
D5 = 701980252875 / 199316789632
D6 = -1453857185 / 822651844
D7 = 69997945 / 29380423


class StageOutOfRange(Exception):
    """A stage position fell outside the allowed region; the step must shrink."""


def step(accel, x, v, a, h, x_lo, x_hi):
    """Attempt one step of size ``h`` from ``(x, v)`` with ``a = accel(x)``.

    ``accel`` is evaluated only at stage positions strictly inside
    ``(x_lo, x_hi)``; otherwise :class:`StageOutOfRange` is raised.

    Returns ``(x_new, v_new, a_new, err_x, err_v, dense)`` where ``dense`` holds
    the continuous-extension coefficients for :func:`dense_eval`.
    """
    # For x' = v, v' = accel(x): stage i has kx_i = v_i and kv_i = accel(x_i).
    def f(xs):
        if not x_lo < xs < x_hi:
            raise StageOutOfRange(xs)
        return accel(xs)

    kx1, kv1 = v, a
    x2 = x + h * (A21 * kx1)
    v2 = v + h * (A21 * kv1)
    kx2, kv2 = v2, f(x2)
    x3 = x + h * (A31 * kx1 + A32 * kx2)
    v3 = v + h * (A31 * kv1 + A32 * kv2)
    kx3, kv3 = v3, f(x3)
    x4 = x + h * (A41 * kx1 + A42 * kx2 + A43 * kx3)
    v4 = v + h * (A41 * kv1 + A42 * kv2 + A43 * kv3)
    kx4, kv4 = v4, f(x4)
    x5 = x + h * (A51 * kx1 + A52 * kx2 + A53 * kx3 + A54 * kx4)
    v5 = v + h * (A51 * kv1 + A52 * kv2 + A53 * kv3 + A54 * kv4)
    kx5, kv5 = v5, f(x5)
    x6 = x + h * (A61 * kx1 + A62 * kx2 + A63 * kx3 + A64 * kx4 + A65 * kx5)
    v6 = v + h * (A61 * kv1 + A62 * kv2 + A63 * kv3 + A64 * kv4 + A65 * kv5)
    kx6, kv6 = v6, f(x6)
    x_new = x + h * (A71 * kx1 + A73 * kx3 + A74 * kx4 + A75 * kx5 + A76 * kx6)
    v_new = v + h * (A71 * kv1 + A73 * kv3 + A74 * kv4 + A75 * kv5 + A76 * kv6)
    kx7, kv7 = v_new, f(x_new)

    err_x = h * (E1 * kx1 + E3 * kx3 + E4 * kx4 + E5 * kx5 + E6 * kx6 + E7 * kx7)
    err_v = h * (E1 * kv1 + E3 * kv3 + E4 * kv4 + E5 * kv5 + E6 * kv6 + E7 * kv7)

    dense = []
    for y0, y1, k1, k3, k4, k5, k6, k7 in (
        (x, x_new, kx1, kx3, kx4, kx5, kx6, kx7),
        (v, v_new, kv1, kv3, kv4, kv5, kv6, kv7),
    ):
        r2 = y1 - y0
        r3 = h * k1 - r2
        r4 = r2 - h * k7 - r3
        r5 = h * (D1 * k1 + D3 * k3 + D4 * k4 + D5 * k5 + D6 * k6 + D7 * k7)
        dense.append((y0, r2, r3, r4, r5))
    return x_new, v_new, kv7, err_x, err_v, dense


def dense_eval(dense, theta):
    """Evaluate the continuous extension at fraction ``theta`` of the step."""
    out = []
    for y0, r2, r3, r4, r5 in dense:
        s = 1.0 - theta
        out.append(y0 + theta * (r2 + s * (r3 + theta * (r4 + s * r5))))
    return out[0], out[1]
