# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 kernel for the feedback master equation.

Twin of _rk4_py.rk4_feedback: identical state layout and operation order
so the two backends produce identical trajectories. See _rk4_py for the
reduced form of the right-hand side.
"""

BACKEND = "compiled"


def rk4_feedback(double complex p00, double complex p01,
                 double complex p10, double complex p11,
                 double ug, double gamma, double omega,
                 double complex r00, double complex r01,
                 double complex r10, double complex r11,
                 long n_steps, double dt, double dt_last, double drift_tol):
    """Integrate n_steps of size dt plus an optional final step dt_last.

    Returns (r00, r01, r10, r11, max_drift, fail_step); fail_step is -1
    unless the trace drift exceeded drift_tol, in which case integration
    stops at that step index.
    """
    cdef double half_ug = 0.5 * ug
    cdef double max_drift = 0.0
    cdef double drift, h, hh, w
    cdef long total = n_steps + (1 if dt_last > 0.0 else 0)
    cdef long step
    cdef double complex a00, a01, a10, a11
    cdef double complex b00, b01, b10, b11
    cdef double complex c00, c01, c10, c11
    cdef double complex e00, e01, e10, e11
    cdef double complex s00, s01, s10, s11, off
    cdef double complex miom

    for step in range(total):
        h = dt if step < n_steps else dt_last

        a00 = gamma * (r11 * p00)
        a01 = gamma * (r11 * p01 - half_ug * r01)
        a10 = gamma * (r11 * p10 - half_ug * r10)
        a11 = gamma * (r11 * p11 - ug * r11)
        if omega != 0.0:
            miom = -1j * omega
            a00 = a00 + miom * (r10 - r01)
            a01 = a01 + miom * (r11 - r00)
            a10 = a10 + miom * (r00 - r11)
            a11 = a11 + miom * (r01 - r10)

        hh = 0.5 * h
        s00 = r00 + hh * a00
        s01 = r01 + hh * a01
        s10 = r10 + hh * a10
        s11 = r11 + hh * a11
        b00 = gamma * (s11 * p00)
        b01 = gamma * (s11 * p01 - half_ug * s01)
        b10 = gamma * (s11 * p10 - half_ug * s10)
        b11 = gamma * (s11 * p11 - ug * s11)
        if omega != 0.0:
            miom = -1j * omega
            b00 = b00 + miom * (s10 - s01)
            b01 = b01 + miom * (s11 - s00)
            b10 = b10 + miom * (s00 - s11)
            b11 = b11 + miom * (s01 - s10)

        s00 = r00 + hh * b00
        s01 = r01 + hh * b01
        s10 = r10 + hh * b10
        s11 = r11 + hh * b11
        c00 = gamma * (s11 * p00)
        c01 = gamma * (s11 * p01 - half_ug * s01)
        c10 = gamma * (s11 * p10 - half_ug * s10)
        c11 = gamma * (s11 * p11 - ug * s11)
        if omega != 0.0:
            miom = -1j * omega
            c00 = c00 + miom * (s10 - s01)
            c01 = c01 + miom * (s11 - s00)
            c10 = c10 + miom * (s00 - s11)
            c11 = c11 + miom * (s01 - s10)

        s00 = r00 + h * c00
        s01 = r01 + h * c01
        s10 = r10 + h * c10
        s11 = r11 + h * c11
        e00 = gamma * (s11 * p00)
        e01 = gamma * (s11 * p01 - half_ug * s01)
        e10 = gamma * (s11 * p10 - half_ug * s10)
        e11 = gamma * (s11 * p11 - ug * s11)
        if omega != 0.0:
            miom = -1j * omega
            e00 = e00 + miom * (s10 - s01)
            e01 = e01 + miom * (s11 - s00)
            e10 = e10 + miom * (s00 - s11)
            e11 = e11 + miom * (s01 - s10)

        w = h / 6.0
        r00 = r00 + w * (a00 + 2.0 * b00 + 2.0 * c00 + e00)
        r01 = r01 + w * (a01 + 2.0 * b01 + 2.0 * c01 + e01)
        r10 = r10 + w * (a10 + 2.0 * b10 + 2.0 * c10 + e10)
        r11 = r11 + w * (a11 + 2.0 * b11 + 2.0 * c11 + e11)

        r00 = <double complex> r00.real
        r11 = <double complex> r11.real
        off = 0.5 * (r01 + r10.conjugate())
        r01 = off
        r10 = off.conjugate()

        drift = abs(r00.real + r11.real - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > drift_tol:
            return r00, r01, r10, r11, max_drift, step

    return r00, r01, r10, r11, max_drift, -1
