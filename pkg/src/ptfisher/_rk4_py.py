"""Pure-Python RK4 kernel for the feedback master equation.

Twin of the compiled kernel in _rk4.pyx: same state layout, same operation
order, so both backends produce identical trajectories. The density matrix
is carried as four complex scalars r00, r01, r10, r11 in the (g, e) basis;
the dissipator is pre-reduced to the constant matrix P = U|g><g|U^dag and
the scalar ug = <g|U^dag U|g>:

    drho/dt = -i*omega*[sigma_x, rho]
              + gamma*(rho_ee * P - (ug/2) * {|e><e|, rho}).
"""

BACKEND = "python"


def rk4_feedback(p00, p01, p10, p11, ug, gamma, omega,
                 r00, r01, r10, r11, n_steps, dt, dt_last, drift_tol):
    """Integrate n_steps of size dt plus an optional final step dt_last.

    Returns (r00, r01, r10, r11, max_drift, fail_step); fail_step is -1
    unless the trace drift exceeded drift_tol, in which case integration
    stops at that step index.
    """
    half_ug = 0.5 * ug
    max_drift = 0.0
    total = n_steps + (1 if dt_last > 0.0 else 0)
    for step in range(total):
        h = dt if step < n_steps else dt_last

        # k1
        a00 = gamma * (r11 * p00)
        a01 = gamma * (r11 * p01 - half_ug * r01)
        a10 = gamma * (r11 * p10 - half_ug * r10)
        a11 = gamma * (r11 * p11 - ug * r11)
        if omega != 0.0:
            a00 = a00 + (-1j * omega) * (r10 - r01)
            a01 = a01 + (-1j * omega) * (r11 - r00)
            a10 = a10 + (-1j * omega) * (r00 - r11)
            a11 = a11 + (-1j * omega) * (r01 - r10)

        # k2 at rho + (h/2) k1
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
            b00 = b00 + (-1j * omega) * (s10 - s01)
            b01 = b01 + (-1j * omega) * (s11 - s00)
            b10 = b10 + (-1j * omega) * (s00 - s11)
            b11 = b11 + (-1j * omega) * (s01 - s10)

        # k3 at rho + (h/2) k2
        s00 = r00 + hh * b00
        s01 = r01 + hh * b01
        s10 = r10 + hh * b10
        s11 = r11 + hh * b11
        c00 = gamma * (s11 * p00)
        c01 = gamma * (s11 * p01 - half_ug * s01)
        c10 = gamma * (s11 * p10 - half_ug * s10)
        c11 = gamma * (s11 * p11 - ug * s11)
        if omega != 0.0:
            c00 = c00 + (-1j * omega) * (s10 - s01)
            c01 = c01 + (-1j * omega) * (s11 - s00)
            c10 = c10 + (-1j * omega) * (s00 - s11)
            c11 = c11 + (-1j * omega) * (s01 - s10)

        # k4 at rho + h k3
        s00 = r00 + h * c00
        s01 = r01 + h * c01
        s10 = r10 + h * c10
        s11 = r11 + h * c11
        e00 = gamma * (s11 * p00)
        e01 = gamma * (s11 * p01 - half_ug * s01)
        e10 = gamma * (s11 * p10 - half_ug * s10)
        e11 = gamma * (s11 * p11 - ug * s11)
        if omega != 0.0:
            e00 = e00 + (-1j * omega) * (s10 - s01)
            e01 = e01 + (-1j * omega) * (s11 - s00)
            e10 = e10 + (-1j * omega) * (s00 - s11)
            e11 = e11 + (-1j * omega) * (s01 - s10)

        w = h / 6.0
        r00 = r00 + w * (a00 + 2.0 * b00 + 2.0 * c00 + e00)
        r01 = r01 + w * (a01 + 2.0 * b01 + 2.0 * c01 + e01)
        r10 = r10 + w * (a10 + 2.0 * b10 + 2.0 * c10 + e10)
        r11 = r11 + w * (a11 + 2.0 * b11 + 2.0 * c11 + e11)

        # re-symmetrize: rho <- (rho + rho^dag)/2
        r00 = complex(r00.real)
        r11 = complex(r11.real)
        off = 0.5 * (r01 + r10.conjugate())
        r01 = off
        r10 = off.conjugate()

        drift = abs(r00.real + r11.real - 1.0)
        if drift > max_drift:
            max_drift = drift
        if drift > drift_tol:
            return r00, r01, r10, r11, max_drift, step

    return r00, r01, r10, r11, max_drift, -1
