# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled half-period summation kernel for oscillatory radial integrals.

Sums panel integrals of

    r^p * sum_i c_i r^(2 k_i) exp(-b_i r^2) * trig(m t r^sigma)

between consecutive zeros of the trig factor, starting just above
``r_start``.  Consecutive panel contributions alternate in sign, so the
running sum is truncated once three panels in a row fall below ``tau`` in
magnitude; the magnitude of the last panel bounds the discarded tail.
"""

from libc.math cimport sin, cos, exp, pow, sqrt, fabs, ceil, floor, M_PI


cdef inline double _ipow(double x, long e) nogil:
    # small integer exponents only; |e| stays below ~16 in practice
    cdef double acc = 1.0
    cdef long i
    if e >= 0:
        for i in range(e):
            acc *= x
        return acc
    for i in range(-e):
        acc *= x
    return 1.0 / acc


def osc_trig_sum(const double[::1] coeffs,
                 const double[::1] powers,
                 const double[::1] widths,
                 double p,
                 double t,
                 double sigma,
                 long m,
                 bint use_sin,
                 double r_start,
                 double tau,
                 long max_panels,
                 const double[::1] gl_nodes,
                 const double[::1] gl_weights):
    """Return (total, last_panel_abs, panels_used, converged)."""
    cdef Py_ssize_t nterms = coeffs.shape[0]
    cdef Py_ssize_t q = gl_nodes.shape[0]
    cdef double offset = 0.0 if use_sin else 0.5
    cdef double inv_sigma = 1.0 / sigma
    cdef bint is_sq = sigma == 2.0
    cdef bint is_lin = sigma == 1.0
    # r^sigma via multiplications for integer / half-integer exponents
    cdef bint sig_int = sigma == floor(sigma) and 0.0 < sigma < 16.0
    cdef long sig_i = <long>sigma
    cdef bint sig_half = (2.0 * sigma) == floor(2.0 * sigma) and 0.0 < sigma < 16.0
    cdef long sig_h = <long>floor(sigma)

    # integer fast paths for the power factors
    cdef bint p_int = p == floor(p) and fabs(p) < 32.0
    cdef long p_i = <long>p
    cdef bint k_int = True
    cdef long[64] k_i
    cdef Py_ssize_t i
    if nterms > 64:
        k_int = False
    else:
        for i in range(nterms):
            if powers[i] == floor(powers[i]) and 0.0 <= powers[i] < 32.0:
                k_i[i] = <long>powers[i]
            else:
                k_int = False
                break

    cdef double phi_start = t * pow(r_start, sigma)
    cdef long j = <long>ceil(m * phi_start / M_PI - offset)
    if j < 1 and use_sin:
        j = 1
    if j < 0:
        j = 0
    while (j + offset) * M_PI / m <= phi_start:
        j += 1

    cdef double total = 0.0
    cdef double comp = 0.0          # Kahan compensation
    cdef double last_abs = 0.0
    cdef long consec = 0
    cdef long panels = 0
    cdef bint converged = 0

    cdef double r_left = r_start
    cdef double r_right, phi_edge, mid, half, r, r2, panel, y, tmp, phase, amp
    cdef Py_ssize_t iq

    with nogil:
        while panels < max_panels:
            phi_edge = (j + offset) * M_PI / m
            if is_sq:
                r_right = sqrt(phi_edge / t)
            elif is_lin:
                r_right = phi_edge / t
            else:
                r_right = pow(phi_edge / t, inv_sigma)
            panel = 0.0
            if r_right > r_left:
                mid = 0.5 * (r_left + r_right)
                half = 0.5 * (r_right - r_left)
                for iq in range(q):
                    r = mid + half * gl_nodes[iq]
                    r2 = r * r
                    amp = 0.0
                    if k_int:
                        for i in range(nterms):
                            amp += coeffs[i] * _ipow(r2, k_i[i]) * exp(-widths[i] * r2)
                    else:
                        for i in range(nterms):
                            amp += coeffs[i] * pow(r2, powers[i]) * exp(-widths[i] * r2)
                    if p != 0.0:
                        if p_int:
                            amp *= _ipow(r, p_i)
                        else:
                            amp *= pow(r, p)
                    if is_sq:
                        phase = m * t * r2
                    elif is_lin:
                        phase = m * t * r
                    elif sig_int:
                        phase = m * t * _ipow(r, sig_i)
                    elif sig_half:
                        phase = m * t * _ipow(r, sig_h) * sqrt(r)
                    else:
                        phase = m * t * pow(r, sigma)
                    if use_sin:
                        panel += gl_weights[iq] * amp * sin(phase)
                    else:
                        panel += gl_weights[iq] * amp * cos(phase)
                panel *= half
                y = panel - comp
                tmp = total + y
                comp = (tmp - total) - y
                total = tmp
                last_abs = fabs(panel)
                if last_abs < tau:
                    consec += 1
                    if consec >= 3:
                        converged = 1
                        panels += 1
                        break
                else:
                    consec = 0
            r_left = r_right
            j += 1
            panels += 1

    return total, last_abs, panels, bool(converged)
