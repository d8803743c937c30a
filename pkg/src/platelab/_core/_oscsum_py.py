"""Pure-NumPy fallback for the half-period summation kernel.

Same contract as the compiled version in ``_oscsum_cy.pyx``: panels are
delimited by consecutive zeros of ``trig(m t r^sigma)`` above ``r_start``,
each integrated with the supplied Gauss-Legendre rule, and the alternating
sum stops after three consecutive panels below ``tau``.  Panels are
processed in vectorised chunks; within a chunk NumPy's pairwise summation
applies, across chunks a Kahan accumulator keeps the rounding error flat.
"""

import numpy as np

_CHUNK = 4096


def osc_trig_sum(coeffs, powers, widths, p, t, sigma, m, use_sin,
                 r_start, tau, max_panels, gl_nodes, gl_weights):
    """Return (total, last_panel_abs, panels_used, converged)."""
    coeffs = np.ascontiguousarray(coeffs, dtype=float)
    powers = np.ascontiguousarray(powers, dtype=float)
    widths = np.ascontiguousarray(widths, dtype=float)

    offset = 0.0 if use_sin else 0.5
    inv_sigma = 1.0 / sigma
    phi_start = t * r_start ** sigma
    j = int(np.ceil(m * phi_start / np.pi - offset))
    if use_sin and j < 1:
        j = 1
    if j < 0:
        j = 0
    while (j + offset) * np.pi / m <= phi_start:
        j += 1

    trig = np.sin if use_sin else np.cos
    total = 0.0
    comp = 0.0
    last_abs = 0.0
    panels = 0
    below_tail = np.zeros(2, dtype=bool)   # carry the run across chunks
    r_left_edge = r_start

    while panels < max_panels:
        chunk = min(_CHUNK, max_panels - panels)
        jj = np.arange(j, j + chunk, dtype=float)
        phi = (jj + offset) * (np.pi / m)
        if sigma == 2.0:
            r_edges = np.sqrt(phi / t)
        elif sigma == 1.0:
            r_edges = phi / t
        else:
            r_edges = (phi / t) ** inv_sigma
        lo = np.concatenate(([r_left_edge], r_edges[:-1]))
        hi = r_edges
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        good = half > 0.0

        r = mid[:, None] + half[:, None] * gl_nodes[None, :]
        r2 = r * r
        amp = np.zeros_like(r)
        for c, k, b in zip(coeffs, powers, widths):
            k_fast = int(k) if k == int(k) else k   # integer powers are cheaper
            amp += c * r2 ** k_fast * np.exp(-b * r2)
        if p != 0.0:
            p_fast = int(p) if p == int(p) else p
            amp *= r ** p_fast
        if sigma == 2.0:
            phase = (m * t) * r2
        elif sigma == 1.0:
            phase = (m * t) * r
        else:
            phase = (m * t) * r ** sigma
        terms = half * ((amp * trig(phase)) @ gl_weights)
        terms[~good] = 0.0

        abs_terms = np.abs(terms)
        below = abs_terms < tau
        below[~good] = False            # degenerate panels do not count
        run = np.concatenate((below_tail, below))
        hits = np.flatnonzero(run[2:] & run[1:-1] & run[:-2])
        if hits.size:
            stop = int(hits[0])         # index into this chunk
            part = terms[: stop + 1]
            psum = float(part.sum())
            y = psum - comp
            total = total + y
            last_abs = float(abs_terms[stop])
            return total, last_abs, panels + stop + 1, True

        psum = float(terms.sum())
        y = psum - comp
        tmp = total + y
        comp = (tmp - total) - y
        total = tmp
        last_abs = float(abs_terms[-1])
        below_tail = below[-2:]
        panels += chunk
        j += chunk
        r_left_edge = r_edges[-1]

    return total, last_abs, panels, False
