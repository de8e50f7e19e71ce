# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of ``extdicke._kernels_py``.

Same algorithms in the same operation order; see the pure-Python module for
the full documentation.  ``extdicke._backend`` selects this module when it
has been built, unless EXTDICKE_FORCE_PY=1.
"""

from libc.math cimport M_PI, atan, cos, fabs, sin, sqrt
from libc.math cimport INFINITY, isinf as c_isinf
from libc.stdlib cimport free, malloc

__all__ = [
    "poly_eval",
    "real_roots",
    "bloch_from_eta",
    "eta_from_point",
    "reduced_energy",
    "energy_theta",
    "grad_residual",
    "solve_point",
    "oracle_minimum",
]

cdef double TWO_PI = 2.0 * M_PI
cdef double _REL_COEFF_EPS = 1e-14
cdef double _ROOT_ACCEPT = 1e-11
cdef double _DEDUPE_EPS = 1e-9
cdef double _TIE_EPS = 1e-10
cdef double _SELECT_EPS = 1e-13
cdef double _DISTINCT_ANGLE = 1e-8
cdef double _RANK_EPS = 1e-6
cdef double _FLAT_EPS = 1e-14
cdef double _INV_GOLDEN = 0.5 * (sqrt(5.0) - 1.0)


cdef inline double _max2(double a, double b):
    return a if a > b else b


cdef double c_poly_eval(double* c, int ncoef, double x):
    cdef double acc = 0.0
    cdef int i
    for i in range(ncoef):
        acc = acc * x + c[i]
    return acc


cdef int c_quadratic(double a, double b, double cc, double* out):
    cdef double disc = b * b - 4.0 * a * cc
    cdef double s, q, r1, r2
    if disc < 0.0:
        return 0
    s = sqrt(disc)
    q = -0.5 * (b + s) if b >= 0.0 else -0.5 * (b - s)
    if q == 0.0:
        out[0] = 0.0
        return 1
    r1 = q / a
    r2 = cc / q
    if r1 <= r2:
        out[0] = r1
        out[1] = r2
    else:
        out[0] = r2
        out[1] = r1
    return 2


cdef double c_bisect(double* c, int ncoef, double a, double b, double fa):
    cdef bint neg = fa < 0.0
    cdef double m, fm
    cdef int i
    for i in range(200):
        m = 0.5 * (a + b)
        if m == a or m == b:
            break
        fm = c_poly_eval(c, ncoef, m)
        if fm == 0.0:
            return m
        if (fm < 0.0) == neg:
            a = m
        else:
            b = m
        if (b - a) <= 1e-15 * _max2(1.0, _max2(fabs(a), fabs(b))):
            break
    return 0.5 * (a + b)


cdef void _sort_inplace(double* x, int n):
    cdef int i, j
    cdef double key
    for i in range(1, n):
        key = x[i]
        j = i - 1
        while j >= 0 and x[j] > key:
            x[j + 1] = x[j]
            j -= 1
        x[j + 1] = key


cdef int c_roots_desc(double* coeffs, int ncoef, double* out):
    # out must hold up to 14 entries (near-multiple roots can be reported
    # both from the critical-point test and from bisection; duplicates are
    # merged by the caller).
    cdef int n = ncoef - 1
    cdef double deriv[4]
    cdef double crits[8]
    cdef double pts[8]
    cdef double vals[8]
    cdef double scale, lead, bound, absx, pw, mag, fa, fb
    cdef int i, j, ncrit, nroot, npts

    if n == 1:
        out[0] = -coeffs[1] / coeffs[0]
        return 1
    if n == 2:
        return c_quadratic(coeffs[0], coeffs[1], coeffs[2], out)

    for i in range(n):
        deriv[i] = coeffs[i] * (n - i)
    ncrit = c_roots_desc(deriv, n, crits)
    _sort_inplace(crits, ncrit)

    lead = fabs(coeffs[0])
    bound = 0.0
    scale = 0.0
    for i in range(ncoef):
        if fabs(coeffs[i]) > scale:
            scale = fabs(coeffs[i])
        if i > 0 and fabs(coeffs[i]) > bound:
            bound = fabs(coeffs[i])
    bound = 1.0 + bound / lead

    nroot = 0
    for i in range(ncrit):
        # Accept a critical point as a (multiple) root only when |p| is
        # small relative to the sum of term magnitudes at x -- the scale of
        # the evaluation noise there.  A looser bound fabricates roots: a
        # near-degenerate quartic can have |p(0)| far below the coefficient
        # scale while its true root sits many orders of magnitude away.
        absx = fabs(crits[i])
        mag = 0.0
        pw = 1.0
        for j in range(ncoef - 1, -1, -1):
            mag += fabs(coeffs[j]) * pw
            pw *= absx
        if fabs(c_poly_eval(coeffs, ncoef, crits[i])) <= _ROOT_ACCEPT * mag:
            out[nroot] = crits[i]
            nroot += 1

    npts = 0
    pts[npts] = -bound
    npts += 1
    for i in range(ncrit):
        if -bound < crits[i] < bound:
            pts[npts] = crits[i]
            npts += 1
    pts[npts] = bound
    npts += 1
    for i in range(npts):
        vals[i] = c_poly_eval(coeffs, ncoef, pts[i])
    for i in range(npts - 1):
        fa = vals[i]
        fb = vals[i + 1]
        if fa == 0.0:
            out[nroot] = pts[i]
            nroot += 1
        elif fa * fb < 0.0:
            out[nroot] = c_bisect(coeffs, ncoef, pts[i], pts[i + 1], fa)
            nroot += 1
    if vals[npts - 1] == 0.0:
        out[nroot] = pts[npts - 1]
        nroot += 1
    return nroot


cdef double c_polish(double* coeffs, double* dcoeffs, double x):
    cdef double p = c_poly_eval(coeffs, 5, x)
    cdef double dp, x1, p1
    cdef int i
    for i in range(3):
        if p == 0.0:
            break
        dp = c_poly_eval(dcoeffs, 4, x)
        if dp == 0.0:
            break
        x1 = x - p / dp
        p1 = c_poly_eval(coeffs, 5, x1)
        if fabs(p1) < fabs(p):
            x = x1
            p = p1
        else:
            break
    return x


cdef int c_real_roots(double c4, double c3, double c2, double c1, double c0,
                      double* out):
    cdef double coeffs[5]
    cdef double dcoeffs[4]
    cdef double cs[5]
    cdef double raw[16]
    cdef double scale = 0.0
    cdef int i, k, ncs, nroot, nout
    cdef bint zero_root = False
    cdef double r

    coeffs[0] = c4; coeffs[1] = c3; coeffs[2] = c2; coeffs[3] = c1; coeffs[4] = c0
    for i in range(5):
        if fabs(coeffs[i]) > scale:
            scale = fabs(coeffs[i])
    if scale == 0.0:
        return 0
    k = 0
    while k < 4 and fabs(coeffs[k]) <= _REL_COEFF_EPS * scale:
        k += 1
    ncs = 5 - k
    for i in range(ncs):
        cs[i] = coeffs[k + i]
    while ncs > 1 and fabs(cs[ncs - 1]) <= _REL_COEFF_EPS * scale:
        ncs -= 1
        zero_root = True
    if ncs > 1:
        nroot = c_roots_desc(cs, ncs, raw)
    else:
        nroot = 0
    if zero_root:
        raw[nroot] = 0.0
        nroot += 1
    if nroot == 0:
        return 0

    dcoeffs[0] = 4.0 * c4; dcoeffs[1] = 3.0 * c3; dcoeffs[2] = 2.0 * c2; dcoeffs[3] = c1
    for i in range(nroot):
        raw[i] = c_polish(coeffs, dcoeffs, raw[i])
    _sort_inplace(raw, nroot)
    nout = 1
    out[0] = raw[0]
    for i in range(1, nroot):
        r = raw[i]
        if r - out[nout - 1] <= _DEDUPE_EPS * _max2(1.0, fabs(r)):
            if fabs(c_poly_eval(coeffs, 5, r)) < fabs(c_poly_eval(coeffs, 5, out[nout - 1])):
                out[nout - 1] = r
        else:
            out[nout] = r
            nout += 1
    return nout


cdef inline double c_reduced_energy(double u, double v, double delta,
                                    double rabi, double s_x, double s_z):
    return -u * s_x * s_x + v * s_z * s_z + delta * s_z + rabi * s_x


cdef inline double c_energy_theta(double u, double v, double delta,
                                  double rabi, double theta):
    return c_reduced_energy(u, v, delta, rabi, 0.5 * cos(theta), 0.5 * sin(theta))


cdef double c_grad_residual(double u, double v, double delta, double rabi,
                            double eta):
    cdef double e2, lhs, d
    if c_isinf(eta):
        return 0.5 * fabs(delta)
    e2 = eta * eta
    lhs = (2.0 * (u + v) * eta * (1.0 - e2)
           + 2.0 * rabi * eta * (1.0 + e2)
           + delta * (1.0 - e2 * e2))
    d = 1.0 + e2
    return fabs(lhs) / (2.0 * d * d)


cdef inline double c_cyclic_dist(double a, double b):
    cdef double d = fabs(a - b)
    return d if d < TWO_PI - d else TWO_PI - d


def poly_eval(coeffs, double x):
    """Horner evaluation; coeffs are highest power first."""
    cdef double acc = 0.0
    for c in coeffs:
        acc = acc * x + <double> c
    return acc


def real_roots(double c4, double c3, double c2, double c1, double c0):
    """All real roots of c4*x^4 + ... + c0, ascending, multiples collapsed."""
    cdef double out[16]
    cdef int n = c_real_roots(c4, c3, c2, c1, c0, out)
    cdef int i
    return tuple([out[i] for i in range(n)])


def bloch_from_eta(double eta):
    """Bloch-circle point (s_x, s_z) for rational parameter eta."""
    cdef double d
    if c_isinf(eta):
        return 0.5, 0.0
    d = 1.0 + eta * eta
    return (eta * eta - 1.0) / (2.0 * d), eta / d


def eta_from_point(double s_x, double s_z):
    """Inverse of bloch_from_eta; the s_x = 1/2 pole maps to +inf."""
    cdef double den = 1.0 - 2.0 * s_x
    cdef double num, mag
    if den <= 0.0:
        return INFINITY
    num = 1.0 + 2.0 * s_x
    if num <= 0.0:
        return 0.0
    mag = sqrt(num / den)
    if s_z < 0.0:
        return -mag
    if s_z == 0.0:
        return 0.0 if s_x < 0.0 else INFINITY
    return mag


def reduced_energy(double u, double v, double delta, double rabi,
                   double s_x, double s_z):
    """Per-atom energy at the optimal photon displacement, on the circle."""
    return c_reduced_energy(u, v, delta, rabi, s_x, s_z)


def energy_theta(double u, double v, double delta, double rabi, double theta):
    return c_energy_theta(u, v, delta, rabi, theta)


def grad_residual(double u, double v, double delta, double rabi, double eta):
    """|de/dtheta| at the point eta: the stationarity defect on the circle."""
    return c_grad_residual(u, v, delta, rabi, eta)


def solve_point(double u, double v, double delta, double rabi):
    """Global minimum of the reduced energy over the Bloch circle.

    Same contract as the pure-Python twin: returns (s_x, s_z, energy, eta,
    residual, degenerate, flat, n_minima).
    """
    cdef double w = u + v
    cdef double scale = _max2(_max2(u, fabs(v)), _max2(rabi, fabs(delta)))
    cdef double roots[16]
    cdef double th[17]
    cdef double sx[17]
    cdef double sz[17]
    cdef double en[17]
    cdef double et[17]
    cdef int order[17]
    cdef int nr, nc, i, j, tmp, n_minima, rep
    cdef double s_x, s_z, e, d, e_min, sel_tol, tie_tol, ei, ep, nx
    cdef bint degenerate

    if scale == 0.0 or _max2(fabs(delta), _max2(rabi, fabs(w))) <= _FLAT_EPS * scale:
        e = c_reduced_energy(u, v, delta, rabi, -0.5, 0.0)
        return (-0.5, 0.0, e, 0.0, c_grad_residual(u, v, delta, rabi, 0.0),
                True, True, 0)

    nr = c_real_roots(delta, 2.0 * (w - rabi), 0.0, -2.0 * (w + rabi), -delta, roots)
    nc = 0
    for i in range(nr):
        d = 1.0 + roots[i] * roots[i]
        s_x = (roots[i] * roots[i] - 1.0) / (2.0 * d)
        s_z = roots[i] / d
        th[nc] = M_PI - 2.0 * atan(roots[i])
        sx[nc] = s_x
        sz[nc] = s_z
        en[nc] = c_reduced_energy(u, v, delta, rabi, s_x, s_z)
        et[nc] = roots[i]
        nc += 1
    if fabs(delta) <= _FLAT_EPS * scale:
        th[nc] = 0.0
        sx[nc] = 0.5
        sz[nc] = 0.0
        en[nc] = c_reduced_energy(u, v, delta, rabi, 0.5, 0.0)
        et[nc] = INFINITY
        nc += 1
    if nc == 0:
        e = c_reduced_energy(u, v, delta, rabi, -0.5, 0.0)
        return (-0.5, 0.0, e, 0.0, c_grad_residual(u, v, delta, rabi, 0.0),
                True, True, 0)

    for i in range(nc):
        order[i] = i
    for i in range(1, nc):
        j = i
        while j > 0 and th[order[j - 1]] > th[order[j]]:
            tmp = order[j - 1]; order[j - 1] = order[j]; order[j] = tmp
            j -= 1

    n_minima = 0
    if nc == 1:
        n_minima = 1
    else:
        for i in range(nc):
            ei = en[order[i]]
            ep = en[order[i - 1]] if i > 0 else en[order[nc - 1]]
            nx = en[order[i + 1]] if i < nc - 1 else en[order[0]]
            if ei <= ep and ei <= nx:
                n_minima += 1

    e_min = en[0]
    for i in range(1, nc):
        if en[i] < e_min:
            e_min = en[i]
    sel_tol = _SELECT_EPS * _max2(1.0, scale)
    rep = -1
    for j in range(nc):
        i = order[j]  # tie scan in theta order, matching the Python list order
        if en[i] > e_min + sel_tol:
            continue
        if rep < 0:
            rep = i
        elif sz[i] > sz[rep] + _RANK_EPS:
            rep = i
        elif fabs(sz[i] - sz[rep]) <= _RANK_EPS and sx[i] > sx[rep] + _RANK_EPS:
            rep = i
    tie_tol = _TIE_EPS * _max2(1.0, scale)
    degenerate = False
    for i in range(nc):
        if en[i] <= e_min + tie_tol and c_cyclic_dist(th[i], th[rep]) > _DISTINCT_ANGLE:
            degenerate = True
            break
    return (sx[rep], sz[rep], en[rep], et[rep],
            c_grad_residual(u, v, delta, rabi, et[rep]),
            degenerate, False, n_minima)


cdef (double, double) c_golden_min(double u, double v, double delta,
                                   double rabi, double lo, double hi):
    cdef double a = lo, b = hi
    cdef double c = b - _INV_GOLDEN * (b - a)
    cdef double d = a + _INV_GOLDEN * (b - a)
    cdef double fc = c_energy_theta(u, v, delta, rabi, c)
    cdef double fd = c_energy_theta(u, v, delta, rabi, d)
    cdef double t
    cdef int i
    for i in range(80):
        if b - a <= 1e-10:
            break
        if fc <= fd:
            b = d; d = c; fd = fc
            c = b - _INV_GOLDEN * (b - a)
            fc = c_energy_theta(u, v, delta, rabi, c)
        else:
            a = c; c = d; fc = fd
            d = a + _INV_GOLDEN * (b - a)
            fd = c_energy_theta(u, v, delta, rabi, d)
    t = 0.5 * (a + b)
    return t, c_energy_theta(u, v, delta, rabi, t)


def oracle_minimum(double u, double v, double delta, double rabi, n_points):
    """Brute-force minimum of the reduced energy over the Bloch circle.

    Same contract as the pure-Python twin: returns (s_x, s_z, energy, theta,
    degenerate, flat, n_minima).
    """
    cdef int n = int(n_points)
    cdef double h = TWO_PI / n
    cdef double* energies = <double*> malloc(n * sizeof(double))
    cdef double scale = _max2(_max2(u, fabs(v)), _max2(rabi, fabs(delta)))
    cdef double e_lo, e_hi, e, ep, nx, t0, t, e_min, sel_tol, tie_tol
    cdef double loc_e[8]
    cdef int loc_i[8]
    cdef double ct[8]
    cdef double ce[8]
    cdef int i, j, i_lo, nloc, nclust, rep
    cdef bint placed, degenerate
    cdef double s_x, s_z, theta

    if energies == NULL:
        raise MemoryError()
    try:
        for i in range(n):
            energies[i] = c_energy_theta(u, v, delta, rabi, -M_PI + h * i)
        e_lo = energies[0]; e_hi = energies[0]; i_lo = 0
        for i in range(1, n):
            if energies[i] < e_lo:
                e_lo = energies[i]
                i_lo = i
            if energies[i] > e_hi:
                e_hi = energies[i]
        if e_hi - e_lo <= 1e-12 * _max2(1.0, scale):
            e = c_reduced_energy(u, v, delta, rabi, -0.5, 0.0)
            return (-0.5, 0.0, e, M_PI, True, True, 0)

        # Keep the 8 lowest grid-local minima, ordered by (energy, index).
        nloc = 0
        for i in range(n):
            e = energies[i]
            ep = energies[i - 1] if i > 0 else energies[n - 1]
            nx = energies[i + 1] if i < n - 1 else energies[0]
            if e <= ep and e <= nx and (e < ep or e < nx):
                j = nloc if nloc < 8 else 7
                if nloc < 8:
                    nloc += 1
                elif e >= loc_e[7] and not (e == loc_e[7] and i < loc_i[7]):
                    continue
                while j > 0 and (loc_e[j - 1] > e or (loc_e[j - 1] == e and loc_i[j - 1] > i)):
                    loc_e[j] = loc_e[j - 1]
                    loc_i[j] = loc_i[j - 1]
                    j -= 1
                loc_e[j] = e
                loc_i[j] = i
        if nloc == 0:
            # A fp-flat plateau hosting the minimum: fall back to the arg min.
            loc_e[0] = e_lo
            loc_i[0] = i_lo
            nloc = 1
    finally:
        free(energies)

    nclust = 0
    for i in range(nloc):
        t0 = -M_PI + h * loc_i[i]
        t, e = c_golden_min(u, v, delta, rabi, t0 - h, t0 + h)
        placed = False
        for j in range(nclust):
            if c_cyclic_dist(t, ct[j]) <= 1e-6:
                if e < ce[j]:
                    ct[j] = t
                    ce[j] = e
                placed = True
                break
        if not placed:
            ct[nclust] = t
            ce[nclust] = e
            nclust += 1

    e_min = ce[0]
    for i in range(1, nclust):
        if ce[i] < e_min:
            e_min = ce[i]
    sel_tol = _SELECT_EPS * _max2(1.0, scale)
    rep = -1
    for i in range(nclust):
        if ce[i] > e_min + sel_tol:
            continue
        if rep < 0:
            rep = i
        elif sin(ct[i]) > sin(ct[rep]) + _RANK_EPS:
            rep = i
        elif (fabs(sin(ct[i]) - sin(ct[rep])) <= _RANK_EPS
              and cos(ct[i]) > cos(ct[rep]) + _RANK_EPS):
            rep = i
    tie_tol = _TIE_EPS * _max2(1.0, scale)
    degenerate = False
    for i in range(nclust):
        if ce[i] <= e_min + tie_tol and c_cyclic_dist(ct[i], ct[rep]) > _DISTINCT_ANGLE:
            degenerate = True
            break
    theta = ct[rep]
    s_x = 0.5 * cos(theta)
    s_z = 0.5 * sin(theta)
    return (s_x, s_z, ce[rep], theta, degenerate, False, nclust)
