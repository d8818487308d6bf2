# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twin of d2dpa.fdnosic.fd_nosic_search.

Same algorithm and constants as the pure-Python reference; the tests assert
the two backends agree.
"""

from libc.math cimport log2, sqrt


cdef double INVPHI = (sqrt(5.0) - 1.0) / 2.0
cdef int N_COARSE = 96
cdef int N_GOLDEN = 48


cdef struct Ctx:
    double hd, b1, b2, h1u, h2u, bu, e1, e2, s, q, bw, p1m, p2m, pum, ccut


cdef struct Best:
    double p1, p2, pu, rate


cdef inline void _point(Ctx *c, int face, double t,
                        double *p1, double *p2, double *pu) nogil:
    if face == 0:
        p1[0] = c.p1m
        p2[0] = t
        pu[0] = c.q * (c.p1m * c.b1 + t * c.b2 + c.s) / c.bu
    elif face == 1:
        p1[0] = t
        p2[0] = c.p2m
        pu[0] = c.q * (t * c.b1 + c.p2m * c.b2 + c.s) / c.bu
    else:
        p1[0] = t
        p2[0] = (c.ccut - t * c.b1) / c.b2
        if p2[0] < 0.0:
            p2[0] = 0.0
        pu[0] = c.pum


cdef inline double _rate(Ctx *c, double p1, double p2, double pu) nogil:
    cdef double den1 = pu * c.h1u + c.e1 * p1 + c.s
    cdef double den2 = pu * c.h2u + c.e2 * p2 + c.s
    return c.bw * log2((1.0 + p1 * c.hd / den2) * (1.0 + p2 * c.hd / den1))


cdef inline double _eval(Ctx *c, int face, double t) nogil:
    cdef double p1, p2, pu
    _point(c, face, t, &p1, &p2, &pu)
    return _rate(c, p1, p2, pu)


cdef inline void _consider(Ctx *c, int face, double t, Best *best) nogil:
    cdef double p1, p2, pu, r
    _point(c, face, t, &p1, &p2, &pu)
    r = _rate(c, p1, p2, pu)
    if r > best.rate:
        best.p1 = p1
        best.p2 = p2
        best.pu = pu
        best.rate = r


cdef void _scan(Ctx *c, int face, double lo, double hi, Best *best) nogil:
    cdef double ts[97]
    cdef double fs[97]
    cdef int i, j, i_lo, i_hi
    cdef bint left_ok, right_ok
    cdef double a, b, cc, d, fc, fd, t_best

    if hi < lo:
        return
    if hi == lo:
        _consider(c, face, lo, best)
        return
    for i in range(N_COARSE + 1):
        ts[i] = lo + (hi - lo) * i / N_COARSE
        fs[i] = _eval(c, face, ts[i])
    for i in range(N_COARSE + 1):
        left_ok = i == 0 or fs[i] >= fs[i - 1]
        right_ok = i == N_COARSE or fs[i] >= fs[i + 1]
        if not (left_ok and right_ok):
            continue
        i_lo = i - 1 if i > 0 else 0
        i_hi = i + 1 if i < N_COARSE else N_COARSE
        a = ts[i_lo]
        b = ts[i_hi]
        cc = b - (b - a) * INVPHI
        d = a + (b - a) * INVPHI
        fc = _eval(c, face, cc)
        fd = _eval(c, face, d)
        for j in range(N_GOLDEN):
            if fc > fd:
                b = d
                d = cc
                fd = fc
                cc = b - (b - a) * INVPHI
                fc = _eval(c, face, cc)
            else:
                a = cc
                cc = d
                fc = fd
                d = a + (b - a) * INVPHI
                fd = _eval(c, face, d)
        t_best = cc if fc > fd else d
        if fs[i] > (fc if fc > fd else fd):
            t_best = ts[i]
        _consider(c, face, t_best, best)


def fd_nosic_search(double h_d, double h_b_d1, double h_b_d2, double h_d1_u,
                    double h_d2_u, double h_b_u, double eta1, double eta2,
                    double noise_w, double q, double bandwidth_hz,
                    double p1_max, double p2_max, double pu_max):
    """Best (p1, p2, pu, d2d_rate) without SIC; rate is -1 when infeasible."""
    cdef Ctx c
    cdef Best best
    cdef double hi, lo

    c.hd = h_d
    c.b1 = h_b_d1
    c.b2 = h_b_d2
    c.h1u = h_d1_u
    c.h2u = h_d2_u
    c.bu = h_b_u
    c.e1 = eta1
    c.e2 = eta2
    c.s = noise_w
    c.q = q
    c.bw = bandwidth_hz
    c.p1m = p1_max
    c.p2m = p2_max
    c.pum = pu_max
    c.ccut = 0.0

    best.p1 = 0.0
    best.p2 = 0.0
    best.pu = 0.0
    best.rate = -1.0

    if q == 0.0:
        _scan(&c, 0, 0.0, p2_max, &best)
        _scan(&c, 1, 0.0, p1_max, &best)
        return best.p1, best.p2, best.pu, best.rate

    c.ccut = pu_max * h_b_u / q - noise_w
    if c.ccut < 0.0:
        return 0.0, 0.0, 0.0, -1.0

    if p1_max * h_b_d1 <= c.ccut:
        hi = (c.ccut - p1_max * h_b_d1) / h_b_d2
        if p2_max < hi:
            hi = p2_max
        _scan(&c, 0, 0.0, hi, &best)
    if p2_max * h_b_d2 <= c.ccut:
        hi = (c.ccut - p2_max * h_b_d2) / h_b_d1
        if p1_max < hi:
            hi = p1_max
        _scan(&c, 1, 0.0, hi, &best)
    lo = (c.ccut - p2_max * h_b_d2) / h_b_d1
    if lo < 0.0:
        lo = 0.0
    hi = c.ccut / h_b_d1
    if p1_max < hi:
        hi = p1_max
    _scan(&c, 2, lo, hi, &best)
    return best.p1, best.p2, best.pu, best.rate
